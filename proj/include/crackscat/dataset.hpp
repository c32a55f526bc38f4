#pragma once

// Training-data generation and the CRKD binary container.
//
// One sample: draw (theta, a, o, l) uniformly, assemble the scale-free
// forward matrix, take its five leading left singular vectors v_1..v_5 in
// data space, draw r uniformly in the unit ball of C^5, and encode
// w = sum r_i v_i as [Re(w/|w|); Im(w/|w|)] with target (theta, a).
//
// CRKD layout (little-endian):
//   magic "CRKD" | version u32 | count u64 | N_S u32 | N u32 |
//   k f64 | R f64 | seed u64
// then `count` records of
//   2*N_S f32 inputs | 2 f32 normalized targets | 2 f32 raw (theta, a).

#include <cstdint>
#include <string>
#include <vector>

#include "crackscat/common.hpp"
#include "crackscat/geometry.hpp"

namespace crackscat::dataset {

inline constexpr uint32_t kDatasetVersion = 1;

struct SampleConfig {
    PhysicsConfig phys;
    uint64_t seed = 1;

    double theta_lo = -0.5 * kPi, theta_hi = 0.5 * kPi;
    double o_lo = -1.0, o_hi = 1.0;
    double l_lo = 1.0, l_hi = 3.0;
};

struct TrainingSample {
    std::vector<double> input;  // length 2*N_S, unit norm
    double theta = 0;
    double a = 0;
};

std::pair<CrackGeometry, SupportInterval> sample_geometry_and_support(Rng& rng,
                                                                      const SampleConfig& cfg);

// Uniform on the unit ball of C^dim (Gaussian direction times U^(1/(2*dim))).
std::vector<cdouble> sample_complex_ball(Rng& rng, int dim = 5);

TrainingSample make_sample(Rng& rng, const SampleConfig& cfg);

// [Re(w/|w|); Im(w/|w|)] — the frozen input encoding shared with inference.
std::vector<double> encode_complex(const std::vector<cdouble>& w);

struct Dataset {
    uint64_t count = 0;
    uint32_t n_obs = 0;
    uint32_t n_lead = 0;
    double k = 0, radius = 0;
    uint64_t seed = 0;
    // flattened records, count * (2*n_obs) inputs and count * 2 of each target kind
    std::vector<float> inputs;
    std::vector<float> targets_norm;  // (theta * 2/pi, a / a_max)
    std::vector<float> targets_raw;   // (theta, a)

    const float* input(uint64_t i) const { return &inputs[i * 2 * n_obs]; }
};

void generate_dataset(const SampleConfig& cfg, uint64_t count, const std::string& path,
                      const std::function<void(uint64_t done, uint64_t total)>& progress = {});

Dataset load_dataset(const std::string& path);

// Header-only read for `info`.
struct DatasetHeader {
    uint32_t version;
    uint64_t count;
    uint32_t n_obs, n_lead;
    double k, radius;
    uint64_t seed;
};
DatasetHeader read_dataset_header(const std::string& path);

}  // namespace crackscat::dataset
