#pragma once

// End-to-end parameter recovery: encode measured circle data exactly like a
// training input, route through N1 and then N2 or N3, and run the 1000-trial
// evaluation protocol with optional sup-norm-scaled uniform noise.

#include <cstdint>
#include <string>
#include <vector>

#include "crackscat/common.hpp"
#include "crackscat/forward.hpp"
#include "crackscat/nn.hpp"

namespace crackscat::inverse {

struct Measurement {
    std::vector<cdouble> data;  // u at the observation points
    int provenance = 0;         // excitation case 1-4, 0 = synthetic
};

struct NoiseSpec {
    double amplitude = 0.2;  // fraction of the overall sup norm
};

struct ModelTriple {
    nn::MlpModel n1, n2, n3;
};

ModelTriple load_models(const std::string& dir);

// [Re; Im] of data/||data||, the dataset encoding.
std::vector<double> encode_measurement(const Measurement& meas);

struct Prediction {
    double theta;
    double a;
    bool routed_negative;  // N1 said theta < 0
};

Prediction recover(const Measurement& meas, const ModelTriple& models,
                   const PhysicsConfig& phys);

// Adds an independent U[-amp, amp] * s draw to every real coordinate, where
// s is the sup norm over all 2 N_S real coordinates.
Measurement add_noise(const Measurement& meas, const NoiseSpec& spec, Rng& rng);

struct TrialResult {
    int trial = 0;
    int kind = 0;  // excitation case
    double theta = 0, a = 0;
    double theta_hat = 0, a_hat = 0;
    double err_sin_theta = 0, err_a = 0;
    bool noisy = false;
    double micros = 0;  // inference time (encode + recover)
    bool failed = false;
    std::string error;
};

struct EvalSummary {
    int trials = 0;
    int failures = 0;
    double mean_err_sin_theta = 0;
    double mean_err_a = 0;
    double noise_amplitude = 0;
    uint64_t seed = 0;
};

struct EvalConfig {
    int trials = 1000;
    uint64_t seed = 1;
    double noise_amplitude = 0;  // 0 = clean
    int n_dense = 256;
    double trunc_tol = 1e-10;
};

struct EvalOutput {
    std::vector<TrialResult> results;
    EvalSummary summary;
    std::vector<double> sorted_err_sin_theta;  // ascending, failed trials excluded
    std::vector<double> sorted_err_a;
};

EvalOutput evaluate(const ModelTriple& models, const PhysicsConfig& phys, const EvalConfig& cfg);

void write_trials_csv(const EvalOutput& out, const std::string& path,
                      const std::string& config_echo = "");

}  // namespace crackscat::inverse
