#include "crackscat/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "crackscat/forward.hpp"
#include "crackscat/spectral.hpp"

namespace crackscat::dataset {

std::pair<CrackGeometry, SupportInterval> sample_geometry_and_support(Rng& rng,
                                                                      const SampleConfig& cfg) {
    CrackGeometry g;
    g.theta = rng.uniform(cfg.theta_lo, cfg.theta_hi);
    g.a = rng.uniform(-cfg.phys.a_max, cfg.phys.a_max);
    SupportInterval s;
    s.o = rng.uniform(cfg.o_lo, cfg.o_hi);
    s.l = rng.uniform(cfg.l_lo, cfg.l_hi);
    return {g, s};
}

std::vector<cdouble> sample_complex_ball(Rng& rng, int dim) {
    std::vector<cdouble> r(dim);
    double s = 0;
    for (int i = 0; i < dim; ++i) {
        const double re = rng.normal(), im = rng.normal();
        r[i] = {re, im};
        s += re * re + im * im;
    }
    s = std::sqrt(s);
    if (s < 1e-300) return sample_complex_ball(rng, dim);
    const double radius = std::pow(rng.uniform(), 1.0 / (2.0 * dim));
    const double f = radius / s;
    for (auto& z : r) z *= f;
    return r;
}

std::vector<double> encode_complex(const std::vector<cdouble>& w) {
    double nrm = 0;
    for (const cdouble& z : w) nrm += std::norm(z);
    nrm = std::sqrt(nrm);
    if (nrm <= 0) throw Error("encode_complex: zero vector");
    std::vector<double> x(2 * w.size());
    for (size_t i = 0; i < w.size(); ++i) {
        x[i] = w[i].real() / nrm;
        x[w.size() + i] = w[i].imag() / nrm;
    }
    return x;
}

TrainingSample make_sample(Rng& rng, const SampleConfig& cfg) {
    const auto [geom, sup] = sample_geometry_and_support(rng, cfg);
    // scale-free matrix: the constant factor is irrelevant for singular vectors
    const forward::ForwardMatrix fm = forward::assemble_forward_matrix(
        geom, sup, cfg.phys.coarse_grid(), cfg.phys.observations(), cfg.phys.k, false);
    const spectral::LeadingSubspace lead =
        spectral::leading_subspace(fm.entries, cfg.phys.n_lead);

    std::vector<cdouble> w(cfg.phys.n_obs);
    for (int attempt = 0; attempt < 16; ++attempt) {
        const std::vector<cdouble> r = sample_complex_ball(rng, cfg.phys.n_lead);
        std::fill(w.begin(), w.end(), cdouble(0));
        for (int j = 0; j < cfg.phys.n_lead; ++j)
            for (int i = 0; i < cfg.phys.n_obs; ++i) w[i] += r[j] * lead.left(i, j);
        double nrm = 0;
        for (const cdouble& z : w) nrm += std::norm(z);
        if (std::sqrt(nrm) >= 1e-12) {
            TrainingSample ts;
            ts.input = encode_complex(w);
            ts.theta = geom.theta;
            ts.a = geom.a;
            return ts;
        }
    }
    throw Error("make_sample: degenerate coefficient draw persisted after 16 retries");
}

namespace {

template <typename T>
void put(std::ofstream& f, const T& v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& f) {
    T v;
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!f) throw Error("dataset file truncated");
    return v;
}

constexpr char kMagic[4] = {'C', 'R', 'K', 'D'};

}  // namespace

void generate_dataset(const SampleConfig& cfg, uint64_t count, const std::string& path,
                      const std::function<void(uint64_t, uint64_t)>& progress) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + path + " for writing");
    f.write(kMagic, 4);
    put(f, kDatasetVersion);
    put(f, count);
    put(f, static_cast<uint32_t>(cfg.phys.n_obs));
    put(f, static_cast<uint32_t>(cfg.phys.n_lead));
    put(f, cfg.phys.k);
    put(f, cfg.phys.radius);
    put(f, cfg.seed);

    const uint64_t record_floats = 2ull * cfg.phys.n_obs + 4;
    const uint64_t chunk = 4096;
    std::vector<float> buf;
    for (uint64_t base = 0; base < count; base += chunk) {
        const uint64_t n = std::min(chunk, count - base);
        buf.assign(n * record_floats, 0.0f);
        // samples are independent; each index derives its own stream so the
        // file bytes depend only on (seed, count)
        parallel_for(static_cast<int64_t>(n), [&](int64_t i) {
            Rng rng = Rng::sub(cfg.seed, base + static_cast<uint64_t>(i));
            const TrainingSample ts = make_sample(rng, cfg);
            float* rec = &buf[static_cast<uint64_t>(i) * record_floats];
            for (size_t j = 0; j < ts.input.size(); ++j) rec[j] = static_cast<float>(ts.input[j]);
            rec[record_floats - 4] = static_cast<float>(ts.theta * 2.0 / kPi);
            rec[record_floats - 3] = static_cast<float>(ts.a / cfg.phys.a_max);
            rec[record_floats - 2] = static_cast<float>(ts.theta);
            rec[record_floats - 1] = static_cast<float>(ts.a);
        });
        f.write(reinterpret_cast<const char*>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(float)));
        if (progress) progress(base + n, count);
    }
    if (!f) throw Error("write failure on " + path);
}

DatasetHeader read_dataset_header(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw Error(path + ": not a CRKD dataset (bad magic)");
    DatasetHeader h;
    h.version = get<uint32_t>(f);
    if (h.version != kDatasetVersion)
        throw Error(path + ": unsupported CRKD version " + std::to_string(h.version));
    h.count = get<uint64_t>(f);
    h.n_obs = get<uint32_t>(f);
    h.n_lead = get<uint32_t>(f);
    h.k = get<double>(f);
    h.radius = get<double>(f);
    h.seed = get<uint64_t>(f);
    return h;
}

Dataset load_dataset(const std::string& path) {
    const DatasetHeader h = read_dataset_header(path);
    std::ifstream f(path, std::ios::binary);
    f.seekg(4 + 4 + 8 + 4 + 4 + 8 + 8 + 8);

    Dataset d;
    d.count = h.count;
    d.n_obs = h.n_obs;
    d.n_lead = h.n_lead;
    d.k = h.k;
    d.radius = h.radius;
    d.seed = h.seed;

    const uint64_t record_floats = 2ull * h.n_obs + 4;
    d.inputs.resize(h.count * 2 * h.n_obs);
    d.targets_norm.resize(h.count * 2);
    d.targets_raw.resize(h.count * 2);

    std::vector<float> rec(record_floats);
    for (uint64_t i = 0; i < h.count; ++i) {
        f.read(reinterpret_cast<char*>(rec.data()),
               static_cast<std::streamsize>(record_floats * sizeof(float)));
        if (!f) throw Error(path + ": truncated record " + std::to_string(i));
        double nrm = 0;
        for (uint32_t j = 0; j < 2 * h.n_obs; ++j) {
            d.inputs[i * 2 * h.n_obs + j] = rec[j];
            nrm += static_cast<double>(rec[j]) * rec[j];
        }
        if (std::abs(std::sqrt(nrm) - 1.0) > 1e-5)
            throw Error(path + ": record " + std::to_string(i) + " input is not unit norm");
        d.targets_norm[i * 2] = rec[record_floats - 4];
        d.targets_norm[i * 2 + 1] = rec[record_floats - 3];
        d.targets_raw[i * 2] = rec[record_floats - 2];
        d.targets_raw[i * 2 + 1] = rec[record_floats - 1];
    }
    // no trailing garbage
    f.peek();
    if (!f.eof()) throw Error(path + ": size does not match header count");
    return d;
}

}  // namespace crackscat::dataset
