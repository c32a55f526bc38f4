#include "crackscat/inverse.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "crackscat/dataset.hpp"

namespace crackscat::inverse {

ModelTriple load_models(const std::string& dir) {
    ModelTriple t;
    t.n1 = nn::load_model(dir + "/n1.crkm");
    t.n2 = nn::load_model(dir + "/n2.crkm");
    t.n3 = nn::load_model(dir + "/n3.crkm");
    if (t.n1.kind != nn::NetKind::N1 || t.n2.kind != nn::NetKind::N2
        || t.n3.kind != nn::NetKind::N3)
        throw Error(dir + ": checkpoint kinds do not match their file names");
    return t;
}

std::vector<double> encode_measurement(const Measurement& meas) {
    if (meas.data.empty()) throw Error("encode_measurement: empty measurement");
    return dataset::encode_complex(meas.data);
}

Prediction recover(const Measurement& meas, const ModelTriple& models,
                   const PhysicsConfig& phys) {
    const std::vector<double> x = encode_measurement(meas);
    if (static_cast<int>(x.size()) != models.n1.input_dim())
        throw Error("recover: measurement size does not match the models");
    const double theta_probe = models.n1.forward(x)[0];
    const bool negative = theta_probe < 0;
    const std::vector<double> out = (negative ? models.n2 : models.n3).forward(x);
    Prediction p;
    p.routed_negative = negative;
    p.theta = std::clamp(out[0] * 0.5 * kPi, -0.5 * kPi, 0.5 * kPi);
    p.a = std::clamp(out[1] * phys.a_max, -phys.a_max, phys.a_max);
    return p;
}

Measurement add_noise(const Measurement& meas, const NoiseSpec& spec, Rng& rng) {
    Measurement out = meas;
    if (spec.amplitude < 0) throw Error("add_noise: negative amplitude");
    if (spec.amplitude == 0) return out;
    double sup = 0;
    for (const cdouble& z : meas.data)
        sup = std::max({sup, std::abs(z.real()), std::abs(z.imag())});
    for (cdouble& z : out.data) {
        const double dre = rng.uniform(-spec.amplitude, spec.amplitude) * sup;
        const double dim = rng.uniform(-spec.amplitude, spec.amplitude) * sup;
        z += cdouble(dre, dim);
    }
    return out;
}

EvalOutput evaluate(const ModelTriple& models, const PhysicsConfig& phys, const EvalConfig& cfg) {
    if (cfg.trials < 1) throw Error("evaluate: need at least one trial");
    EvalOutput out;
    out.results.assign(cfg.trials, TrialResult{});

    dataset::SampleConfig scfg;
    scfg.phys = phys;

    parallel_for(cfg.trials, [&](int64_t i) {
        TrialResult& tr = out.results[i];
        tr.trial = static_cast<int>(i);
        tr.noisy = cfg.noise_amplitude > 0;
        Rng rng = Rng::sub(cfg.seed, static_cast<uint64_t>(i), 0);
        Rng noise_rng = Rng::sub(cfg.seed, static_cast<uint64_t>(i), 1);

        const auto [geom, sup] = dataset::sample_geometry_and_support(rng, scfg);
        tr.theta = geom.theta;
        tr.a = geom.a;

        forward::CaseSpec cs;
        tr.kind = cs.kind = 1 + static_cast<int>(rng.uniform_index(4));
        if (cs.kind == 1) {
            cs.eta_angle = rng.uniform(0.0, 2.0 * kPi);
        } else if (cs.kind == 2 || cs.kind == 3) {
            const double lo = (cs.kind == 2) ? 3.0 : 5.0;
            const double hi = (cs.kind == 2) ? 3.5 : 7.0;
            const double r = rng.uniform(lo, hi);
            const double phi = rng.uniform(0.0, 2.0 * kPi);
            cs.source = {r * std::cos(phi), r * std::sin(phi)};
        }

        try {
            Measurement meas;
            meas.provenance = cs.kind;
            meas.data =
                forward::forward_data_for_case(cs, geom, sup, phys, cfg.n_dense, cfg.trunc_tol);
            if (cfg.noise_amplitude > 0)
                meas = add_noise(meas, NoiseSpec{cfg.noise_amplitude}, noise_rng);

            const auto t0 = std::chrono::steady_clock::now();
            const Prediction p = recover(meas, models, phys);
            tr.micros =
                std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0)
                    .count();
            tr.theta_hat = p.theta;
            tr.a_hat = p.a;
            tr.err_sin_theta = std::abs(std::sin(p.theta) - std::sin(geom.theta));
            tr.err_a = std::abs(p.a - geom.a);
        } catch (const std::exception& e) {
            tr.failed = true;
            tr.error = e.what();
        }
    });

    EvalSummary& s = out.summary;
    s.trials = cfg.trials;
    s.noise_amplitude = cfg.noise_amplitude;
    s.seed = cfg.seed;
    double se = 0, ae = 0;
    int ok = 0;
    for (const TrialResult& tr : out.results) {
        if (tr.failed) {
            s.failures++;
            continue;
        }
        se += tr.err_sin_theta;
        ae += tr.err_a;
        ok++;
    }
    if (ok > 0) {
        s.mean_err_sin_theta = se / ok;
        s.mean_err_a = ae / ok;
    }
    for (const TrialResult& tr : out.results) {
        if (tr.failed) continue;
        out.sorted_err_sin_theta.push_back(tr.err_sin_theta);
        out.sorted_err_a.push_back(tr.err_a);
    }
    std::sort(out.sorted_err_sin_theta.begin(), out.sorted_err_sin_theta.end());
    std::sort(out.sorted_err_a.begin(), out.sorted_err_a.end());
    return out;
}

void write_trials_csv(const EvalOutput& out, const std::string& path,
                      const std::string& config_echo) {
    std::ofstream f(path);
    if (!f) throw Error("cannot write " + path);
    if (!config_echo.empty()) {
        std::string line;
        std::istringstream in(config_echo);
        while (std::getline(in, line)) f << "# " << line << "\n";
    }
    f << "trial,case,theta,a,theta_hat,a_hat,err_sin_theta,err_a,noisy,micros\n";
    f.precision(12);
    for (const TrialResult& tr : out.results) {
        if (tr.failed) {
            f << tr.trial << "," << tr.kind << ",,,,,,," << (tr.noisy ? 1 : 0) << ",\n";
            continue;
        }
        f << tr.trial << "," << tr.kind << "," << tr.theta << "," << tr.a << "," << tr.theta_hat
          << "," << tr.a_hat << "," << tr.err_sin_theta << "," << tr.err_a << ","
          << (tr.noisy ? 1 : 0) << "," << tr.micros << "\n";
    }
}

}  // namespace crackscat::inverse
