#include "crackscat/stability.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

#include "crackscat/forward.hpp"
#include "crackscat/spectral.hpp"

namespace crackscat::spectral {

double param_metric(const std::vector<double>& m, const std::vector<double>& m2) {
    const double dc = std::cos(2 * m[0]) - std::cos(2 * m2[0]);
    const double ds = std::sin(2 * m[0]) - std::sin(2 * m2[0]);
    const double da = m[1] - m2[1];
    return std::sqrt(dc * dc + ds * ds + da * da);
}

namespace {

double euclid_metric(const std::vector<double>& m, const std::vector<double>& m2) {
    double s = 0;
    for (size_t i = 0; i < m.size(); ++i) s += (m[i] - m2[i]) * (m[i] - m2[i]);
    return std::sqrt(s);
}

// ambient = frame * coeff
std::vector<cdouble> from_frame(const CMatrix& frame, const std::vector<cdouble>& coeff) {
    std::vector<cdouble> x(frame.rows, cdouble(0));
    for (int j = 0; j < frame.cols; ++j)
        for (int i = 0; i < frame.rows; ++i) x[i] += frame(i, j) * coeff[j];
    return x;
}

double vnorm(const std::vector<cdouble>& x) {
    double s = 0;
    for (const cdouble& z : x) s += std::norm(z);
    return std::sqrt(s);
}

// coefficients uniform on the unit sphere of C^n (or R^n for real families)
std::vector<cdouble> sphere_point(Rng& rng, int n, bool real_valued) {
    std::vector<cdouble> c(n);
    double s = 0;
    for (int i = 0; i < n; ++i) {
        const double re = rng.normal();
        const double im = real_valued ? 0.0 : rng.normal();
        c[i] = {re, im};
        s += re * re + im * im;
    }
    s = std::sqrt(s);
    if (s < 1e-300) return sphere_point(rng, n, real_valued);
    for (auto& z : c) z /= s;
    return c;
}

}  // namespace

double stability_ratio(const OperatorFamily& fam, const std::vector<double>& m,
                       const std::vector<double>& m2, const std::vector<cdouble>& u_coeff,
                       const std::vector<cdouble>& v_coeff, int n_lead) {
    const CMatrix am = fam.op(m);
    const CMatrix am2 = fam.op(m2);
    const LeadingSubspace lu = leading_subspace(am, n_lead);
    const LeadingSubspace lv = leading_subspace(am2, n_lead);
    const std::vector<cdouble> u = from_frame(lu.right, u_coeff);
    const std::vector<cdouble> v = from_frame(lv.right, v_coeff);

    std::vector<cdouble> au = matvec(am, u);
    const std::vector<cdouble> av = matvec(am2, v);
    for (size_t i = 0; i < au.size(); ++i) au[i] -= av[i];

    std::vector<cdouble> diff(u.size());
    for (size_t i = 0; i < u.size(); ++i) diff[i] = u[i] - v[i];

    const double den = fam.metric(m, m2) * vnorm(v) + vnorm(diff);
    if (den == 0.0) throw Error("stability_ratio: zero denominator (m = m' and u = v)");
    return vnorm(au) / den;
}

StabilityReport estimate_stability_constant(const OperatorFamily& fam, int n_lead, int samples,
                                            uint64_t seed) {
    if (samples < 1) throw Error("estimate_stability_constant: need at least one sample");
    StabilityReport rep;
    rep.family = fam.name;
    rep.n_lead = n_lead;
    rep.samples = samples;
    rep.seed = seed;
    rep.ratios.assign(samples, 0.0);

    struct Draw {
        std::vector<double> m, m2;
        std::vector<cdouble> u, v;
    };
    std::vector<Draw> draws(samples);

    parallel_for(samples, [&](int64_t i) {
        Rng rng = Rng::sub(seed, static_cast<uint64_t>(i));
        Draw d;
        d.m = fam.sample_param(rng);
        d.m2 = fam.sample_param(rng);
        d.u = sphere_point(rng, n_lead, fam.real_valued);
        d.v = sphere_point(rng, n_lead, fam.real_valued);
        rep.ratios[i] = stability_ratio(fam, d.m, d.m2, d.u, d.v, n_lead);
        draws[i] = std::move(d);
    });

    rep.min_ratio = rep.ratios[0];
    rep.argmin_index = 0;
    for (int i = 1; i < samples; ++i) {
        if (rep.ratios[i] < rep.min_ratio) {
            rep.min_ratio = rep.ratios[i];
            rep.argmin_index = static_cast<uint64_t>(i);
        }
    }
    Draw& best = draws[rep.argmin_index];
    rep.argmin_m = best.m;
    rep.argmin_m2 = best.m2;
    rep.argmin_u = best.u;
    rep.argmin_v = best.v;
    return rep;
}

double u2_margin(const OperatorFamily& fam, const std::vector<double>& m,
                 const std::vector<double>& q) {
    if (!fam.dop) throw Error("u2_margin: family has no derivative evaluator");
    const CMatrix a = fam.op(m);
    const CMatrix da = fam.dop(m, q);
    CMatrix stacked(a.rows, a.cols + da.cols);
    for (int i = 0; i < a.rows; ++i) {
        for (int j = 0; j < da.cols; ++j) stacked(i, j) = da(i, j);
        for (int j = 0; j < a.cols; ++j) stacked(i, da.cols + j) = a(i, j);
    }
    const SingularSystem sv = svd(stacked);
    const double smax = sv.sigma.front();
    if (smax <= 0) return 0.0;
    return sv.sigma.back() / smax;
}

double u2_margin_grid(const OperatorFamily& fam, int param_steps, int q_steps) {
    if (fam.box.empty()) throw Error("u2_margin_grid: family has no parameter box");
    const int p = fam.param_dim;
    // enumerate the p-dimensional grid via mixed-radix counting
    std::vector<int> digit(p, 0);
    double worst = std::numeric_limits<double>::infinity();
    for (;;) {
        std::vector<double> m(p);
        for (int d = 0; d < p; ++d) {
            const auto [lo, hi] = fam.box[d];
            m[d] = lo + (digit[d] + 0.5) * (hi - lo) / param_steps;
        }
        if (p == 1) {
            worst = std::min(worst, u2_margin(fam, m, {1.0}));
        } else {
            for (int qi = 0; qi < q_steps; ++qi) {
                const double ang = 2.0 * kPi * qi / q_steps;
                std::vector<double> q(p, 0.0);
                q[0] = std::cos(ang);
                q[1] = std::sin(ang);
                worst = std::min(worst, u2_margin(fam, m, q));
            }
        }
        int d = 0;
        while (d < p && ++digit[d] == param_steps) digit[d++] = 0;
        if (d == p) break;
    }
    return worst;
}

CMatrix generic_example1(double m1, double m2, int n) {
    CMatrix a(3 * n, n);
    for (int j = 0; j < n; ++j) {
        a(j, j) = m1;
        a(j + n, j) = m2;
        a(j + 2 * n, j) = m2 * m2;
    }
    return a;
}

CMatrix generic_example2(double m1, double m2, int n_max) {
    // basis indices f_1..f_{n_max} keep the rows 3k, 3k+1, 3k+2 (1-based)
    // with k = 1..floor(n_max/3); simplest faithful truncation keeps every
    // column whose three rows fit, i.e. columns k with 3k+2 <= 3*n_col+2.
    const int n_cols = n_max;
    const int n_rows = 3 * n_max + 2;
    CMatrix a(n_rows, n_cols);
    for (int k = 1; k <= n_cols; ++k) {
        const double inv = 1.0 / k;
        a(3 * k - 1, k - 1) = m1 * inv;      // f_{3k} is row index 3k-1 (0-based)
        a(3 * k, k - 1) = m2 * inv;
        a(3 * k + 1, k - 1) = m2 * m2 * inv;
    }
    return a;
}

OperatorFamily make_crack_family(const PhysicsConfig& phys, const SupportInterval& sup) {
    OperatorFamily fam;
    fam.name = "crack";
    fam.param_dim = 2;
    fam.real_valued = false;
    fam.box = {{-0.5 * kPi, 0.5 * kPi}, {-phys.a_max, phys.a_max}};
    const ObservationSet obs = phys.observations();
    const QuadratureGrid grid = phys.coarse_grid();
    const double k = phys.k;
    fam.op = [=](const std::vector<double>& m) {
        return forward::assemble_forward_matrix({m[0], m[1]}, sup, grid, obs, k, true).entries;
    };
    fam.dop = [=](const std::vector<double>& m, const std::vector<double>& q) {
        auto [dth, da] = forward::derivative_matrices({m[0], m[1]}, sup, grid, obs, k);
        CMatrix d(dth.entries.rows, dth.entries.cols);
        for (size_t i = 0; i < d.data.size(); ++i)
            d.data[i] = q[0] * dth.entries.data[i] + q[1] * da.entries.data[i];
        return d;
    };
    const double a_max = phys.a_max;
    fam.sample_param = [a_max](Rng& rng) {
        return std::vector<double>{rng.uniform(-0.5 * kPi, 0.5 * kPi),
                                   rng.uniform(-a_max, a_max)};
    };
    fam.metric = param_metric;
    return fam;
}

OperatorFamily make_example1_family(int n) {
    OperatorFamily fam;
    fam.name = "example1";
    fam.param_dim = 2;
    fam.real_valued = true;
    fam.box = {{1.0, 2.0}, {1.0, 2.0}};
    fam.op = [n](const std::vector<double>& m) { return generic_example1(m[0], m[1], n); };
    fam.dop = [n](const std::vector<double>& m, const std::vector<double>& q) {
        // d/dm1 A = E1 (ones at rows j), d/dm2 A = E2 + 2 m2 E3
        CMatrix d(3 * n, n);
        for (int j = 0; j < n; ++j) {
            d(j, j) = q[0];
            d(j + n, j) = q[1];
            d(j + 2 * n, j) = q[1] * 2.0 * m[1];
        }
        return d;
    };
    fam.sample_param = [](Rng& rng) {
        return std::vector<double>{rng.uniform(1.0, 2.0), rng.uniform(1.0, 2.0)};
    };
    fam.metric = euclid_metric;
    return fam;
}

OperatorFamily make_example2_family(int n_max) {
    OperatorFamily fam;
    fam.name = "example2";
    fam.param_dim = 2;
    fam.real_valued = true;
    fam.box = {{1.0, 2.0}, {1.0, 2.0}};
    fam.op = [n_max](const std::vector<double>& m) { return generic_example2(m[0], m[1], n_max); };
    fam.dop = [n_max](const std::vector<double>& m, const std::vector<double>& q) {
        CMatrix d(3 * n_max + 2, n_max);
        for (int k = 1; k <= n_max; ++k) {
            const double inv = 1.0 / k;
            d(3 * k - 1, k - 1) = q[0] * inv;
            d(3 * k, k - 1) = q[1] * inv;
            d(3 * k + 1, k - 1) = q[1] * 2.0 * m[1] * inv;
        }
        return d;
    };
    fam.sample_param = [](Rng& rng) {
        return std::vector<double>{rng.uniform(1.0, 2.0), rng.uniform(1.0, 2.0)};
    };
    fam.metric = euclid_metric;
    return fam;
}

OperatorFamily make_broken_family(uint64_t seed) {
    OperatorFamily fam;
    fam.name = "broken";
    fam.param_dim = 1;
    fam.real_valued = false;
    fam.box = {{1.0, 2.0}};
    auto a0 = std::make_shared<CMatrix>(12, 4);
    Rng rng(seed);
    for (auto& z : a0->data) z = {rng.normal(), rng.normal()};
    fam.op = [a0](const std::vector<double>& m) {
        CMatrix a = *a0;
        for (auto& z : a.data) z *= m[0];
        return a;
    };
    fam.dop = [a0](const std::vector<double>&, const std::vector<double>& q) {
        CMatrix a = *a0;
        for (auto& z : a.data) z *= q[0];
        return a;
    };
    fam.sample_param = [](Rng& rng2) { return std::vector<double>{rng2.uniform(1.0, 2.0)}; };
    fam.metric = euclid_metric;
    return fam;
}

OperatorFamily family_by_name(const std::string& name, const PhysicsConfig& phys) {
    if (name == "crack") return make_crack_family(phys, SupportInterval{});
    if (name == "example1") return make_example1_family(4);
    if (name == "example2") return make_example2_family(50);
    if (name == "broken") return make_broken_family(13);
    throw Error("unknown operator family: " + name);
}

std::string StabilityReport::to_key_values() const {
    std::ostringstream os;
    os.precision(17);
    os << "family=" << family << "\n";
    os << "N=" << n_lead << "\n";
    os << "samples=" << samples << "\n";
    os << "seed=" << seed << "\n";
    os << "min_ratio=" << min_ratio << "\n";
    os << "argmin_index=" << argmin_index << "\n";
    os << "argmin_m=";
    for (size_t i = 0; i < argmin_m.size(); ++i) os << (i ? "," : "") << argmin_m[i];
    os << "\nargmin_m_prime=";
    for (size_t i = 0; i < argmin_m2.size(); ++i) os << (i ? "," : "") << argmin_m2[i];
    os << "\nargmin_u=";
    for (size_t i = 0; i < argmin_u.size(); ++i)
        os << (i ? "," : "") << argmin_u[i].real() << "+" << argmin_u[i].imag() << "i";
    os << "\nargmin_v=";
    for (size_t i = 0; i < argmin_v.size(); ++i)
        os << (i ? "," : "") << argmin_v[i].real() << "+" << argmin_v[i].imag() << "i";
    os << "\n";
    return os.str();
}

void StabilityReport::write(const std::string& path_report, const std::string& path_csv) const {
    {
        std::ofstream f(path_report);
        if (!f) throw Error("cannot write " + path_report);
        f << to_key_values();
    }
    if (!path_csv.empty()) {
        std::ofstream f(path_csv);
        if (!f) throw Error("cannot write " + path_csv);
        f << "sample,ratio\n";
        f.precision(17);
        for (size_t i = 0; i < ratios.size(); ++i) f << i << "," << ratios[i] << "\n";
    }
}

}  // namespace crackscat::spectral
