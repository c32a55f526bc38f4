#include "crackscat/forward.hpp"

#include <algorithm>
#include <cmath>

#include "crackscat/specfun.hpp"
#include "crackscat/spectral.hpp"

namespace crackscat::forward {

cdouble green(double k, Vec2 x, Vec2 y) {
    const double r = (x - y).norm();
    return cdouble(0, 0.25) * specfun::hankel1_0(k * r);
}

std::pair<cdouble, cdouble> green_grad_y(double k, Vec2 x, Vec2 y) {
    const Vec2 d = x - y;
    const double r = d.norm();
    const cdouble f = cdouble(0, 0.25 * k) * specfun::hankel1_1(k * r) * (1.0 / r);
    return {f * d.x, f * d.y};
}

ForwardMatrix assemble_forward_matrix(const CrackGeometry& geom, const SupportInterval& sup,
                                      const QuadratureGrid& grid, const ObservationSet& obs,
                                      double k, bool include_scale) {
    ForwardMatrix fm;
    fm.geom = geom;
    fm.support = sup;
    fm.grid = grid;
    fm.obs = obs;
    fm.k = k;
    fm.scaled = include_scale;
    fm.entries = CMatrix(obs.count, grid.n);
    const double scale = include_scale ? 0.5 * sup.l * grid.h() : 1.0;
    std::vector<Vec2> nodes(grid.n);
    for (int j = 0; j < grid.n; ++j) nodes[j] = crack_point(geom, sup, grid.node(j));
    for (int i = 0; i < obs.count; ++i) {
        const Vec2 x = obs.point(i);
        for (int j = 0; j < grid.n; ++j)
            fm.entries(i, j) = grid.weight(j) * scale * green(k, x, nodes[j]);
    }
    return fm;
}

std::vector<cdouble> forward_apply(const ForwardMatrix& a, const std::vector<cdouble>& psi) {
    return matvec(a.entries, psi);
}

std::pair<ForwardMatrix, ForwardMatrix> derivative_matrices(const CrackGeometry& geom,
                                                            const SupportInterval& sup,
                                                            const QuadratureGrid& grid,
                                                            const ObservationSet& obs,
                                                            double k) {
    ForwardMatrix dth, da;
    dth.geom = da.geom = geom;
    dth.support = da.support = sup;
    dth.grid = da.grid = grid;
    dth.obs = da.obs = obs;
    dth.k = da.k = k;
    dth.scaled = da.scaled = true;
    dth.entries = CMatrix(obs.count, grid.n);
    da.entries = CMatrix(obs.count, grid.n);
    const double scale = 0.5 * sup.l * grid.h();
    const Vec2 tau = geom.tangent(), n = geom.normal();
    for (int j = 0; j < grid.n; ++j) {
        const double t = crack_param(sup, grid.node(j));
        const Vec2 y = tau * t + n * geom.a;
        const Vec2 dy_dtheta = n * t - tau * geom.a;  // d(tau)/dtheta = n, d(n)/dtheta = -tau
        const double w = grid.weight(j) * scale;
        for (int i = 0; i < obs.count; ++i) {
            const auto [gx, gy] = green_grad_y(k, obs.point(i), y);
            dth.entries(i, j) = w * (gx * dy_dtheta.x + gy * dy_dtheta.y);
            da.entries(i, j) = w * (gx * n.x + gy * n.y);
        }
    }
    return {std::move(dth), std::move(da)};
}

cdouble incident_field(const CaseSpec& cs, double k, Vec2 x) {
    switch (cs.kind) {
        case 1: {
            const Vec2 eta{std::cos(cs.eta_angle), std::sin(cs.eta_angle)};
            return std::polar(1.0, k * x.dot(eta));
        }
        case 2:
        case 3: {
            const double r = (x - cs.source).norm();
            if (r == 0.0) throw Error("incident_field: evaluation point equals the source");
            return cdouble(0, 0.25) * specfun::hankel1_0(k * r);
        }
        case 4:
            return cdouble(0, 0);  // forced density, no incident wave
        default:
            throw Error("incident_field: unknown case kind");
    }
}

namespace {

// Cubic Lagrange interpolation of grid samples at angle v.
cdouble interp_density(const std::vector<cdouble>& psi, double v) {
    const int n = static_cast<int>(psi.size());
    const double h = kPi / (n - 1);
    double u = (v + 0.5 * kPi) / h;
    int j1 = static_cast<int>(std::floor(u));
    j1 = std::clamp(j1, 1, n - 3);
    const double s = u - j1;
    // nodes j1-1 .. j1+2, local coordinates -1, 0, 1, 2
    const double c0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
    const double c1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
    const double c2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
    const double c3 = (s + 1.0) * s * (s - 1.0) / 6.0;
    return c0 * psi[j1 - 1] + c1 * psi[j1] + c2 * psi[j1 + 1] + c3 * psi[j1 + 2];
}

cdouble radiate(const CrackGeometry& geom, const SupportInterval& sup, double k,
                const std::vector<cdouble>& psi, Vec2 x) {
    const int n = static_cast<int>(psi.size());
    const QuadratureGrid grid{n};
    const double scale = 0.5 * sup.l * grid.h();
    cdouble acc = 0;
    for (int j = 0; j < n; ++j) {
        const Vec2 y = crack_point(geom, sup, grid.node(j));
        acc += grid.weight(j) * psi[j] * green(k, x, y);
    }
    return acc * scale;
}

}  // namespace

cdouble DensitySolution::scattered_field(Vec2 x) const {
    const double d = distance_to_crack(geom, support, x);
    if (d >= 0.3) return radiate(geom, support, k, psi, x);
    // Close to the crack the kernel varies on the scale of the distance, so
    // re-sample the density onto a grid fine enough to resolve it.
    const int n_fine = 8193;
    const QuadratureGrid fine{n_fine};
    const double scale = 0.5 * support.l * fine.h();
    cdouble acc = 0;
    for (int j = 0; j < n_fine; ++j) {
        const double v = fine.node(j);
        const Vec2 y = crack_point(geom, support, v);
        const double r = (x - y).norm();
        if (r < 1e-14) continue;  // point coincides with a node; measure zero
        acc += fine.weight(j) * interp_density(psi, v) * green(k, x, y);
    }
    return acc * scale;
}

CMatrix bie_collocation_matrix(const CrackGeometry& geom, const SupportInterval& sup,
                               int n_dense, double k) {
    const QuadratureGrid grid{n_dense};
    const double h = grid.h();
    const double halfl = 0.5 * sup.l;

    std::vector<Vec2> nodes(n_dense);
    std::vector<double> vs(n_dense);
    for (int j = 0; j < n_dense; ++j) {
        vs[j] = grid.node(j);
        nodes[j] = crack_point(geom, sup, vs[j]);
    }

    // Off-diagonal: trapezoid rule on the full kernel. Diagonal:
    // Phi = -(1/2pi) ln|x-y| + Phi_reg with
    // Phi_reg(y_i, y_i) = i/4 - (1/2pi)(ln(k/2) + gamma); the log part is
    // integrated exactly over the self panel.
    CMatrix s(n_dense, n_dense);
    const cdouble phi_reg_diag =
        cdouble(0, 0.25) - cdouble((std::log(0.5 * k) + kEulerGamma) / (2.0 * kPi), 0);
    for (int i = 0; i < n_dense; ++i) {
        for (int j = 0; j < n_dense; ++j) {
            if (j == i) continue;
            s(i, j) = grid.weight(j) * halfl * h * green(k, nodes[i], nodes[j]);
        }
        double log_part;  // integral of ln|y(v_i) - y(v)| over the self panel
        if (i == 0 || i == n_dense - 1) {
            // At the tips |y(v_i) - y(v)| ~ (l/4)(v - v_i)^2 (cos v_i = 0),
            // and only a half panel lies inside the domain:
            // int_0^{h/2} ln((l/4) u^2) du = (h/2)(ln((l/4)(h/2)^2) - 2).
            log_part = 0.5 * h * (std::log(0.25 * sup.l * 0.25 * h * h) - 2.0);
        } else {
            const double c = halfl * std::cos(vs[i]);
            log_part = h * (std::log(0.5 * c * h) - 1.0);
        }
        s(i, i) = halfl * (grid.weight(i) * h * phi_reg_diag - log_part / (2.0 * kPi));
    }
    return s;
}

DensitySolution solve_bie(const CrackGeometry& geom, const SupportInterval& sup,
                          const std::function<cdouble(double, Vec2)>& g_on_crack, int n_dense,
                          double trunc_tol, double k) {
    if (n_dense < 64) throw Error("solve_bie: n_dense must be at least 64");
    const QuadratureGrid grid{n_dense};
    const CMatrix s = bie_collocation_matrix(geom, sup, n_dense, k);

    std::vector<cdouble> g(n_dense);
    for (int i = 0; i < n_dense; ++i) {
        const double v = grid.node(i);
        g[i] = g_on_crack(v, crack_point(geom, sup, v));
    }

    const spectral::SingularSystem sv = spectral::svd(s);
    if (sv.sigma.empty() || sv.sigma[0] <= 0)
        throw Error("solve_bie: collocation matrix is singular (sigma_max = 0)");

    DensitySolution sol;
    sol.geom = geom;
    sol.support = sup;
    sol.k = k;
    sol.psi.assign(n_dense, cdouble(0));
    const double cutoff = trunc_tol * sv.sigma[0];
    for (size_t idx = 0; idx < sv.sigma.size(); ++idx) {
        if (sv.sigma[idx] < cutoff || sv.sigma[idx] <= 0) break;
        cdouble coef = 0;
        for (int i = 0; i < n_dense; ++i) coef += std::conj(sv.left(i, idx)) * g[i];
        coef /= sv.sigma[idx];
        for (int i = 0; i < n_dense; ++i) sol.psi[i] += coef * sv.right(i, idx);
    }

    const std::vector<cdouble> res = matvec(s, sol.psi);
    double rnum = 0, rden = 0;
    for (int i = 0; i < n_dense; ++i) {
        rnum += std::norm(res[i] - g[i]);
        rden += std::norm(g[i]);
    }
    sol.residual = rden > 0 ? std::sqrt(rnum / rden) : 0.0;
    sol.warning = sol.residual > 1e-2;
    return sol;
}

CaseData forward_case(const CaseSpec& cs, const CrackGeometry& geom, const SupportInterval& sup,
                      const PhysicsConfig& phys, int n_dense, double trunc_tol) {
    CaseData out;
    if (cs.kind >= 1 && cs.kind <= 3) {
        auto g = [&](double, Vec2 y) { return -incident_field(cs, phys.k, y); };
        out.density = solve_bie(geom, sup, g, n_dense, trunc_tol, phys.k);
    } else if (cs.kind == 4) {
        out.density.geom = geom;
        out.density.support = sup;
        out.density.k = phys.k;
        out.density.psi.resize(n_dense);
        const QuadratureGrid grid{n_dense};
        for (int j = 0; j < n_dense; ++j) {
            const double v = grid.node(j);
            const Vec2 y = crack_point(geom, sup, v);
            const cdouble psi_t = cdouble(y.x, 0) - cdouble(0, 1) * std::cos(y.y);
            out.density.psi[j] = psi_t * std::cos(v);  // psi~ = psi * sqrt(1 - s^2)
        }
    } else {
        throw Error("forward_case: unknown case kind");
    }
    const ObservationSet obs = phys.observations();
    out.data.resize(obs.count);
    for (int i = 0; i < obs.count; ++i)
        out.data[i] = radiate(geom, sup, phys.k, out.density.psi, obs.point(i));
    return out;
}

std::vector<cdouble> forward_data_for_case(const CaseSpec& cs, const CrackGeometry& geom,
                                           const SupportInterval& sup, const PhysicsConfig& phys,
                                           int n_dense, double trunc_tol) {
    return forward_case(cs, geom, sup, phys, n_dense, trunc_tol).data;
}

FieldGrid total_field_grid(const CaseSpec& cs, const CrackGeometry& geom,
                           const SupportInterval& sup, const PhysicsConfig& phys, double extent,
                           int res, int n_dense, double trunc_tol) {
    if (res < 2) throw Error("total_field_grid: res must be at least 2");
    const CaseData cd = forward_case(cs, geom, sup, phys, n_dense, trunc_tol);
    FieldGrid fg;
    fg.extent = extent;
    fg.res = res;
    fg.samples.resize(static_cast<size_t>(res) * res);
    parallel_for(static_cast<int64_t>(res) * res, [&](int64_t idx) {
        const int iy = static_cast<int>(idx / res), ix = static_cast<int>(idx % res);
        Vec2 p{-extent + 2.0 * extent * ix / (res - 1), -extent + 2.0 * extent * iy / (res - 1)};
        const double d = distance_to_crack(geom, sup, p);
        const bool masked = d < 1e-3;
        if (d < 1e-6) p = p + geom.normal() * 1e-6;  // keep the kernel evaluable
        const cdouble total = incident_field(cs, phys.k, p) + cd.density.scattered_field(p);
        fg.samples[idx] = {p, total, masked};
    });
    return fg;
}

}  // namespace crackscat::forward
