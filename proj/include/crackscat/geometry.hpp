#pragma once

// Crack parameterization and discretization grids.
//
// The crack is the segment { tau*t + a*n : t in [o - l/2, o + l/2] } with
// tau = (cos theta, sin theta), n = (-sin theta, cos theta). The admissible
// box keeps theta in [-pi/2, pi/2), |a| <= a_max = 1, center o in [-1, 1]
// and length l in [1, 3], which bounds the crack away from the observation
// circle of radius R = 4 by at least ~1.3.

#include <algorithm>
#include <cmath>
#include <vector>

#include "crackscat/common.hpp"

namespace crackscat {

struct Vec2 {
    double x = 0, y = 0;
    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

struct CrackGeometry {
    double theta = 0;  // radians, canonical range [-pi/2, pi/2)
    double a = 0;      // normal offset, |a| <= a_max

    Vec2 tangent() const { return {std::cos(theta), std::sin(theta)}; }
    Vec2 normal() const { return {-std::sin(theta), std::cos(theta)}; }
};

struct SupportInterval {
    double o = 0;  // center in [-1, 1]
    double l = 2;  // length in [1, 3]

    double m1() const { return o - 0.5 * l; }
    double m2() const { return o + 0.5 * l; }
};

struct ObservationSet {
    double radius = 4.0;
    int count = 40;

    // i = 0..count-1 maps to the angle 2*pi*(i+1)/count
    Vec2 point(int i) const {
        const double phi = 2.0 * kPi * (i + 1) / count;
        return {radius * std::cos(phi), radius * std::sin(phi)};
    }
};

// Uniform grid in the angle v on [-pi/2, pi/2] (s = sin v substitution),
// with trapezoid weights 1/2 at the two endpoints.
struct QuadratureGrid {
    int n = 10;

    double h() const { return kPi / (n - 1); }
    double node(int j) const { return -0.5 * kPi + j * h(); }
    double weight(int j) const { return (j == 0 || j == n - 1) ? 0.5 : 1.0; }
};

// Arc-length parameter of the j-th node: t = o + (l/2) sin v.
inline double crack_param(const SupportInterval& sup, double v) {
    return sup.o + 0.5 * sup.l * std::sin(v);
}

inline Vec2 crack_point(const CrackGeometry& g, const SupportInterval& sup, double v) {
    const double t = crack_param(sup, v);
    const Vec2 tau = g.tangent(), n = g.normal();
    return tau * t + n * g.a;
}

// Exact min over the segment of (R - |y(t)|). |y(t)|^2 = t^2 + a^2 since
// tau and n are orthonormal, so the max radius sits at the endpoint with
// the larger |t|.
inline double min_distance_to_circle(const CrackGeometry& g, const SupportInterval& sup,
                                     const ObservationSet& obs) {
    const double tmax = std::max(std::abs(sup.m1()), std::abs(sup.m2()));
    return obs.radius - std::sqrt(tmax * tmax + g.a * g.a);
}

// Distance from an arbitrary point to the crack segment.
inline double distance_to_crack(const CrackGeometry& g, const SupportInterval& sup, Vec2 p) {
    const Vec2 tau = g.tangent(), n = g.normal();
    const double t = p.dot(tau);          // coordinate along the crack line
    const double d = p.dot(n) - g.a;      // signed distance to the line
    const double tc = std::clamp(t, sup.m1(), sup.m2());
    const double dt = t - tc;
    return std::sqrt(dt * dt + d * d);
}

// Pipeline-wide physical configuration with the simulation defaults.
struct PhysicsConfig {
    double k = 1.5;      // wavenumber
    double radius = 4.0; // observation circle radius R
    double a_max = 1.0;
    int n_obs = 40;      // N_S
    int n_gamma = 10;    // N_Gamma, coarse quadrature for A_{m,app}
    int n_lead = 5;      // N, leading singular triplets kept

    ObservationSet observations() const { return {radius, n_obs}; }
    QuadratureGrid coarse_grid() const { return {n_gamma}; }
};

}  // namespace crackscat
