#include "crackscat/specfun.hpp"

#include <cmath>
#include <stdexcept>

#include "crackscat/common.hpp"

namespace crackscat::specfun {

namespace {

constexpr double kSeriesCut = 12.0;

// J0 by its ascending series; at x = 12 the largest term is ~4e3, so the
// summation loses at most ~4 digits against the 1e-12 budget.
double j0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 64; ++k) {
        term *= -q / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return sum;
}

double j1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 64; ++k) {
        term *= -q / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return 0.5 * x * sum;
}

// Y0(x) = (2/pi)[(ln(x/2)+gamma) J0(x) + sum_{k>=1} (-1)^{k+1} H_k q^k/(k!)^2]
double y0_series(double x) {
    const double q = 0.25 * x * x;
    double pw = 1.0;  // q^k / (k!)^2
    double hk = 0.0;  // harmonic number H_k
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 64; ++k) {
        pw *= q / (static_cast<double>(k) * k);
        hk += 1.0 / k;
        const double term = sign * hk * pw;
        sum += term;
        sign = -sign;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300) && k > 4) break;
    }
    return (2.0 / kPi) * ((std::log(0.5 * x) + kEulerGamma) * j0_series(x) + sum);
}

// Y1(x) = (2/pi) ln(x/2) J1(x) - 2/(pi x)
//         - (x/(2 pi)) sum_{k>=0} (-q)^k (H_k + H_{k+1} - 2 gamma)/(k!(k+1)!)
double y1_series(double x) {
    const double q = 0.25 * x * x;
    double pw = 1.0;  // q^k / (k!(k+1)!)
    double hk = 0.0, hk1 = 1.0;
    double sum = (hk + hk1 - 2.0 * kEulerGamma) * pw;
    double sign = -1.0;
    for (int k = 1; k <= 64; ++k) {
        pw *= q / (static_cast<double>(k) * (k + 1));
        hk += 1.0 / k;
        hk1 += 1.0 / (k + 1);
        const double term = sign * (hk + hk1 - 2.0 * kEulerGamma) * pw;
        sum += term;
        sign = -sign;
        if (std::abs(term) < 1e-18 * (std::abs(sum) + 1e-300) && k > 4) break;
    }
    return (2.0 / kPi) * std::log(0.5 * x) * j1_series(x) - 2.0 / (kPi * x)
           - (x / (2.0 * kPi)) * sum;
}

// Hankel asymptotic amplitude/phase sums:
//   J_nu ~ sqrt(2/(pi x)) [P cos chi - Q sin chi],
//   Y_nu ~ sqrt(2/(pi x)) [P sin chi + Q cos chi],  chi = x - (2 nu + 1) pi/4,
// with P the even-index and Q the odd-index partial sums of the divergent
// series a_k(nu)/x^k. Terms are added while they shrink (optimal truncation);
// at x = 12 the smallest term is ~1e-11 and it falls off rapidly beyond.
struct PQ {
    double p, q;
};

PQ hankel_pq(double x, double mu) {
    double term = 1.0;
    double p = 1.0, q = 0.0;
    double prev = 1e300;
    int slot = 0;  // 0 -> q (+), 1 -> p (-), 2 -> q (-), 3 -> p (+)
    for (int k = 0; k < 40; ++k) {
        const double odd = 2.0 * k + 1.0;
        term *= (mu - odd * odd) / (8.0 * x * (k + 1));
        const double mag = std::abs(term);
        if (mag >= prev) break;  // divergence onset
        prev = mag;
        switch (slot) {
            case 0: q += term; break;
            case 1: p -= term; break;
            case 2: q -= term; break;
            case 3: p += term; break;
        }
        slot = (slot + 1) & 3;
        if (mag < 1e-18) break;
    }
    return {p, q};
}

struct JY {
    double j, y;
};

JY asymptotic_jy(double x, int nu) {
    const double mu = 4.0 * nu * nu;
    const PQ pq = hankel_pq(x, mu);
    const double chi = x - (2 * nu + 1) * kPi / 4.0;
    const double amp = std::sqrt(2.0 / (kPi * x));
    const double c = std::cos(chi), s = std::sin(chi);
    return {amp * (pq.p * c - pq.q * s), amp * (pq.p * s + pq.q * c)};
}

void require_positive(double x, const char* fn) {
    if (!(x > 0.0)) throw std::domain_error(std::string(fn) + ": argument must be > 0");
}

}  // namespace

double bessel_j0(double x) {
    x = std::abs(x);
    if (x <= kSeriesCut) return j0_series(x);
    return asymptotic_jy(x, 0).j;
}

double bessel_j1(double x) {
    const double ax = std::abs(x);
    const double v = (ax <= kSeriesCut) ? j1_series(ax) : asymptotic_jy(ax, 1).j;
    return x < 0 ? -v : v;
}

double bessel_y0(double x) {
    require_positive(x, "bessel_y0");
    if (x <= kSeriesCut) return y0_series(x);
    return asymptotic_jy(x, 0).y;
}

double bessel_y1(double x) {
    require_positive(x, "bessel_y1");
    if (x <= kSeriesCut) return y1_series(x);
    return asymptotic_jy(x, 1).y;
}

std::complex<double> hankel1_0(double x) {
    require_positive(x, "hankel1_0");
    if (x <= kSeriesCut) return {j0_series(x), y0_series(x)};
    const JY jy = asymptotic_jy(x, 0);
    return {jy.j, jy.y};
}

std::complex<double> hankel1_1(double x) {
    require_positive(x, "hankel1_1");
    if (x <= kSeriesCut) return {j1_series(x), y1_series(x)};
    const JY jy = asymptotic_jy(x, 1);
    return {jy.j, jy.y};
}

}  // namespace crackscat::specfun
