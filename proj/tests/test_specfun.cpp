#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "crackscat/common.hpp"
#include "crackscat/specfun.hpp"
#include "oracle_bessel.hpp"

using namespace crackscat;
using namespace crackscat::specfun;

TEST_CASE("J0 basics") {
    CHECK(bessel_j0(0.0) == 1.0);
    // first root, located with the power-series oracle
    CHECK(std::abs(bessel_j0(2.404825557695773)) < 1e-9);
    CHECK(std::abs(oracle::j0(2.404825557695773)) < 1e-9);
    CHECK(std::abs(bessel_j0(1.5) - oracle::j0(1.5)) < 1e-10);
}

TEST_CASE("Y0 basics") {
    CHECK(std::abs(bessel_y0(1.5) - oracle::y0(1.5)) < 1e-10);
    CHECK(bessel_y0(0.001) < -4.0);  // leading (2/pi) ln(x/2) blow-up
    CHECK_THROWS_AS(bessel_y0(0.0), std::domain_error);
    CHECK_THROWS_AS(bessel_y0(-1.0), std::domain_error);
    CHECK_THROWS_AS(bessel_y1(0.0), std::domain_error);
    CHECK_THROWS_AS(hankel1_0(0.0), std::domain_error);
    CHECK_THROWS_AS(hankel1_1(-2.0), std::domain_error);
}

TEST_CASE("Hankel functions compose J and Y") {
    const std::complex<double> h = hankel1_0(1.5);
    CHECK(h.real() == bessel_j0(1.5));
    CHECK(h.imag() == bessel_y0(1.5));
    const std::complex<double> h1 = hankel1_1(3.2);
    CHECK(h1.real() == bessel_j1(3.2));
    CHECK(h1.imag() == bessel_y1(3.2));
}

TEST_CASE("Wronskian J1 Y0 - J0 Y1 = 2/(pi x)") {
    const double x = 3.7;
    const double w = bessel_j1(x) * bessel_y0(x) - bessel_j0(x) * bessel_y1(x);
    CHECK(std::abs(w - 2.0 / (kPi * x)) < 1e-10);

    // 100 log-spaced points across [0.01, 50]
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const double xx = 0.01 * std::pow(50.0 / 0.01, i / 99.0);
        const double ww = bessel_j1(xx) * bessel_y0(xx) - bessel_j0(xx) * bessel_y1(xx);
        worst = std::max(worst, std::abs(ww - 2.0 / (kPi * xx)));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("small-argument asymptotics of H1_1") {
    const double x = 1e-4;
    const std::complex<double> h = hankel1_1(x);
    const std::complex<double> lead(0, -2.0 / (kPi * x));
    CHECK(std::abs(h - lead) / std::abs(lead) < 1e-3);
}

TEST_CASE("derivative identity J0' = -J1 against central differences") {
    const double h = 1e-6;
    for (double x : {0.3, 1.0, 2.5, 5.0, 9.0, 15.0, 31.0, 47.0}) {
        const double fd = (bessel_j0(x + h) - bessel_j0(x - h)) / (2 * h);
        CHECK(std::abs(fd + bessel_j1(x)) < 1e-7);
    }
}

TEST_CASE("agreement with the extended-precision series oracle") {
    double worst_lo = 0, worst_hi = 0;
    for (int i = 0; i <= 400; ++i) {
        const double x = 8.0 * i / 400.0;
        const double xe = std::max(x, 1e-3);  // Y is singular at 0
        worst_lo = std::max({worst_lo, std::abs(bessel_j0(x) - oracle::j0(x)),
                             std::abs(bessel_j1(x) - oracle::j1(x)),
                             std::abs(bessel_y0(xe) - oracle::y0(xe)),
                             std::abs(bessel_y1(xe) - oracle::y1(xe))});
    }
    CHECK(worst_lo < 1e-10);
    for (int i = 0; i <= 400; ++i) {
        const double x = 8.0 + (50.0 - 8.0) * i / 400.0;
        worst_hi = std::max({worst_hi, std::abs(bessel_j0(x) - oracle::j0(x)),
                             std::abs(bessel_j1(x) - oracle::j1(x)),
                             std::abs(bessel_y0(x) - oracle::y0(x)),
                             std::abs(bessel_y1(x) - oracle::y1(x))});
    }
    CHECK(worst_hi < 1e-9);
    MESSAGE("series-oracle agreement: [0,8] ", worst_lo, ", [8,50] ", worst_hi);
}

TEST_CASE("J1 is odd, J0 is even") {
    CHECK(bessel_j0(-2.0) == bessel_j0(2.0));
    CHECK(bessel_j1(-2.0) == -bessel_j1(2.0));
    CHECK(bessel_j1(0.0) == 0.0);
}
