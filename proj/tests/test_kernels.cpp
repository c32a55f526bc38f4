#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "crackscat/common.hpp"
#include "crackscat/kernels.hpp"

using namespace crackscat;
using kern::cdouble;

namespace {

std::vector<double> random_reals(Rng& rng, size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

std::vector<cdouble> random_complex(Rng& rng, size_t n) {
    std::vector<cdouble> v(n);
    for (cdouble& z : v) z = {rng.normal(), rng.normal()};
    return v;
}

}  // namespace

TEST_CASE("scalar reference semantics") {
    REQUIRE(kern::set_backend("scalar"));
    Rng rng(1);
    auto x = random_reals(rng, 37);
    auto y = random_reals(rng, 37);
    double naive = 0;
    for (size_t i = 0; i < x.size(); ++i) naive += x[i] * y[i];
    CHECK(kern::dot(x.data(), y.data(), x.size()) == doctest::Approx(naive).epsilon(1e-14));

    auto z = random_complex(rng, 21);
    auto w = random_complex(rng, 21);
    cdouble naive_z = 0;
    for (size_t i = 0; i < z.size(); ++i) naive_z += std::conj(z[i]) * w[i];
    const cdouble got = kern::zdotc(z.data(), w.data(), z.size());
    CHECK(std::abs(got - naive_z) < 1e-12);
}

TEST_CASE("zrot is unitary and matches the complex formula") {
    REQUIRE(kern::set_backend("scalar"));
    Rng rng(3);
    auto x = random_complex(rng, 11);
    auto y = random_complex(rng, 11);
    auto x0 = x, y0 = y;
    const double c = 0.6;
    const cdouble s = std::polar(0.8, 1.2345);
    kern::zrot(x.data(), y.data(), x.size(), c, s);
    double before = kern::znrm2sq(x0.data(), 11) + kern::znrm2sq(y0.data(), 11);
    double after = kern::znrm2sq(x.data(), 11) + kern::znrm2sq(y.data(), 11);
    CHECK(after == doctest::Approx(before).epsilon(1e-13));
    for (size_t i = 0; i < x.size(); ++i) {
        CHECK(std::abs(x[i] - (c * x0[i] - std::conj(s) * y0[i])) < 1e-13);
        CHECK(std::abs(y[i] - (s * x0[i] + c * y0[i])) < 1e-13);
    }
}

TEST_CASE("SIMD variants match the scalar reference") {
    const auto backends = kern::available_backends();
    MESSAGE("available backends: ", backends.size());
    for (const auto& name : backends) {
        if (name == "scalar") continue;
        CAPTURE(std::string(name));
        // lengths cover vector widths and ragged tails
        for (size_t n : {0, 1, 2, 3, 4, 5, 7, 8, 15, 16, 33, 80, 255, 1024}) {
            Rng rng(1000 + n);
            auto x = random_reals(rng, n);
            auto y = random_reals(rng, n);
            auto zx = random_complex(rng, n);
            auto zy = random_complex(rng, n);
            const double a = rng.normal();
            const cdouble za{rng.normal(), rng.normal()};
            const double c = 0.8, snorm = 0.6;
            const cdouble s = std::polar(snorm, 0.7);

            REQUIRE(kern::set_backend("scalar"));
            const double d_ref = kern::dot(x.data(), y.data(), n);
            auto y_ref = y;
            kern::axpy(a, x.data(), y_ref.data(), n);
            const cdouble zd_ref = kern::zdotc(zx.data(), zy.data(), n);
            auto zy_ref = zy;
            kern::zaxpy(za, zx.data(), zy_ref.data(), n);
            const double nrm_ref = kern::znrm2sq(zx.data(), n);
            auto rx_ref = zx, ry_ref = zy;
            kern::zrot(rx_ref.data(), ry_ref.data(), n, c, s);
            auto tb_y = random_reals(rng, n), tb_dy = random_reals(rng, n);
            std::vector<double> tb_ref(n);
            kern::tanh_backward(tb_y.data(), tb_dy.data(), tb_ref.data(), n);
            auto p_ref = random_reals(rng, n);
            auto m_ref = random_reals(rng, n);
            std::vector<double> v_ref(n, 0.25);
            auto g = random_reals(rng, n);
            auto p2 = p_ref, m2 = m_ref, v2 = v_ref;
            kern::adam_update(p_ref.data(), m_ref.data(), v_ref.data(), g.data(), n, 1e-3, 0.9,
                              0.999, 1e-8, 0.1, 0.01);

            REQUIRE(kern::set_backend(name));
            CHECK(kern::dot(x.data(), y.data(), n)
                  == doctest::Approx(d_ref).epsilon(1e-13).scale(std::abs(d_ref) + 1));
            auto y_simd = y;
            kern::axpy(a, x.data(), y_simd.data(), n);
            for (size_t i = 0; i < n; ++i) CHECK(y_simd[i] == doctest::Approx(y_ref[i]).epsilon(1e-14));
            const cdouble zd = kern::zdotc(zx.data(), zy.data(), n);
            CHECK(std::abs(zd - zd_ref) <= 1e-13 * (std::abs(zd_ref) + 1));
            auto zy_simd = zy;
            kern::zaxpy(za, zx.data(), zy_simd.data(), n);
            for (size_t i = 0; i < n; ++i) CHECK(std::abs(zy_simd[i] - zy_ref[i]) < 1e-13);
            CHECK(kern::znrm2sq(zx.data(), n)
                  == doctest::Approx(nrm_ref).epsilon(1e-13).scale(nrm_ref + 1));
            auto rx = zx, ry = zy;
            kern::zrot(rx.data(), ry.data(), n, c, s);
            for (size_t i = 0; i < n; ++i) {
                CHECK(std::abs(rx[i] - rx_ref[i]) < 1e-13);
                CHECK(std::abs(ry[i] - ry_ref[i]) < 1e-13);
            }
            std::vector<double> tb_simd(n);
            kern::tanh_backward(tb_y.data(), tb_dy.data(), tb_simd.data(), n);
            for (size_t i = 0; i < n; ++i) CHECK(tb_simd[i] == doctest::Approx(tb_ref[i]).epsilon(1e-14));
            kern::adam_update(p2.data(), m2.data(), v2.data(), g.data(), n, 1e-3, 0.9, 0.999,
                              1e-8, 0.1, 0.01);
            for (size_t i = 0; i < n; ++i) {
                CHECK(p2[i] == doctest::Approx(p_ref[i]).epsilon(1e-13));
                CHECK(m2[i] == doctest::Approx(m_ref[i]).epsilon(1e-13));
                CHECK(v2[i] == doctest::Approx(v_ref[i]).epsilon(1e-13));
            }
        }
    }
    kern::set_backend("scalar");
    CHECK(kern::active_backend() == "scalar");
    // restore autodetected default for other binaries (process-local anyway)
    for (const auto& name : kern::available_backends()) kern::set_backend(name);
}

TEST_CASE("backend selection") {
    CHECK_FALSE(kern::set_backend("no-such-backend"));
    REQUIRE(kern::set_backend("scalar"));
    CHECK(kern::active_backend() == "scalar");
    for (const auto& name : kern::available_backends()) CHECK(kern::set_backend(name));
}
