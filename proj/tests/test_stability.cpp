#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "crackscat/spectral.hpp"
#include "crackscat/stability.hpp"

using namespace crackscat;
namespace sp = crackscat::spectral;

TEST_CASE("param_metric") {
    CHECK(sp::param_metric({0, 0}, {0, 0}) == 0.0);
    // theta 0 vs pi/4 with equal a: (cos0 - cos(pi/2), sin0 - sin(pi/2)) = (1, -1)
    CHECK(sp::param_metric({0, 0.3}, {0.25 * kPi, 0.3}) == doctest::Approx(std::sqrt(2.0)));
    // periodic identification at the theta seam
    const double eps = 1e-6;
    CHECK(sp::param_metric({-0.5 * kPi + eps, 0.1}, {0.5 * kPi - eps, 0.1}) < 1e-5);
}

TEST_CASE("generic example 1") {
    SUBCASE("n = 1 direct substitution") {
        const CMatrix a = sp::generic_example1(1.0, 1.0, 1);
        REQUIRE(a.rows == 3);
        REQUIRE(a.cols == 1);
        CHECK(a(0, 0) == cdouble(1, 0));
        CHECK(a(1, 0) == cdouble(1, 0));
        CHECK(a(2, 0) == cdouble(1, 0));
    }
    SUBCASE("n = 2 row placement") {
        const CMatrix a = sp::generic_example1(2.0, 1.0, 2);
        REQUIRE(a.rows == 6);
        for (int j = 0; j < 2; ++j) {
            CHECK(a(j, j) == cdouble(2, 0));
            CHECK(a(j + 2, j) == cdouble(1, 0));
            CHECK(a(j + 4, j) == cdouble(1, 0));
        }
        CHECK(a(0, 1) == cdouble(0, 0));
    }
}

TEST_CASE("generic example 2 block singular values") {
    const double m1 = 1.4, m2 = 1.8;
    const CMatrix a = sp::generic_example2(m1, m2, 50);
    const auto sv = sp::svd(a);
    const double block = std::sqrt(m1 * m1 + m2 * m2 + m2 * m2 * m2 * m2);
    for (int k = 1; k <= 50; ++k)
        CHECK(std::abs(sv.sigma[k - 1] - block / k) <= 1e-10);
}

TEST_CASE("stability_ratio") {
    const sp::OperatorFamily fam = sp::make_example1_family(4);

    SUBCASE("zero denominator throws") {
        const std::vector<double> m{1.5, 1.5};
        const std::vector<cdouble> u{1, 0, 0, 0};
        CHECK_THROWS_AS(sp::stability_ratio(fam, m, m, u, u, 4), Error);
    }

    SUBCASE("v = 0 lower bound is sigma_N") {
        const std::vector<double> m{1.3, 1.7};
        const auto a = fam.op(m);
        const auto sv = sp::svd(a);
        Rng rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<cdouble> u(4);
            double s = 0;
            for (auto& z : u) {
                z = {rng.normal(), 0};
                s += std::norm(z);
            }
            for (auto& z : u) z /= std::sqrt(s);
            const std::vector<cdouble> v(4, cdouble(0));
            const double ratio = sp::stability_ratio(fam, m, {1.31, 1.69}, u, v, 4);
            CHECK(ratio >= sv.sigma[3] - 1e-12);
        }
    }
}

TEST_CASE("estimate_stability_constant") {
    const sp::OperatorFamily fam = sp::make_example1_family(4);

    SUBCASE("example 1 min ratio is positive over 10^4 samples") {
        const auto rep = sp::estimate_stability_constant(fam, 4, 10000, 99);
        CHECK(rep.min_ratio > 0.0);
        CHECK(rep.ratios.size() == 10000);
        MESSAGE("example1 N=4 min ratio: ", rep.min_ratio);
    }

    SUBCASE("deterministic given the seed") {
        const auto r1 = sp::estimate_stability_constant(fam, 3, 500, 7);
        const auto r2 = sp::estimate_stability_constant(fam, 3, 500, 7);
        CHECK(r1.min_ratio == r2.min_ratio);
        CHECK(r1.argmin_index == r2.argmin_index);
        REQUIRE(r1.ratios.size() == r2.ratios.size());
        for (size_t i = 0; i < r1.ratios.size(); ++i) CHECK(r1.ratios[i] == r2.ratios[i]);
        const auto r3 = sp::estimate_stability_constant(fam, 3, 500, 8);
        CHECK(r3.min_ratio != r1.min_ratio);
    }

    SUBCASE("argmin is reproducible from its recorded draw") {
        const auto rep = sp::estimate_stability_constant(fam, 4, 200, 42);
        const double again = sp::stability_ratio(fam, rep.argmin_m, rep.argmin_m2, rep.argmin_u,
                                                 rep.argmin_v, 4);
        CHECK(again == rep.min_ratio);
    }
}

TEST_CASE("crack family stability") {
    const PhysicsConfig phys;
    const sp::OperatorFamily fam = sp::make_crack_family(phys, SupportInterval{});

    SUBCASE("min ratio positive at N = 5 (reduced sample count)") {
        const auto rep = sp::estimate_stability_constant(fam, 5, 500, 12);
        CHECK(rep.min_ratio > 0.0);
        MESSAGE("crack N=5 min ratio at 500 samples: ", rep.min_ratio);
    }

    SUBCASE("min ratio estimates collapse as N grows") {
        const auto r2 = sp::estimate_stability_constant(fam, 2, 300, 5);
        const auto r5 = sp::estimate_stability_constant(fam, 5, 300, 5);
        const auto r8 = sp::estimate_stability_constant(fam, 8, 300, 5);
        CHECK(r2.min_ratio >= r5.min_ratio);
        CHECK(r5.min_ratio >= r8.min_ratio);
        MESSAGE("crack min ratios N=2/5/8: ", r2.min_ratio, " ", r5.min_ratio, " ", r8.min_ratio);
    }
}

TEST_CASE("u2 margins") {
    const PhysicsConfig phys;

    SUBCASE("example 1 margin is positive for q = (0, 1)") {
        const sp::OperatorFamily fam = sp::make_example1_family(4);
        Rng rng(1);
        for (int t = 0; t < 5; ++t) {
            const std::vector<double> m{rng.uniform(1, 2), rng.uniform(1, 2)};
            CHECK(sp::u2_margin(fam, m, {0.0, 1.0}) > 1e-3);
        }
    }

    SUBCASE("crack family margins on a coarse grid") {
        const sp::OperatorFamily fam = sp::make_crack_family(phys, SupportInterval{});
        const double worst = sp::u2_margin_grid(fam, 3, 4);
        CHECK(worst > 0.0);
        MESSAGE("crack family worst u2 margin (3x3x4 grid): ", worst);
    }

    SUBCASE("the scalar family is degenerate") {
        const sp::OperatorFamily fam = sp::make_broken_family(13);
        CHECK(sp::u2_margin(fam, {1.5}, {1.0}) <= 1e-10);
        CHECK(sp::u2_margin_grid(fam, 5, 8) <= 1e-10);
    }

    SUBCASE("missing derivative evaluator is an error") {
        sp::OperatorFamily fam = sp::make_example1_family(2);
        fam.dop = nullptr;
        CHECK_THROWS_AS(sp::u2_margin(fam, {1.5, 1.5}, {1.0, 0.0}), Error);
    }
}

TEST_CASE("report serialization") {
    const sp::OperatorFamily fam = sp::make_example1_family(3);
    const auto rep = sp::estimate_stability_constant(fam, 3, 50, 21);
    const std::string text = rep.to_key_values();
    CHECK(text.find("family=example1") != std::string::npos);
    CHECK(text.find("min_ratio=") != std::string::npos);
    CHECK(text.find("seed=21") != std::string::npos);
}
