#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "varlc/series.hpp"

using namespace varlc;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("closed form equals truncated summation") {
    for (const double K : {1.0, 2.0, 7.5}) {
        for (const double alpha : {0.0, 0.3, 0.9 * K}) {
            if (K <= alpha) continue;
            const double closed = reciprocal_quadratic_series(K, alpha);
            const double summed = reciprocal_quadratic_series_truncated(K, alpha, 2000000);
            CHECK(std::abs(closed - summed) <= 1e-12 * std::max(1.0, std::abs(closed)));
        }
    }
}

TEST_CASE("alpha = 0 reduces to the Basel value") {
    CHECK(reciprocal_quadratic_series(3.0, 0.0) ==
          doctest::Approx(kPi * kPi / 18.0).epsilon(1e-13));
}

TEST_CASE("zero-shift normalization solves to exactly one") {
    const SeriesConstant c = solve_series_constant(0.0, 6.0 / (kPi * kPi));
    // beta * pi^2/(6 K) = 1 with beta = 6/pi^2 forces K = 1.
    CHECK(std::abs(c.K - 1.0) <= 1e-12);
}

TEST_CASE("unit-parameter constant matches its frozen value") {
    const SeriesConstant c = solve_series_constant(1.0, 1.0);
    CHECK(std::abs(c.K - 2.3979455861144363) <= 1e-12);
    // The defining equation holds at the root.
    CHECK(std::abs(c.beta * reciprocal_quadratic_series(c.K, c.alpha) - 1.0) <= 1e-12);
    // And the root sits above the guaranteed lower bound.
    CHECK(c.K > c.alpha + c.beta);
}

TEST_CASE("circuit constants at the reference horizon") {
    CircuitParams p;
    p.C1 = 1.0;
    p.C2 = 1.0;
    p.t0 = 0.0;
    p.t1 = 2.0 * kPi;
    const auto [k1, k2] = circuit_constants(p);
    CHECK(std::abs(k1.K - 4.0) <= 1e-9);
    CHECK(std::abs(k2.K - 8.0) <= 1e-9);
}

TEST_CASE("equal capacitances force the doubling identity") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> cdist(0.3, 3.0);
    std::uniform_real_distribution<double> tdist(0.5, 6.0);
    for (int trial = 0; trial < 20; ++trial) {
        CircuitParams p;
        p.C1 = p.C2 = cdist(rng);
        p.t0 = 0.0;
        p.t1 = tdist(rng);
        const auto [k1, k2] = circuit_constants(p);
        CHECK(std::abs(k2.K - 2.0 * k1.K) <= 1e-10 * std::max(1.0, std::abs(k2.K)));
    }
}
