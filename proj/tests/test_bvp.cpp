#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "varlc/bvp.hpp"

using namespace varlc;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

CircuitParams reference_params() {
    CircuitParams p;
    p.L3 = 1.3;
    p.L4 = 0.7;
    p.L5 = 2.1;
    p.L6 = 0.9;
    p.C1 = 1.1;
    p.C2 = 0.8;
    p.t0 = 0.0;
    p.t1 = 1.7;
    p.q1_0 = 0.4;
    p.q2_0 = -0.3;
    p.lambda3 = 0.5;
    p.lambda5 = -0.2;
    p.lambda6 = 0.3;
    return p;
}

/// Unit inductors with the shared branch removed and both capacitors at 1 F:
/// normalized frequencies are exactly {1, 2}, so the horizon pi resonates in
/// the first channel.
CircuitParams resonant_params() {
    CircuitParams p;
    p.L4 = 0.0;
    p.t1 = kPi;
    p.q1_0 = 0.25;
    return p;
}

double boundary_defect(const CircuitParams& p, const BvpSolution& sol) {
    const Vec& xT = sol.grid.states.back();
    return std::max({std::abs(xT[0] - p.lambda3), std::abs(xT[1] - p.lambda5),
                     std::abs(xT[2] - p.lambda6)});
}

}  // namespace

TEST_CASE("reference circuit solves to machine-accurate boundary values") {
    const CircuitParams p = reference_params();
    const ResonanceReport rr = uniqueness_check(p);
    CHECK(!rr.resonant);

    const BvpSolution sol = solve_critical_point(p, 4096);
    CHECK(sol.grid.size() == 4097);
    CHECK(boundary_defect(p, sol) <= 1e-12);

    // Transfers start at zero and the currents are their derivatives.
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(sol.grid.states.front()[k]) <= 1e-15);
        CHECK(sol.currents.front()[k] == doctest::Approx(sol.c[k]).epsilon(1e-12));
    }

    // Frozen stationarity constants.
    CHECK(sol.stationarity_constants[0] == doctest::Approx(-0.0769036).epsilon(1e-4));
    CHECK(sol.stationarity_constants[1] == doctest::Approx(-0.1386121).epsilon(1e-4));
    CHECK(sol.stationarity_constants[2] == doctest::Approx(0.26727025).epsilon(1e-4));

    const auto [deviation, means] = stationarity_residual(p, sol);
    CHECK(deviation <= 1e-8);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(means[k] == doctest::Approx(sol.stationarity_constants[k]).epsilon(1e-6));
}

TEST_CASE("round-trip through initial currents") {
    const CircuitParams p = reference_params();
    const BvpSolution sol = solve_critical_point(p, 512);
    const BvpSolution again = solution_from_initial_currents(p, sol.c, 512);
    for (std::size_t i = 0; i < sol.grid.size(); i += 64)
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(again.grid.states[i][k] ==
                  doctest::Approx(sol.grid.states[i][k]).epsilon(1e-12));
}

TEST_CASE("resonance detection on the closed-form circuit") {
    const CircuitParams p = resonant_params();
    const ResonanceReport rr = uniqueness_check(p);
    CHECK(rr.resonant);
    CHECK(rr.family_dimension == 1);
    REQUIRE(rr.resonant_modes.size() == 1);
    CHECK(rr.resonant_modes[0].first == 1);
    CHECK(rr.resonant_modes[0].second == 1);

    CHECK_THROWS_AS(solve_critical_point(p, 256), std::runtime_error);
}

TEST_CASE("resonant circuits separate solvable from unsolvable transfers") {
    // Channel-1 solvability forces lambda3 = -2 q1_0.
    CircuitParams solvable = resonant_params();
    solvable.lambda3 = -2.0 * solvable.q1_0;
    const auto [rep_ok, family_ok] = resonance_analysis(solvable, 1024);
    CHECK(rep_ok.resonant);
    CHECK(rep_ok.solvable);
    REQUIRE(family_ok.has_value());
    CHECK(family_ok->kernel_basis.cols() == 1);
    CHECK(boundary_defect(solvable, family_ok->particular) <= 1e-8);

    // The kernel direction lives in the first channel only.
    const Matrix& kb = family_ok->kernel_basis;
    const double scale = std::max({std::abs(kb(0, 0)), std::abs(kb(1, 0)),
                                   std::abs(kb(2, 0))});
    CHECK(std::abs(kb(1, 0)) <= 1e-9 * scale);
    CHECK(std::abs(kb(2, 0)) <= 1e-9 * scale);

    CircuitParams unsolvable = resonant_params();
    unsolvable.lambda3 = 0.2;
    const auto [rep_bad, family_bad] = resonance_analysis(unsolvable, 256);
    CHECK(rep_bad.resonant);
    CHECK(!rep_bad.solvable);
    CHECK(!family_bad.has_value());
}

TEST_CASE("near-resonance conditioning warning") {
    CircuitParams p = resonant_params();
    p.t1 = kPi * (1.0 + 2e-7);  // inside the warning band, outside exact resonance
    const ResonanceReport rr = uniqueness_check(p);
    CHECK(!rr.resonant);
    CHECK(rr.near_resonance_warning);
}
