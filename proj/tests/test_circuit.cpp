#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>

#include "doctest.h"
#include "varlc/circuit.hpp"
#include "varlc/eig.hpp"
#include "varlc/propagators.hpp"
#include "varlc/series.hpp"

using namespace varlc;

namespace {

CircuitParams unit_params() {
    CircuitParams p;  // all defaults are 1 H / 1 F on [0, 1]
    return p;
}

bool mentions(const std::exception& e, const std::string& needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("validation names the offending field") {
    CircuitParams p = unit_params();
    p.L3 = -1.0;
    try {
        p.validate();
        FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
        CHECK(mentions(e, "L3"));
    }

    p = unit_params();
    p.C1 = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = unit_params();
    p.t1 = p.t0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = unit_params();
    p.L4 = 0.0;  // the shared branch may vanish
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("unit circuit matrices") {
    const CircuitMatrices cm = build_matrices(unit_params());
    CHECK(cm.M(0, 0) == 2.0);
    CHECK(cm.M(1, 1) == 2.0);
    CHECK(cm.M(2, 2) == 2.0);
    CHECK(asymmetry(cm.M) == 0.0);
    CHECK(cm.N(0, 0) == 1.0);
    CHECK(cm.N(1, 2) == 1.0);
    CHECK(cm.N(0, 1) == 0.0);

    // M^(1/2) squares back to M.
    const Matrix back = cm.M_half * cm.M_half;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(back(i, j) == doctest::Approx(cm.M(i, j)).epsilon(1e-12));

    // P is orthogonal.
    const Matrix ptp = cm.P.transposed() * cm.P;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(ptp(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));

    CHECK(cm.h1 > 0.0);
    CHECK(cm.h2 >= cm.h1);
}

TEST_CASE("decoupled circuit has closed-form frequencies") {
    CircuitParams p = unit_params();
    p.L4 = 0.0;  // M = I, so the stiffness is N with eigenvalues {1, 2, 0}
    const CircuitMatrices cm = build_matrices(p);
    CHECK(cm.h1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cm.h2 == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("initial charge vector") {
    CircuitParams p = unit_params();
    p.q1_0 = 0.4;
    p.q2_0 = -0.3;
    p.C1 = 2.0;
    p.C2 = 0.5;
    const Vec a = initial_charge_vector(p);
    CHECK(a[0] == doctest::Approx(-0.2));
    CHECK(a[1] == doctest::Approx(0.6));
    CHECK(a[2] == doctest::Approx(0.6));
}

TEST_CASE("stability matrices use the ordered shifts") {
    CircuitParams p = unit_params();
    const StabilityMatrices sm = build_stability_matrices(p, 3.0, 4.0);
    CHECK(sm.K1 == 3.0);  // max(3, 2)
    CHECK(sm.K2 == 2.0);  // min(3, 2)
    CHECK(sm.S1(0, 0) == doctest::Approx(2.0 - 3.0));
    CHECK(sm.S1(1, 1) == doctest::Approx(2.0 - 6.0));
    CHECK(sm.S2(0, 0) == doctest::Approx(2.0 - 2.0));
    CHECK(sm.S2(2, 2) == doctest::Approx(2.0 - 4.0));
}

TEST_CASE("propagators solve the homogeneous system") {
    CircuitParams p = unit_params();
    p.L3 = 1.3;
    p.L4 = 0.6;
    p.L5 = 0.9;
    p.L6 = 1.7;
    p.C1 = 1.2;
    p.C2 = 0.8;
    const CircuitMatrices cm = build_matrices(p);
    const PropagatorPair pp = propagators(cm);

    // Phi(0) = 0, Psi(0) = I, and M Phi'' + N Phi = 0 via central differences.
    const Matrix phi0 = pp.phi(0.0);
    const Matrix psi0 = pp.psi(0.0);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(std::abs(phi0(i, j)) <= 1e-14);
            CHECK(psi0(i, j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }

    const double h = 1e-4;
    for (const double t : {0.3, 1.1, 2.4}) {
        const Matrix second =
            (1.0 / (h * h)) * (pp.phi(t + h) - 2.0 * pp.phi(t) + pp.phi(t - h));
        const Matrix lhs = cm.M * second + cm.N * pp.phi(t);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(lhs(i, j)) <= 1e-5);

        // Psi = Phi' and the running integral differentiates back to Phi.
        const Matrix dphi = (1.0 / (2.0 * h)) * (pp.phi(t + h) - pp.phi(t - h));
        const Matrix dint =
            (1.0 / (2.0 * h)) * (pp.phi_integral(t + h) - pp.phi_integral(t - h));
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(dphi(i, j) == doctest::Approx(pp.psi(t)(i, j)).epsilon(5e-7));
                CHECK(dint(i, j) == doctest::Approx(pp.phi(t)(i, j)).epsilon(5e-7));
            }
    }
}
