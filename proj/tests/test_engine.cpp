#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "varlc/engine.hpp"
#include "varlc/quadratic.hpp"

using namespace varlc;

namespace {

/// Scalar double integrator cost: f = u, L = u^2/2 - x^2/2 on [t0, t1].
ControlSystem oscillator_system(double t0, double t1) {
    ControlSystem sys;
    sys.n = 1;
    sys.m = 1;
    sys.f = [](const Vec&, const Vec& u) { return u; };
    sys.f_x = [](const Vec&, const Vec&) { return Matrix(1, 1); };
    sys.f_u = [](const Vec&, const Vec&) { return Matrix{{1.0}}; };
    sys.L = [](const Vec& x, const Vec& u) { return 0.5 * (u[0] * u[0] - x[0] * x[0]); };
    sys.L_x = [](const Vec& x, const Vec&) { return Vec{-x[0]}; };
    sys.L_u = [](const Vec&, const Vec& u) { return Vec{u[0]}; };
    sys.t0 = t0;
    sys.t1 = t1;
    return sys;
}

ControlTrajectory sampled_control(double t0, double t1, int steps,
                                  const std::function<Vec(double)>& fn) {
    ControlTrajectory u;
    u.times.resize(static_cast<std::size_t>(steps) + 1);
    u.values.resize(u.times.size());
    for (int i = 0; i <= steps; ++i) {
        const double t = t0 + (t1 - t0) * i / steps;
        u.times[static_cast<std::size_t>(i)] = t;
        u.values[static_cast<std::size_t>(i)] = fn(t);
    }
    return u;
}

}  // namespace

TEST_CASE("control interpolation clamps and interpolates") {
    ControlTrajectory u;
    u.times = {0.0, 1.0, 2.0};
    u.values = {Vec{0.0}, Vec{2.0}, Vec{2.0}};
    CHECK(u.at(0.5)[0] == doctest::Approx(1.0));
    CHECK(u.at(-1.0)[0] == doctest::Approx(0.0));
    CHECK(u.at(3.0)[0] == doctest::Approx(2.0));

    const ControlTrajectory c = ControlTrajectory::constant(0.0, 1.0, 10, Vec{3.0, 4.0});
    CHECK(c.size() == 11);
    CHECK(c.at(0.37)[1] == doctest::Approx(4.0));
}

TEST_CASE("state simulation integrates the controlled flow") {
    const ControlSystem sys = oscillator_system(0.0, 1.0);
    // u(t) = cos(t): x(t) = x0 + sin(t).
    const ControlTrajectory u =
        sampled_control(0.0, 1.0, 512, [](double t) { return Vec{std::cos(t)}; });
    const OdeGrid x = simulate_state(sys, u, Vec{0.3});
    // The piecewise-linear control interpolation dominates the error:
    // O(h^2) ~ 3e-7 at 512 steps, far above the RK4 contribution.
    for (std::size_t i = 0; i < x.size(); i += 64)
        CHECK(std::abs(x.states[i][0] - (0.3 + std::sin(x.times[i]))) <= 1e-6);
}

TEST_CASE("transition matrices multiply along the grid") {
    ControlSystem sys = oscillator_system(0.0, 1.0);
    // Make the dynamics state-coupled: f = x + u so f_x = 1.
    sys.f = [](const Vec& x, const Vec& u) { return Vec{x[0] + u[0]}; };
    sys.f_x = [](const Vec&, const Vec&) { return Matrix{{1.0}}; };
    const ControlTrajectory u =
        sampled_control(0.0, 1.0, 256, [](double) { return Vec{0.5}; });
    const OdeGrid x = simulate_state(sys, u, Vec{1.0});
    const TransitionOperator op = transition_matrix(sys, x, u);
    // X(t) = e^t for scalar f_x = 1; between(i, j) = e^{t_i - t_j}.
    const Matrix t = op.between(128, 64);
    CHECK(t(0, 0) == doctest::Approx(std::exp(x.times[128] - x.times[64])).epsilon(1e-8));
}

TEST_CASE("action functional on a known trajectory") {
    const ControlSystem sys = oscillator_system(0.0, 1.0);
    // u = 1, x = t from x0 = 0: J = int_0^1 (1 - t^2)/2 dt = 1/3.
    const ControlTrajectory u =
        sampled_control(0.0, 1.0, 1024, [](double) { return Vec{1.0}; });
    CHECK(std::abs(lagrange_functional(sys, u, Vec{0.0}) - 1.0 / 3.0) <= 1e-6);
}

TEST_CASE("backward adjoint integrates the tail source") {
    const ControlSystem sys = oscillator_system(0.0, 1.0);
    const ControlTrajectory u =
        sampled_control(0.0, 1.0, 512, [](double) { return Vec{0.0}; });
    const OdeGrid x = simulate_state(sys, u, Vec{1.0});
    // With f_x = 0 and source = 1: w(t) = int_t^{t1} 1 ds = t1 - t.
    const auto w = backward_adjoint(
        sys, x, u, [](double, const Vec&, const Vec&) { return Vec{1.0}; });
    REQUIRE(w.size() == x.size());
    CHECK(std::abs(w.back()[0]) <= 1e-12);
    for (std::size_t i = 0; i < w.size(); i += 64)
        CHECK(std::abs(w[i][0] - (1.0 - x.times[i])) <= 1e-9);
}

TEST_CASE("stationary trajectory has vanishing pointwise residual") {
    const double t1 = 1.0;
    const ControlSystem sys = oscillator_system(0.0, t1);
    // x(t) = cos(t - t1) satisfies the stationarity condition with natural
    // terminal behavior; u = x'.
    const ControlTrajectory u = sampled_control(
        0.0, t1, 8192, [t1](double t) { return Vec{-std::sin(t - t1)}; });
    const Vec x0{std::cos(-t1)};
    const auto r = el_residual(sys, u, x0, {});
    double worst = 0.0;
    for (const Vec& ri : r) worst = std::max(worst, norm_inf(ri));
    CHECK(worst <= 1e-7);
}

TEST_CASE("first variation agrees with its nested-quadrature form") {
    const ControlSystem sys = oscillator_system(0.0, 1.0);
    const ControlTrajectory u =
        sampled_control(0.0, 1.0, 257, [](double t) { return Vec{std::sin(2.0 * t)}; });
    const ControlTrajectory h =
        sampled_control(0.0, 1.0, 257, [](double t) { return Vec{std::cos(3.0 * t)}; });
    const Vec x0{0.2};
    const double fast = first_variation(sys, u, x0, h);
    const double nested = first_variation_nested(sys, u, x0, h);
    CHECK(std::abs(fast - nested) <= 1e-6 * std::max(1.0, std::abs(fast)));
}

TEST_CASE("first variation matches central differences") {
    const ControlSystem sys = oscillator_system(0.0, 1.5);
    const ControlTrajectory u =
        sampled_control(0.0, 1.5, 2048, [](double t) { return Vec{std::sin(t)}; });
    const ControlTrajectory h = sampled_control(
        0.0, 1.5, 2048, [](double t) { return Vec{std::cos(2.0 * t) + 0.5}; });
    const Vec x0{0.7};

    const double dj = first_variation(sys, u, x0, h);
    const double eps = 1e-5;
    ControlTrajectory up = u, um = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
        up.values[i][0] += eps * h.values[i][0];
        um.values[i][0] -= eps * h.values[i][0];
    }
    const double fd = (lagrange_functional(sys, up, x0) -
                       lagrange_functional(sys, um, x0)) /
                      (2.0 * eps);
    CHECK(std::abs(dj - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
}

TEST_CASE("constraint residual vanishes for exactly balanced currents") {
    CircuitParams p;
    p.lambda3 = 0.5;
    p.lambda5 = -0.2;
    p.lambda6 = 0.3;
    const ControlSystem sys = to_control_system(lc_system(p));
    const double T = p.horizon();
    const ControlTrajectory u = ControlTrajectory::constant(
        p.t0, p.t1, 128, Vec{p.lambda3 / T, p.lambda5 / T, p.lambda6 / T});
    const Vec c = constraint_residual(sys, u, Vec{p.q1_0, p.q2_0});
    REQUIRE(c.size() == 3);
    CHECK(norm_inf(c) <= 1e-12);
}

TEST_CASE("general constraints reduce to their linear counterparts") {
    CircuitParams p;
    p.lambda3 = 0.4;
    const QuadraticLagrangianSystem q = lc_system(p);
    ControlSystem linear_sys = to_control_system(q);
    ControlSystem general = to_control_system(q);
    const Matrix B = *q.B;
    const Vec alpha = *q.alpha;
    general.constraint = GeneralConstraint{
        [B, alpha](const Vec&, const Vec& u) { return B * u + alpha; },
        [B](const Vec&, const Vec&) { return Matrix(B.rows(), 2); },
        [B](const Vec&, const Vec&) { return B; }};

    const ControlTrajectory u = sampled_control(p.t0, p.t1, 256, [](double t) {
        return Vec{std::sin(t), std::cos(t), 0.25};
    });
    const Vec x0{p.q1_0, p.q2_0};
    const Vec mu{0.1, -0.2, 0.3};

    const Vec c_lin = constraint_residual(linear_sys, u, x0);
    const Vec c_gen = constraint_residual(general, u, x0);
    for (std::size_t k = 0; k < 3; ++k)
        CHECK(c_lin[k] == doctest::Approx(c_gen[k]).epsilon(1e-12));

    const auto r_lin = el_residual(linear_sys, u, x0, mu);
    const auto r_gen = el_residual(general, u, x0, mu);
    for (std::size_t i = 0; i < r_lin.size(); i += 32)
        for (std::size_t k = 0; k < 3; ++k)
            CHECK(r_lin[i][k] == doctest::Approx(r_gen[i][k]).epsilon(1e-10));
}

TEST_CASE("variation projection restores the constraint subspace") {
    const Matrix B{{1.0, 0.0, 1.0}, {0.0, 1.0, -1.0}};
    const ControlTrajectory h = sampled_control(0.0, 2.0, 128, [](double t) {
        return Vec{std::sin(t) + 0.3, t, std::cos(2.0 * t) - 0.1};
    });
    const ControlTrajectory projected = project_allowed_variation(B, h);
    // Trapezoid integral of B h over the grid should now vanish.
    Vec integral(2, 0.0);
    for (std::size_t i = 1; i < projected.size(); ++i) {
        const double dt = projected.times[i] - projected.times[i - 1];
        const Vec lhs = B * projected.values[i - 1];
        const Vec rhs = B * projected.values[i];
        for (std::size_t k = 0; k < 2; ++k) integral[k] += 0.5 * dt * (lhs[k] + rhs[k]);
    }
    CHECK(norm_inf(integral) <= 1e-10);
}
