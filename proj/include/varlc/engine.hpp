#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "varlc/matrix.hpp"
#include "varlc/ode.hpp"

namespace varlc {

/// Isoperimetric constraint int (B u + alpha) dt = 0.
struct LinearConstraint {
    Matrix B;   // l x m
    Vec alpha;  // l
};

/// General isoperimetric constraint int g(x, u) dt = 0 with Jacobians.
struct GeneralConstraint {
    std::function<Vec(const Vec&, const Vec&)> g;      // l
    std::function<Matrix(const Vec&, const Vec&)> g_x; // l x n
    std::function<Matrix(const Vec&, const Vec&)> g_u; // l x m
};

/// Control-affine-or-general smooth problem: dynamics x' = f(x,u), running
/// cost L(x,u), optional integral constraint. All callbacks must be
/// reentrant; the engine holds no state between calls.
struct ControlSystem {
    int n = 0;  ///< state dimension
    int m = 0;  ///< control dimension
    int l = 0;  ///< constraint dimension (0 when unconstrained)

    std::function<Vec(const Vec&, const Vec&)> f;      // n
    std::function<Matrix(const Vec&, const Vec&)> f_x; // n x n
    std::function<Matrix(const Vec&, const Vec&)> f_u; // n x m
    std::function<double(const Vec&, const Vec&)> L;
    std::function<Vec(const Vec&, const Vec&)> L_x;    // n (gradient)
    std::function<Vec(const Vec&, const Vec&)> L_u;    // m (gradient)

    std::variant<std::monostate, LinearConstraint, GeneralConstraint> constraint;

    double t0 = 0.0;
    double t1 = 1.0;
};

/// Piecewise-linear control signal on a strictly increasing grid.
struct ControlTrajectory {
    Vec times;
    std::vector<Vec> values;  ///< m-vector per node

    /// Linear interpolation; clamps to the end values outside the grid.
    [[nodiscard]] Vec at(double t) const;
    [[nodiscard]] std::size_t size() const { return times.size(); }

    /// Uniform grid with steps+1 nodes carrying the same value everywhere.
    static ControlTrajectory constant(double t0, double t1, int steps, Vec value);
};

/// Fundamental matrices X(t_i) of the linearized dynamics along (x, u),
/// X(t0) = I. The propagator between grid nodes is T(s, t) = X(s) X(t)^{-1}.
struct TransitionOperator {
    Vec times;
    std::vector<Matrix> X;

    /// T(times[i_s], times[i_t]).
    [[nodiscard]] Matrix between(std::size_t i_s, std::size_t i_t) const;
};

/// Integrates x' = f(x, u(t)) with classical RK4 on the control grid,
/// interpolating u linearly at half-steps. Throws on divergence.
OdeGrid simulate_state(const ControlSystem& sys, const ControlTrajectory& u,
                       const Vec& x0);

/// Integrates X' = f_x(x(t), u(t)) X, X(t0) = I along a simulated trajectory.
TransitionOperator transition_matrix(const ControlSystem& sys, const OdeGrid& x,
                                     const ControlTrajectory& u);

/// Action integral J(u) = int L(x(t;u), u(t)) dt, trapezoid on the grid.
double lagrange_functional(const ControlSystem& sys, const ControlTrajectory& u,
                           const Vec& x0);

/// Solves w' = -f_x^T w - source(t, x, u)^T backward from w(t1) = 0 on the
/// trajectory grid; returns w at every node. This is the linear-cost form of
/// the row integrals int_t^{t1} source(s) T(s, t) ds that appear in the
/// stationarity conditions (identical by variation of constants).
std::vector<Vec> backward_adjoint(
    const ControlSystem& sys, const OdeGrid& x, const ControlTrajectory& u,
    const std::function<Vec(double, const Vec&, const Vec&)>& source);

/// First variation of J at u in direction h:
///   deltaJ = int [ w(t)^T f_u + L_u ] . h(t) dt  with the adjoint weight w.
double first_variation(const ControlSystem& sys, const ControlTrajectory& u,
                       const Vec& x0, const ControlTrajectory& h);

/// Same quantity by the literal nested trapezoid over transition matrices;
/// O(grid^2), retained as an independent cross-check.
double first_variation_nested(const ControlSystem& sys, const ControlTrajectory& u,
                              const Vec& x0, const ControlTrajectory& h);

/// Pointwise stationarity residual r(t), an m-vector per node:
///   unconstrained:  L_u + w^T f_u                      (w sourced by L_x)
///   linear:         L_u + w^T f_u - mu^T B
///   general:        L_u + w~^T f_u - mu^T g_u          (w~ sourced by L_x - mu^T g_x)
/// mu must be empty exactly when the system is unconstrained.
std::vector<Vec> el_residual(const ControlSystem& sys, const ControlTrajectory& u,
                             const Vec& x0, const Vec& mu);

/// int (B u + alpha) dt or int g(x, u) dt by trapezoid.
Vec constraint_residual(const ControlSystem& sys, const ControlTrajectory& u,
                        const Vec& x0);

/// Removes the constant component that violates int B h dt = 0: subtracts
/// B^T (B B^T)^+ (int B h dt) / (t_end - t_start) from every node.
ControlTrajectory project_allowed_variation(const Matrix& B, const ControlTrajectory& h);

}  // namespace varlc
