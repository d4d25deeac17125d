#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "varlc/engine.hpp"
#include "varlc/matrix.hpp"
#include "varlc/ode.hpp"
#include "varlc/quadratic.hpp"

namespace varlc {

/// Terminal boundary regime for the costate.
///
///  - Unconstrained: no multipliers, p(t1) = 0.
///  - SpecialQ: the constraint integrand factors through the dynamics,
///    g = Q f + beta; the energy stays unconstrained and the multipliers
///    enter through the terminal value p(t1) = Q^T mu.
///  - General: multipliers shift the energy, p(t1) = 0.
enum class CostateRegime { Unconstrained, SpecialQ, General };

/// Canonical description of a control problem after eliminating the control:
/// stationary feedback map phi(x, p; mu), energy H(x, p; mu) and its
/// gradients. Passing an empty mu selects the unconstrained forms.
struct HamiltonianSpec {
    std::size_t n = 0;  ///< state dimension
    std::size_t m = 0;  ///< control dimension
    std::size_t l = 0;  ///< constraint dimension (0 when unconstrained)
    double t0 = 0.0;
    double t1 = 1.0;

    /// u = phi(x, p; mu), the stationary point of the pseudo energy in u.
    std::function<Vec(const Vec&, const Vec&, const Vec&)> phi;
    /// H(x, p; mu).
    std::function<double(const Vec&, const Vec&, const Vec&)> value;
    /// dH/dx.
    std::function<Vec(const Vec&, const Vec&, const Vec&)> grad_x;
    /// dH/dp.
    std::function<Vec(const Vec&, const Vec&, const Vec&)> grad_p;
};

/// Costate samples matching a state grid node for node.
struct CostateTrajectory {
    Vec times;
    std::vector<Vec> values;  ///< n-vector per node

    [[nodiscard]] std::size_t size() const { return times.size(); }
};

/// Matched canonical pair produced by the shooting solver.
struct CanonicalSolution {
    OdeGrid x;
    CostateTrajectory p;
    Vec initial_costate;        ///< converged p(t0)
    int iterations = 0;         ///< Newton iterations spent
    double terminal_defect = 0.0;  ///< |p(t1) - target| at convergence
};

/// Canonical pair plus the multipliers located for a constrained problem.
struct ConstrainedCanonicalSolution {
    Vec mu;
    CanonicalSolution canonical;
    int outer_iterations = 0;
    double constraint_residual = 0.0;  ///< |int (B u + alpha) dt| at mu
};

/// Which description was given and which was reconstructed.
enum class EquivalenceDirection { LagrangianToHamiltonian, HamiltonianToLagrangian };

/// Residual maxima gathered when crossing between the variational and the
/// canonical descriptions of one trajectory.
struct EquivalenceReport {
    EquivalenceDirection direction = EquivalenceDirection::LagrangianToHamiltonian;
    /// Max defect of x' = dH/dp, p' = -dH/dx by midpoint differences.
    double canonical_residual = 0.0;
    /// Max stationarity residual from the variational engine.
    double euler_lagrange_residual = 0.0;
    /// |p(t1) - boundary value| for the regime.
    double terminal_costate_error = 0.0;
};

/// Closed-form Legendre transform of a quadratic-in-control Lagrangian:
/// phi = R^{-1}(A^T p + B^T mu), H = 1/2 phi^T R phi + V(x). The mu argument
/// fixes the multiplier dimension and may be empty for the unconstrained
/// form; the returned callbacks re-read mu on every call, so the same spec
/// serves both forms. Throws std::domain_error when R is not symmetric
/// positive definite.
[[nodiscard]] HamiltonianSpec legendre_transform(const QuadraticLagrangianSystem& sys,
                                                 const Vec& mu = {});

/// p^T f(x,u) - L(x,u) + mu^T (B u + alpha); the multiplier term is dropped
/// when mu is empty.
[[nodiscard]] double pseudo_hamiltonian(const QuadraticLagrangianSystem& sys, const Vec& x,
                                        const Vec& p, const Vec& u, const Vec& mu);

/// Builds the costate along a trajectory pair by the backward adjoint ODE:
/// p = -w with w sourced by dL/dx - mu^T dg/dx, then shifted by Q^T mu in
/// the SpecialQ regime so that p(t1) matches the regime boundary value.
/// Q is required exactly in the SpecialQ regime (l x n).
[[nodiscard]] CostateTrajectory costate_from_lagrangian(const ControlSystem& sys,
                                                        const OdeGrid& x,
                                                        const ControlTrajectory& u,
                                                        const Vec& mu, CostateRegime regime,
                                                        const Matrix* q = nullptr);

/// Solves x' = dH/dp, p' = -dH/dx with x(t0) = x0 and p(t1) = terminal_p by
/// Newton shooting on p(t0) (finite-difference Jacobian, damped steps, at
/// most 50 iterations). For quadratic problems the defect map is affine and
/// the first undamped step is the exact propagator solve; further iterations
/// engage only for nonlinear potentials. Throws std::runtime_error with the
/// last defect when the iteration does not converge.
[[nodiscard]] CanonicalSolution integrate_canonical(const HamiltonianSpec& ham, const Vec& x0,
                                                    const Vec& terminal_p, const Vec& mu,
                                                    std::size_t steps, double tol = 1e-10);

/// Finds the multipliers of a constrained problem by an outer Newton
/// iteration on the constraint residual C(mu) = int (B u + alpha) dt, with
/// one canonical shooting solve per evaluation. Regime selects the coupling:
/// General shifts the energy by mu and keeps p(t1) = 0; SpecialQ keeps the
/// unconstrained energy and sets p(t1) = Q^T mu (Q must satisfy B = Q A).
[[nodiscard]] ConstrainedCanonicalSolution solve_constrained_canonical(
    const QuadraticLagrangianSystem& sys, const Vec& x0, std::size_t steps,
    CostateRegime regime, const Matrix* q = nullptr, double tol = 1e-10);

/// Lagrangian-to-Hamiltonian check: builds the costate from (x, u), then
/// reports the canonical-equation defect, the stationarity residual of the
/// input pair, and the terminal costate error.
[[nodiscard]] EquivalenceReport verify_equivalence(const ControlSystem& sys,
                                                   const HamiltonianSpec& ham, const OdeGrid& x,
                                                   const ControlTrajectory& u, const Vec& mu,
                                                   CostateRegime regime,
                                                   const Matrix* q = nullptr);

/// Hamiltonian-to-Lagrangian check: reconstructs u = phi(x, p; mu) from a
/// canonical pair, then reports the stationarity residual of (x, u), the
/// canonical defect of the input pair, and the terminal costate error.
[[nodiscard]] EquivalenceReport verify_equivalence(const ControlSystem& sys,
                                                   const HamiltonianSpec& ham, const OdeGrid& x,
                                                   const CostateTrajectory& p, const Vec& mu,
                                                   CostateRegime regime,
                                                   const Matrix* q = nullptr);

/// Rank by singular-direction counting at relative tolerance rel_tol on the
/// singular values.
[[nodiscard]] std::size_t numerical_rank(const Matrix& x, double rel_tol = 1e-10);

/// True iff rank(A) equals the rank of A stacked over B, i.e. the rows of B
/// lie in the row space of A and the terminal-shift description applies.
[[nodiscard]] bool rank_condition(const Matrix& a, const Matrix& b);

/// max_t |H(x(t), p(t); mu) - H(x(t0), p(t0); mu)| over a matched pair.
[[nodiscard]] double energy_drift(const HamiltonianSpec& ham, const OdeGrid& x,
                                  const CostateTrajectory& p, const Vec& mu);

}  // namespace varlc
