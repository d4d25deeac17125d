#pragma once

#include <functional>
#include <optional>

#include "varlc/circuit.hpp"
#include "varlc/engine.hpp"

namespace varlc {

/// Control-affine problem with quadratic control cost:
///   x' = A u,  L(x, u) = 1/2 u^T R u - V(x),
/// optionally under the integral constraint int (B u + alpha) dt = 0.
/// This shape admits a closed-form stationary feedback in the Legendre
/// transform; general Lagrangians can still supply an explicit feedback map
/// to the Hamiltonian layer directly.
struct QuadraticLagrangianSystem {
    Matrix A;  // n x m dynamics
    Matrix R;  // m x m symmetric positive-definite control cost
    std::function<double(const Vec&)> V;    // potential
    std::function<Vec(const Vec&)> gradV;   // n
    std::optional<Matrix> B;                // l x m
    std::optional<Vec> alpha;               // l
    double t0 = 0.0;
    double t1 = 1.0;

    [[nodiscard]] int n() const { return static_cast<int>(A.rows()); }
    [[nodiscard]] int m() const { return static_cast<int>(A.cols()); }
    [[nodiscard]] int l() const { return B ? static_cast<int>(B->rows()) : 0; }
};

/// The LC network as a quadratic system: state (q1, q2), controls the three
/// loop currents, R the inductance form, V the capacitor energy, and the
/// charge-transfer constraint B = I3, alpha = -lambda/T.
[[nodiscard]] QuadraticLagrangianSystem lc_system(const CircuitParams& params);

/// Capacitor plate driven by a pendulum: state (q, theta), controls
/// (i1, i2, omega), capacitance C(theta) = C0/(1 + kappa*theta).
struct ElectromechParams {
    double L1 = 1.0, L2 = 1.0;         // coil inductances (H)
    double C0 = 1.0, kappa = 0.1;      // capacitance law
    double mass = 1.0, length = 1.0;   // pendulum bob
    double gravity = 9.8;
    double t0 = 0.0, t1 = 1.0;
};
[[nodiscard]] QuadraticLagrangianSystem electromech_system(const ElectromechParams& params);

/// Wraps callbacks for the variational engine.
[[nodiscard]] ControlSystem to_control_system(const QuadraticLagrangianSystem& sys);

}  // namespace varlc
