#pragma once

#include "varlc/matrix.hpp"

namespace varlc {

/// Physical parameters of the two-loop LC network: four inductors feeding a
/// shared branch, two capacitors, a fixed time horizon, initial capacitor
/// charges, and prescribed total charge transfers through the three loop
/// currents.
struct CircuitParams {
    double L3 = 1.0, L4 = 1.0, L5 = 1.0, L6 = 1.0;  // inductances (H)
    double C1 = 1.0, C2 = 1.0;                      // capacitances (F)
    double t0 = 0.0, t1 = 1.0;                      // horizon (s)
    double q1_0 = 0.0, q2_0 = 0.0;                  // initial charges (C)
    double lambda3 = 0.0, lambda5 = 0.0, lambda6 = 0.0;  // charge transfers (C)

    [[nodiscard]] double horizon() const { return t1 - t0; }

    /// Throws std::invalid_argument naming the offending field. L4 = 0 is
    /// accepted (the inductance matrix stays positive-definite when the
    /// other three inductances are positive), which enables closed-form
    /// frequency tests.
    void validate() const;
};

/// Inductance/elastance matrices and the spectral data of the normalized
/// stiffness M^(-1/2) N M^(-1/2) = P^T diag(h1, h2, 0) P.
struct CircuitMatrices {
    Matrix M;           // 3x3 inductance quadratic form (H)
    Matrix N;           // 3x3 elastance form, rank 2 (1/F)
    Matrix M_half;      // M^(1/2)
    Matrix M_neg_half;  // M^(-1/2)
    Matrix P;           // orthogonal; rows ordered (h1-channel, h2-channel, zero channel)
    double h1 = 0.0;    // smaller positive eigenvalue (1/s^2)
    double h2 = 0.0;    // larger positive eigenvalue (1/s^2)
    Vec a;              // -(q1_0/C1, q2_0/C2, q2_0/C2) (V)
};

/// Shifted inductance forms governing coercivity of the action's quadratic
/// part: S = M - K*diag(1,2,2) with the larger shift K1 in S1 and the
/// smaller shift K2 in S2.
struct StabilityMatrices {
    Matrix S1, S2;
    double K1 = 0.0, K2 = 0.0;
};

/// Assembles M, N, their square roots, the eigen-structure (h1, h2, P), and
/// the source vector a. The least-magnitude eigenvalue of M^(-1/2)NM^(-1/2)
/// is snapped to exactly 0: the rank-2 structure of N is structural, and a
/// spurious tiny frequency would pollute the propagators.
[[nodiscard]] CircuitMatrices build_matrices(const CircuitParams& params);

/// Builds S1 (shift K1 = max{K_C1, Ktilde_C2/2}) and S2 (shift
/// K2 = min{...}) from the series constants of the spectral module.
[[nodiscard]] StabilityMatrices build_stability_matrices(const CircuitParams& params,
                                                         double K_C1,
                                                         double Ktilde_C2);

/// a = -(q1_0/C1, q2_0/C2, q2_0/C2).
[[nodiscard]] Vec initial_charge_vector(const CircuitParams& params);

}  // namespace varlc
