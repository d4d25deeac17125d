#pragma once

#include "varlc/circuit.hpp"
#include "varlc/matrix.hpp"

namespace varlc {

/// Closed-form propagators of the second-order system M x'' + N x = const:
/// in the diagonalizing frame each channel with eigenvalue h carries
/// sin(sqrt(h) t)/sqrt(h), cos(sqrt(h) t), and the zero channel carries t, 1.
/// phi_integral is the running integral of phi from 0, needed by the
/// variation-of-constants solution.
struct PropagatorPair {
    Matrix M_half;      // conjugation back to physical coordinates
    Matrix M_neg_half;
    Matrix P;           // rows ordered to match h
    Vec h;              // channel eigenvalues, zero entries exact

    /// Phi(t): solution operator with Phi(0) = 0, Phi'(0) = I.
    [[nodiscard]] Matrix phi(double t) const;
    /// Psi(t) = Phi'(t): Psi(0) = I.
    [[nodiscard]] Matrix psi(double t) const;
    /// integral of Phi over [0, t].
    [[nodiscard]] Matrix phi_integral(double t) const;
};

/// Assembles the propagators from the circuit's spectral data.
[[nodiscard]] PropagatorPair propagators(const CircuitMatrices& matrices);

}  // namespace varlc
