#pragma once

#include "varlc/matrix.hpp"

namespace varlc {

/// Result of a symmetric eigendecomposition A = V D V^T.
struct EigenDecomposition {
    Vec values;      ///< eigenvalues, ascending
    Matrix vectors;  ///< orthogonal; column j is the unit eigenvector of values[j]
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations. Intended for the
/// small (<= 6x6) matrices used throughout; reconstruction residual
/// ||A - V D V^T|| stays below 1e-10 * ||A||.
/// Throws std::invalid_argument for non-square or asymmetric input.
EigenDecomposition sym_eig(const Matrix& a);

/// Symmetric square root and inverse square root of an SPD matrix, both SPD.
/// Throws std::domain_error when an eigenvalue is not strictly positive.
struct SpdRoots {
    Matrix half;      ///< B with B*B = A
    Matrix neg_half;  ///< C with C*C = inverse(A)
};
SpdRoots sqrt_spd(const Matrix& a, double tol = 1e-12);

enum class Definiteness { PositiveDefinite, NegativeDefinite, Indefinite, Semidefinite };

/// Classify a symmetric matrix by the signs of its eigenvalues relative to
/// +-tol. Any eigenvalue with |value| <= tol makes the result Semidefinite.
Definiteness definiteness(const Matrix& a, double tol = 1e-8);

}  // namespace varlc
