#pragma once

#include <cstdint>
#include <utility>

#include "varlc/circuit.hpp"

namespace varlc {

/// Solution K of the series equation beta * sum_{n>=1} 1/(K n^2 - alpha) = 1.
/// The equation is monotone decreasing in K on (alpha + beta, infinity), so
/// the solution is unique and satisfies K > alpha + beta.
struct SeriesConstant {
    double alpha = 0.0;
    double beta = 0.0;
    double K = 0.0;
};

/// sum_{n>=1} 1/(K n^2 - alpha), evaluated in closed form.
/// Requires K > alpha >= 0. Uses the cotangent identity
/// (1 - pi*y*cot(pi*y)) / (2*alpha) with y = sqrt(alpha/K) when y >= 1/2,
/// and the zeta power series sum_k zeta(2k+2) y^(2k) / K otherwise (the
/// cotangent numerator cancels catastrophically as y -> 0; the series also
/// covers alpha = 0 exactly, where the sum is pi^2/(6K)).
double reciprocal_quadratic_series(double K, double alpha);

/// Same series by direct summation of terms with an integral tail bound
/// beyond n_terms; independent cross-check for the closed form.
double reciprocal_quadratic_series_truncated(double K, double alpha,
                                             std::int64_t n_terms);

/// Solves beta * sum 1/(K n^2 - alpha) = 1 for K. alpha >= 0, beta > 0.
SeriesConstant solve_series_constant(double alpha, double beta);

/// The two circuit stability constants: first component solves with
/// (alpha, 2*alpha), alpha = T^2/(4 pi^2 C1); second solves with
/// (2*alpha', 4*alpha'), alpha' = T^2/(4 pi^2 C2). When C1 = C2 the second
/// equals twice the first (degree-1 homogeneity of the equation).
std::pair<SeriesConstant, SeriesConstant> circuit_constants(const CircuitParams& params);

}  // namespace varlc
