#pragma once

#include <array>
#include <cstdint>

#include "varlc/circuit.hpp"
#include "varlc/matrix.hpp"
#include "varlc/series.hpp"

namespace varlc {

/// Truncated trigonometric representation of the three loop currents on
/// [t0, t0+T]:
///   i_k(t) = lambda_k/T
///          + sum_{n=1..Ntrunc} a(k,n) cos(2 pi n (t-t0)/T)
///          + b(k,n) sin(2 pi n (t-t0)/T).
/// Every coefficient choice automatically satisfies the charge-transfer
/// constraints: the oscillatory terms integrate to zero over the horizon, so
/// int i_k dt = lambda_k exactly.
struct FourierCurrents {
    double T = 1.0;      // horizon length (s)
    double t0 = 0.0;     // left endpoint (s); sampling reference
    Vec lambda;          // 3 mean charge transfers (C)
    Matrix a;            // 3 x Ntrunc cosine coefficients (A), row = channel
    Matrix b;            // 3 x Ntrunc sine coefficients (A)
    int Ntrunc = 0;

    /// Zero coefficients at the given truncation order.
    static FourierCurrents zero(double T, double t0, int Ntrunc);
};

/// Action integral split into its quadratic (Q = Q1 cosine block + Q2 sine
/// block), linear (Lpart), and coefficient-free (Npart) parts.
struct FunctionalBreakdown {
    double Q1 = 0.0;
    double Q2 = 0.0;
    double Q = 0.0;
    double Lpart = 0.0;
    double Npart = 0.0;
    double total = 0.0;
};

/// Currents sampled at one instant; throws std::domain_error for t outside
/// [t0, t0+T].
std::array<double, 3> sample_currents(const FourierCurrents& currents, double t);

/// Currents sampled on a batch of instants (each validated as above). Uses
/// the trigonometric synthesis kernel.
std::vector<std::array<double, 3>> sample_currents_grid(const FourierCurrents& currents,
                                                        const Vec& times);

/// Closed-form evaluation of the action integral over the truncated series:
/// inductive coenergy of the four branch currents minus capacitive energy of
/// the two integrated charges, expanded coefficient-by-coefficient.
FunctionalBreakdown evaluate_functional(const CircuitParams& params,
                                        const FourierCurrents& currents);

/// Independent oracle: composite-Simpson quadrature of the same action
/// integral with the charges accumulated in closed form from the series.
double evaluate_functional_time_domain(const CircuitParams& params,
                                       const FourierCurrents& currents,
                                       std::int64_t quad_steps);

/// The equality-attaining sequence x_n = scale / (K n - alpha/n) of the
/// weighted coefficient inequality, n = 1..n_max. Requires K > alpha.
Vec extremal_sequence(double K, double alpha, double scale, std::int64_t n_max);

/// Relative gap |alpha*S2 + beta*S1^2 - K*S0| / (K*S0) of the weighted
/// inequality at its extremal sequence, where S1 = sum x_n/n, S2 = sum
/// (x_n/n)^2, S0 = sum x_n^2. Truncated sums are completed with
/// integral-plus-Euler-Maclaurin tail corrections: plain truncation at N
/// leaves a structural O(1/(K N)) gap that would mask the equality.
double extremal_equality_gap(const SeriesConstant& constant, std::int64_t n_max);

}  // namespace varlc
