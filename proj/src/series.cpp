#include "varlc/series.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "varlc/kernels.hpp"
#include "varlc/roots.hpp"

namespace varlc {

namespace {

constexpr double kPi = std::numbers::pi;

/// zeta(2k) for k >= 1. The first four are closed forms; beyond that a short
/// direct sum converges far below double precision (tail < 300^(1-2k)).
double zeta_even(int k) {
    switch (k) {
        case 1: return kPi * kPi / 6.0;
        case 2: return std::pow(kPi, 4) / 90.0;
        case 3: return std::pow(kPi, 6) / 945.0;
        case 4: return std::pow(kPi, 8) / 9450.0;
        default: break;
    }
    double acc = 1.0;
    for (int n = 2; n <= 300; ++n) {
        const double term = std::pow(static_cast<double>(n), -2.0 * k);
        acc += term;
        if (term < 1e-20 * acc) break;
    }
    return acc;
}

}  // namespace

double reciprocal_quadratic_series(double K, double alpha) {
    if (!(K > alpha) || alpha < 0.0)
        throw std::domain_error("reciprocal_quadratic_series requires K > alpha >= 0");
    const double y2 = alpha / K;
    if (y2 >= 0.25) {
        const double y = std::sqrt(y2);
        return (1.0 - kPi * y / std::tan(kPi * y)) / (2.0 * alpha);
    }
    // sum = (1/K) * sum_{k>=0} zeta(2k+2) y^(2k); ratio <= 1/4 here.
    double acc = 0.0;
    double pw = 1.0;
    for (int k = 0; k < 64; ++k) {
        const double term = zeta_even(k + 1) * pw;
        acc += term;
        if (term < 1e-18 * acc) break;
        pw *= y2;
    }
    return acc / K;
}

double reciprocal_quadratic_series_truncated(double K, double alpha,
                                             std::int64_t n_terms) {
    if (!(K > alpha) || alpha < 0.0)
        throw std::domain_error("reciprocal_quadratic_series requires K > alpha >= 0");
    const double partial = kernels::reciprocal_quadratic_sum(K, alpha, 1, n_terms);
    // Integral tail from b = n_terms + 1/2: for alpha > 0,
    // int 1/(Kx^2-alpha) dx = ln((sK x + sa)/(sK x - sa)) / (2 sK sa).
    const double b = static_cast<double>(n_terms) + 0.5;
    double tail;
    if (alpha > 0.0) {
        const double sk = std::sqrt(K), sa = std::sqrt(alpha);
        tail = std::log((sk * b + sa) / (sk * b - sa)) / (2.0 * sk * sa);
    } else {
        tail = 1.0 / (K * b);
    }
    return partial + tail;
}

SeriesConstant solve_series_constant(double alpha, double beta) {
    if (!(beta > 0.0) || alpha < 0.0 || !std::isfinite(alpha) || !std::isfinite(beta))
        throw std::invalid_argument("solve_series_constant requires alpha >= 0, beta > 0");
    // residual(K) = beta * S(K) - 1 is strictly decreasing on (alpha, inf),
    // positive at K = alpha + beta (the n=1 term alone is already 1/beta
    // there) and negative for large K.
    const auto residual = [&](double K) {
        return beta * reciprocal_quadratic_series(K, alpha) - 1.0;
    };
    const double lo = alpha + beta;
    double hi = alpha + beta + std::max(beta, alpha);
    for (int i = 0; i < 200 && residual(hi) > 0.0; ++i) hi = alpha + 2.0 * (hi - alpha);
    const double K = find_root(residual, lo, hi, 1e-13 * hi);
    return SeriesConstant{alpha, beta, K};
}

std::pair<SeriesConstant, SeriesConstant> circuit_constants(const CircuitParams& p) {
    p.validate();
    const double T = p.horizon();
    const double a1 = T * T / (4.0 * kPi * kPi * p.C1);
    const double a2 = T * T / (4.0 * kPi * kPi * p.C2);
    return {solve_series_constant(a1, 2.0 * a1),
            solve_series_constant(2.0 * a2, 4.0 * a2)};
}

}  // namespace varlc
