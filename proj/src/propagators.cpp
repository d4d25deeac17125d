#include "varlc/propagators.hpp"

#include <cmath>
#include <functional>

namespace varlc {

namespace {

// Channel scalars with series branches: s*|t| below this uses the Taylor
// form, avoiding 0/0 and cancellation for slow channels.
constexpr double kSmallArg = 1e-4;

// sin(s t)/s, continuous through s = 0 (value t).
double sin_over(double h, double t) {
    if (h == 0.0) return t;
    const double s = std::sqrt(h);
    const double u = s * t;
    if (std::abs(u) < kSmallArg) {
        const double u2 = u * u;
        return t * (1.0 - u2 / 6.0 + u2 * u2 / 120.0);
    }
    return std::sin(u) / s;
}

double cos_of(double h, double t) {
    if (h == 0.0) return 1.0;
    return std::cos(std::sqrt(h) * t);
}

// (1 - cos(s t))/h, continuous through s = 0 (value t^2/2).
double one_minus_cos_over(double h, double t) {
    if (h == 0.0) return 0.5 * t * t;
    const double s = std::sqrt(h);
    const double u = s * t;
    if (std::abs(u) < kSmallArg) {
        const double u2 = u * u;
        return 0.5 * t * t * (1.0 - u2 / 12.0 + u2 * u2 / 360.0);
    }
    return (1.0 - std::cos(u)) / h;
}

}  // namespace

static Matrix channel_map(const PropagatorPair& pp,
                          const std::function<double(double)>& f) {
    const std::size_t n = pp.h.size();
    Matrix d = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) d(i, i) = f(pp.h[i]);
    return pp.M_neg_half * (pp.P.transposed() * d * pp.P) * pp.M_half;
}

Matrix PropagatorPair::phi(double t) const {
    return channel_map(*this, [t](double h) { return sin_over(h, t); });
}

Matrix PropagatorPair::psi(double t) const {
    return channel_map(*this, [t](double h) { return cos_of(h, t); });
}

Matrix PropagatorPair::phi_integral(double t) const {
    return channel_map(*this, [t](double h) { return one_minus_cos_over(h, t); });
}

PropagatorPair propagators(const CircuitMatrices& m) {
    PropagatorPair pp;
    pp.M_half = m.M_half;
    pp.M_neg_half = m.M_neg_half;
    pp.P = m.P;
    pp.h = {m.h1, m.h2, 0.0};
    return pp;
}

}  // namespace varlc
