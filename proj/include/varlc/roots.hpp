#pragma once

#include <functional>

namespace varlc {

/// Find a root of a continuous scalar function inside a sign-changing bracket
/// [lo, hi]. Bisection with secant acceleration: the bracket is always
/// maintained, so the result lies in [lo, hi] and is accurate to `tol`
/// (absolute, on the abscissa). Exact zeros at the endpoints are accepted.
/// Throws std::invalid_argument when f(lo) and f(hi) share a strict sign.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol);

}  // namespace varlc
