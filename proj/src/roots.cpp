#include "varlc/roots.hpp"

#include <cmath>
#include <stdexcept>

namespace varlc {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol) {
    if (!(lo < hi)) throw std::invalid_argument("find_root: empty bracket");
    double flo = f(lo);
    if (flo == 0.0) return lo;
    double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0))
        throw std::invalid_argument("find_root: no sign change over the bracket");

    for (int iter = 0; iter < 200 && (hi - lo) > tol; ++iter) {
        // Secant candidate on alternate iterations, accepted only when it
        // lands safely inside the bracket; the interleaved bisections keep
        // the bracket width shrinking geometrically regardless.
        double mid = 0.5 * (lo + hi);
        const double denom = fhi - flo;
        if (iter % 2 == 0 && denom != 0.0) {
            const double sec = lo - flo * (hi - lo) / denom;
            const double guard = 0.01 * (hi - lo);
            if (sec > lo + guard && sec < hi - guard) mid = sec;
        }
        const double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace varlc
