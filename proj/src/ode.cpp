#include "varlc/ode.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace varlc {

namespace {

bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace

OdeGrid integrate_ode(const OdeField& field, Vec initial, double t0, double t1,
                      std::size_t steps) {
    if (steps < 1) throw std::invalid_argument("integrate_ode: steps must be >= 1");
    if (!(t1 > t0)) throw std::invalid_argument("integrate_ode: t1 must exceed t0");

    const double h = (t1 - t0) / static_cast<double>(steps);
    OdeGrid grid;
    grid.times.resize(steps + 1);
    grid.states.resize(steps + 1);
    grid.times[0] = t0;
    grid.states[0] = std::move(initial);

    Vec k1, k2, k3, k4, mid;
    for (std::size_t i = 0; i < steps; ++i) {
        const double t = t0 + h * static_cast<double>(i);
        const Vec& x = grid.states[i];

        k1 = field(t, x);
        mid = x; axpy(0.5 * h, k1, mid);
        k2 = field(t + 0.5 * h, mid);
        mid = x; axpy(0.5 * h, k2, mid);
        k3 = field(t + 0.5 * h, mid);
        mid = x; axpy(h, k3, mid);
        k4 = field(t + h, mid);

        Vec next = x;
        for (std::size_t j = 0; j < next.size(); ++j)
            next[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);

        if (!all_finite(next))
            throw std::runtime_error("integrate_ode: non-finite state at t = " +
                                     std::to_string(t + h));
        grid.times[i + 1] = (i + 1 == steps) ? t1 : t + h;
        grid.states[i + 1] = std::move(next);
    }
    return grid;
}

}  // namespace varlc
