#pragma once

#include <functional>

#include "varlc/matrix.hpp"

namespace varlc {

/// Discrete carrier for trajectories: one state vector per sample instant.
struct OdeGrid {
    Vec times;                 ///< strictly increasing, seconds
    std::vector<Vec> states;   ///< states[i] belongs to times[i]

    [[nodiscard]] std::size_t size() const { return times.size(); }
};

using OdeField = std::function<Vec(double t, const Vec& state)>;

/// Classical fixed-step 4th-order Runge-Kutta integration of
/// state' = field(t, state) over [t0, t1] with `steps` equal steps.
/// The grid holds steps+1 nodes including both endpoints.
/// Throws std::runtime_error naming the time at which a non-finite state
/// is produced.
OdeGrid integrate_ode(const OdeField& field, Vec initial, double t0, double t1,
                      std::size_t steps);

}  // namespace varlc
