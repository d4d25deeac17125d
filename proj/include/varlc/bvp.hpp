#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "varlc/circuit.hpp"
#include "varlc/ode.hpp"
#include "varlc/propagators.hpp"

namespace varlc {

/// Whether the critical-point boundary-value problem is uniquely solvable.
/// The problem degenerates exactly when (t1-t0)*sqrt(h_i) is an integer
/// multiple of pi for one of the two oscillatory channels.
struct ResonanceReport {
    bool resonant = false;
    /// (channel index 1 or 2, integer multiple k) for each resonant mode.
    std::vector<std::pair<int, int>> resonant_modes;
    bool solvable = true;
    int family_dimension = 0;
    /// Within 1e-6 of a resonance but not flagged: conditioning degrades.
    bool near_resonance_warning = false;
};

/// Critical-point trajectory: cumulative charge transfers x(t) with x(t0)=0,
/// their derivatives (the loop currents), and the stationarity constants.
struct BvpSolution {
    Vec c;  ///< initial currents x'(t0)
    /// states are (x1, x2, x3, x1', x2', x3') per node; times are absolute.
    OdeGrid grid;
    std::vector<std::array<double, 3>> currents;  ///< x'(t) per node
    Vec stationarity_constants;                   ///< (l3, l5, l6)
};

/// A resonant circuit's solution family: one particular solution plus the
/// kernel directions of the boundary operator that parameterize it.
struct ResonantFamily {
    BvpSolution particular;
    Matrix kernel_basis;  ///< columns span ker Phi(T)
};

/// Detects resonance and, for resonant circuits, kernel dimension and
/// solvability of the boundary equation.
ResonanceReport uniqueness_check(const CircuitParams& params);

/// Reconstructs the full trajectory generated by initial currents c through
/// the closed-form propagators; steps+1 grid nodes. The stationarity
/// constants are M x'(t1) (the defining integrals vanish at t1).
BvpSolution solution_from_initial_currents(const CircuitParams& params, const Vec& c,
                                           int steps);

/// Solves the boundary equation Phi(T) c = lambda - int Phi M^{-1} a for the
/// unique critical point. Throws when the circuit is resonant.
BvpSolution solve_critical_point(const CircuitParams& params, int steps);

/// Resonant-case analysis: least-squares particular solution, kernel basis,
/// and solvability of the boundary equation. The family is absent when the
/// right-hand side has a component outside the range of Phi(T).
std::pair<ResonanceReport, std::optional<ResonantFamily>> resonance_analysis(
    const CircuitParams& params, int steps = 512);

/// Evaluates the three stationarity expressions [M x'(t)]_k minus the
/// right-tail capacitor integrals on the grid; returns the maximal deviation
/// from their time means and the means themselves.
std::pair<double, Vec> stationarity_residual(const CircuitParams& params,
                                             const BvpSolution& solution);

}  // namespace varlc
