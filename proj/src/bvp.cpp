#include "varlc/bvp.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "varlc/eig.hpp"

namespace varlc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kResonanceTol = 1e-9;
constexpr double kNearResonanceTol = 1e-6;

struct Workspace {
    CircuitMatrices cm;
    PropagatorPair pp;
    Vec minv_a;   // M^{-1} a
    Vec lambda;   // prescribed transfers
    double T;
};

Workspace make_workspace(const CircuitParams& p) {
    Workspace w;
    w.cm = build_matrices(p);
    w.pp = propagators(w.cm);
    w.minv_a = solve(w.cm.M, w.cm.a);
    w.lambda = {p.lambda3, p.lambda5, p.lambda6};
    w.T = p.horizon();
    return w;
}

Vec boundary_rhs(const Workspace& w) {
    return w.lambda - w.pp.phi_integral(w.T) * w.minv_a;
}

struct BoundaryStructure {
    Matrix phiT;
    Matrix kernel;        // columns
    Vec least_squares_c;  // minimal-norm solution of phiT c ~ rhs
    double residual_norm; // || phiT c - rhs ||_inf
};

BoundaryStructure analyse_boundary(const Workspace& w) {
    BoundaryStructure bs;
    bs.phiT = w.pp.phi(w.T);
    const Matrix gram = bs.phiT.transposed() * bs.phiT;
    const EigenDecomposition ed = sym_eig(gram);
    const double eig_max = std::max({ed.values[0], ed.values[1], ed.values[2], 0.0});
    const double cutoff = 1e-14 * std::max(eig_max, 1e-300);

    const Vec rhs = boundary_rhs(w);
    const Vec proj = bs.phiT.transposed() * rhs;
    Vec c(3, 0.0);
    std::size_t kernel_dim = 0;
    for (std::size_t j = 0; j < 3; ++j)
        if (ed.values[j] <= cutoff) ++kernel_dim;
    bs.kernel = Matrix(3, kernel_dim);
    std::size_t kcol = 0;
    for (std::size_t j = 0; j < 3; ++j) {
        if (ed.values[j] <= cutoff) {
            for (std::size_t i = 0; i < 3; ++i) bs.kernel(i, kcol) = ed.vectors(i, j);
            ++kcol;
            continue;
        }
        double coef = 0.0;
        for (std::size_t i = 0; i < 3; ++i) coef += ed.vectors(i, j) * proj[i];
        coef /= ed.values[j];
        for (std::size_t i = 0; i < 3; ++i) c[i] += coef * ed.vectors(i, j);
    }
    bs.least_squares_c = c;
    bs.residual_norm = norm_inf(bs.phiT * c - rhs);
    return bs;
}

}  // namespace

ResonanceReport uniqueness_check(const CircuitParams& p) {
    const Workspace w = make_workspace(p);
    ResonanceReport rep;
    const double hs[2] = {w.cm.h1, w.cm.h2};
    for (int i = 0; i < 2; ++i) {
        const double z = w.T * std::sqrt(hs[i]) / kPi;
        const double k = std::round(z);
        if (k < 1.0) continue;
        const double dev = std::abs(z - k) / std::max(1.0, z);
        if (dev <= kResonanceTol) {
            rep.resonant = true;
            rep.resonant_modes.emplace_back(i + 1, static_cast<int>(k));
        } else if (dev <= kNearResonanceTol) {
            rep.near_resonance_warning = true;
        }
    }
    if (!rep.resonant) return rep;

    const BoundaryStructure bs = analyse_boundary(w);
    rep.family_dimension = static_cast<int>(bs.kernel.cols());
    rep.solvable =
        bs.residual_norm <= 1e-8 * (1.0 + norm_inf(boundary_rhs(w)));
    return rep;
}

BvpSolution solution_from_initial_currents(const CircuitParams& p, const Vec& c,
                                           int steps) {
    if (steps < 1) throw std::invalid_argument("solution_from_initial_currents: steps >= 1");
    if (c.size() != 3) throw std::invalid_argument("initial currents must be a 3-vector");
    const Workspace w = make_workspace(p);

    BvpSolution sol;
    sol.c = c;
    sol.grid.times.resize(static_cast<std::size_t>(steps) + 1);
    sol.grid.states.resize(static_cast<std::size_t>(steps) + 1);
    sol.currents.resize(static_cast<std::size_t>(steps) + 1);
    for (int j = 0; j <= steps; ++j) {
        const double tau = (j == steps) ? w.T : w.T * static_cast<double>(j) / steps;
        const Vec x = w.pp.phi(tau) * c + w.pp.phi_integral(tau) * w.minv_a;
        const Vec xp = w.pp.psi(tau) * c + w.pp.phi(tau) * w.minv_a;
        auto& st = sol.grid.states[static_cast<std::size_t>(j)];
        st = {x[0], x[1], x[2], xp[0], xp[1], xp[2]};
        sol.grid.times[static_cast<std::size_t>(j)] = p.t0 + tau;
        sol.currents[static_cast<std::size_t>(j)] = {xp[0], xp[1], xp[2]};
    }
    const auto& last = sol.grid.states.back();
    sol.stationarity_constants = w.cm.M * Vec{last[3], last[4], last[5]};
    return sol;
}

BvpSolution solve_critical_point(const CircuitParams& p, int steps) {
    const ResonanceReport rep = uniqueness_check(p);
    if (rep.resonant)
        throw std::runtime_error(
            "solve_critical_point: circuit is resonant (boundary operator singular); "
            "use resonance_analysis");
    const Workspace w = make_workspace(p);
    const Vec c = solve(w.pp.phi(w.T), boundary_rhs(w));
    return solution_from_initial_currents(p, c, steps);
}

std::pair<ResonanceReport, std::optional<ResonantFamily>> resonance_analysis(
    const CircuitParams& p, int steps) {
    ResonanceReport rep = uniqueness_check(p);
    if (!rep.resonant) return {rep, std::nullopt};

    const Workspace w = make_workspace(p);
    const BoundaryStructure bs = analyse_boundary(w);
    rep.family_dimension = static_cast<int>(bs.kernel.cols());
    rep.solvable = bs.residual_norm <= 1e-8 * (1.0 + norm_inf(boundary_rhs(w)));
    if (!rep.solvable) return {rep, std::nullopt};

    ResonantFamily family;
    family.particular = solution_from_initial_currents(p, bs.least_squares_c, steps);
    family.kernel_basis = bs.kernel;
    return {rep, std::move(family)};
}

std::pair<double, Vec> stationarity_residual(const CircuitParams& p,
                                             const BvpSolution& sol) {
    const std::size_t pts = sol.grid.size();
    if (pts < 2 || sol.grid.states.empty() || sol.grid.states[0].size() != 6)
        throw std::invalid_argument("stationarity_residual: malformed solution grid");
    const Workspace w = make_workspace(p);

    // Capacitor voltage channels on the grid.
    std::vector<std::array<double, 3>> g(pts);
    for (std::size_t j = 0; j < pts; ++j) {
        const auto& st = sol.grid.states[j];
        const double q1 = p.q1_0 + st[0];
        const double q2 = p.q2_0 + st[1] + st[2];
        g[j] = {q1 / p.C1, q2 / p.C2, q2 / p.C2};
    }

    // Right-tail trapezoid integrals int_t^{t1} g ds.
    std::vector<std::array<double, 3>> tail(pts, {0.0, 0.0, 0.0});
    for (std::size_t j = pts - 1; j-- > 0;) {
        const double dt = sol.grid.times[j + 1] - sol.grid.times[j];
        for (int k = 0; k < 3; ++k)
            tail[j][k] = tail[j + 1][k] + 0.5 * dt * (g[j][k] + g[j + 1][k]);
    }

    std::vector<std::array<double, 3>> E(pts);
    for (std::size_t j = 0; j < pts; ++j) {
        const auto& st = sol.grid.states[j];
        const Vec mu = w.cm.M * Vec{st[3], st[4], st[5]};
        for (int k = 0; k < 3; ++k) E[j][k] = mu[static_cast<std::size_t>(k)] - tail[j][k];
    }

    // Trapezoid time means, then the largest pointwise deviation.
    Vec mean(3, 0.0);
    const double T = sol.grid.times.back() - sol.grid.times.front();
    for (std::size_t j = 0; j + 1 < pts; ++j) {
        const double dt = sol.grid.times[j + 1] - sol.grid.times[j];
        for (int k = 0; k < 3; ++k)
            mean[static_cast<std::size_t>(k)] += 0.5 * dt * (E[j][k] + E[j + 1][k]);
    }
    for (auto& m : mean) m /= T;

    double dev = 0.0;
    for (std::size_t j = 0; j < pts; ++j)
        for (int k = 0; k < 3; ++k)
            dev = std::max(dev, std::abs(E[j][k] - mean[static_cast<std::size_t>(k)]));
    return {dev, mean};
}

}  // namespace varlc
