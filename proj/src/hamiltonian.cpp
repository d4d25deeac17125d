#include "varlc/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <variant>

#include "varlc/eig.hpp"

namespace varlc {

namespace {

constexpr int kMaxNewtonIters = 50;
constexpr int kMaxDampings = 9;

/// Shared state of the closed-form Legendre callbacks.
struct LegendreCore {
    Matrix a_t;                   // m x n
    std::optional<Matrix> b_t;    // m x l
    Matrix r_inv;                 // m x m

    [[nodiscard]] Vec lifted(const Vec& p, const Vec& mu) const {
        Vec z = a_t * p;
        if (!mu.empty()) {
            if (!b_t)
                throw std::invalid_argument(
                    "hamiltonian feedback: multipliers given but the problem is unconstrained");
            z = z + (*b_t) * mu;
        }
        return z;
    }
};

Vec regime_feedback_mu(CostateRegime regime, const Vec& mu) {
    return regime == CostateRegime::General ? mu : Vec{};
}

Vec expected_terminal(CostateRegime regime, const Vec& mu, const Matrix* q, std::size_t n) {
    if (regime == CostateRegime::SpecialQ) return q->transposed() * mu;
    return Vec(n, 0.0);
}

/// Midpoint-difference defect of x' = dH/dp, p' = -dH/dx along a pair.
double canonical_defect(const HamiltonianSpec& ham, const OdeGrid& x,
                        const CostateTrajectory& p, const Vec& mu_h) {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double h = x.times[i + 1] - x.times[i];
        const Vec xm = 0.5 * (x.states[i] + x.states[i + 1]);
        const Vec pm = 0.5 * (p.values[i] + p.values[i + 1]);
        const Vec gp = ham.grad_p(xm, pm, mu_h);
        const Vec gx = ham.grad_x(xm, pm, mu_h);
        for (std::size_t k = 0; k < xm.size(); ++k) {
            worst = std::max(worst,
                             std::abs((x.states[i + 1][k] - x.states[i][k]) / h - gp[k]));
            worst = std::max(worst,
                             std::abs((p.values[i + 1][k] - p.values[i][k]) / h + gx[k]));
        }
    }
    return worst;
}

double max_node_norm(const std::vector<Vec>& rows) {
    double worst = 0.0;
    for (const Vec& r : rows) worst = std::max(worst, norm_inf(r));
    return worst;
}

}  // namespace

HamiltonianSpec legendre_transform(const QuadraticLagrangianSystem& sys, const Vec& mu) {
    const std::size_t n = sys.n();
    const std::size_t m = sys.m();
    if (n == 0 || m == 0)
        throw std::invalid_argument("legendre_transform: empty dynamics matrix");
    if (sys.R.rows() != m || sys.R.cols() != m)
        throw std::invalid_argument("legendre_transform: control cost shape mismatch");
    if (!sys.V || !sys.gradV)
        throw std::invalid_argument("legendre_transform: potential callbacks not set");
    if (asymmetry(sys.R) > 1e-10 * std::max(1.0, inf_norm(sys.R)))
        throw std::domain_error("legendre_transform: control cost matrix is not symmetric");
    const EigenDecomposition ed = sym_eig(sys.R);
    if (ed.values.front() <= 1e-14 * std::max(1.0, ed.values.back()))
        throw std::domain_error("legendre_transform: control cost matrix is not positive definite");
    if (!mu.empty()) {
        if (!sys.B)
            throw std::invalid_argument(
                "legendre_transform: multipliers given but no constraint matrix");
        if (sys.B->rows() != mu.size() || sys.B->cols() != m)
            throw std::invalid_argument("legendre_transform: constraint shape mismatch");
    }

    LegendreCore core{sys.A.transposed(),
                      sys.B ? std::optional<Matrix>(sys.B->transposed()) : std::nullopt,
                      inverse(sys.R)};
    const Matrix a = sys.A;
    const auto potential = sys.V;
    const auto grad_potential = sys.gradV;

    HamiltonianSpec spec;
    spec.n = n;
    spec.m = m;
    spec.l = sys.l();
    spec.t0 = sys.t0;
    spec.t1 = sys.t1;
    spec.phi = [core](const Vec&, const Vec& p, const Vec& mu_c) {
        return core.r_inv * core.lifted(p, mu_c);
    };
    spec.value = [core, potential](const Vec& x, const Vec& p, const Vec& mu_c) {
        const Vec z = core.lifted(p, mu_c);
        return 0.5 * dot(z, core.r_inv * z) + potential(x);
    };
    spec.grad_x = [grad_potential](const Vec& x, const Vec&, const Vec&) {
        return grad_potential(x);
    };
    spec.grad_p = [core, a](const Vec&, const Vec& p, const Vec& mu_c) {
        return a * (core.r_inv * core.lifted(p, mu_c));
    };
    return spec;
}

double pseudo_hamiltonian(const QuadraticLagrangianSystem& sys, const Vec& x, const Vec& p,
                          const Vec& u, const Vec& mu) {
    const Vec velocity = sys.A * u;
    double val = dot(p, velocity) - (0.5 * dot(u, sys.R * u) - sys.V(x));
    if (!mu.empty()) {
        if (!sys.B || !sys.alpha)
            throw std::invalid_argument("pseudo_hamiltonian: multipliers given but no constraint");
        const Vec g = (*sys.B) * u + *sys.alpha;
        val += dot(mu, g);
    }
    return val;
}

CostateTrajectory costate_from_lagrangian(const ControlSystem& sys, const OdeGrid& x,
                                          const ControlTrajectory& u, const Vec& mu,
                                          CostateRegime regime, const Matrix* q) {
    if (x.size() == 0)
        throw std::invalid_argument("costate_from_lagrangian: empty trajectory");
    const std::size_t n = x.states.front().size();
    if (regime == CostateRegime::Unconstrained) {
        if (!mu.empty())
            throw std::invalid_argument(
                "costate_from_lagrangian: unconstrained regime takes no multipliers");
    } else {
        if (mu.empty())
            throw std::invalid_argument(
                "costate_from_lagrangian: constrained regime needs multipliers");
        if (std::holds_alternative<std::monostate>(sys.constraint))
            throw std::invalid_argument("costate_from_lagrangian: system carries no constraint");
    }
    if (regime == CostateRegime::SpecialQ) {
        if (!q)
            throw std::invalid_argument("costate_from_lagrangian: SpecialQ regime needs Q");
        if (q->rows() != mu.size() || q->cols() != n)
            throw std::invalid_argument("costate_from_lagrangian: Q shape mismatch");
    } else if (q) {
        throw std::invalid_argument(
            "costate_from_lagrangian: Q only applies to the SpecialQ regime");
    }

    // Adjoint source dL/dx - mu^T dg/dx; the correction term only exists for
    // state-dependent constraint integrands.
    std::function<Vec(double, const Vec&, const Vec&)> source;
    const auto* general = std::get_if<GeneralConstraint>(&sys.constraint);
    if (regime != CostateRegime::Unconstrained && general != nullptr) {
        const GeneralConstraint gc = *general;
        const Vec mu_copy = mu;
        source = [gc, mu_copy, &sys](double, const Vec& xs, const Vec& us) {
            const Vec correction = gc.g_x(xs, us).transposed() * mu_copy;
            return sys.L_x(xs, us) - correction;
        };
    } else {
        source = [&sys](double, const Vec& xs, const Vec& us) { return sys.L_x(xs, us); };
    }

    const std::vector<Vec> w = backward_adjoint(sys, x, u, source);

    Vec shift;
    if (regime == CostateRegime::SpecialQ) shift = q->transposed() * mu;

    CostateTrajectory out;
    out.times = x.times;
    out.values.resize(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        Vec pi(n);
        for (std::size_t k = 0; k < n; ++k)
            pi[k] = -w[i][k] + (shift.empty() ? 0.0 : shift[k]);
        out.values[i] = std::move(pi);
    }
    return out;
}

CanonicalSolution integrate_canonical(const HamiltonianSpec& ham, const Vec& x0,
                                      const Vec& terminal_p, const Vec& mu, std::size_t steps,
                                      double tol) {
    const std::size_t n = x0.size();
    if (n == 0 || terminal_p.size() != n)
        throw std::invalid_argument("integrate_canonical: state/costate dimension mismatch");
    if (!ham.grad_x || !ham.grad_p)
        throw std::invalid_argument("integrate_canonical: gradient callbacks not set");
    if (steps == 0)
        throw std::invalid_argument("integrate_canonical: steps must be positive");
    if (!(ham.t1 > ham.t0))
        throw std::invalid_argument("integrate_canonical: empty time interval");

    const auto offset = static_cast<std::ptrdiff_t>(n);
    const OdeField field = [&ham, &mu, n, offset](double, const Vec& z) {
        const Vec xs(z.begin(), z.begin() + offset);
        const Vec ps(z.begin() + offset, z.end());
        const Vec gp = ham.grad_p(xs, ps, mu);
        const Vec gx = ham.grad_x(xs, ps, mu);
        Vec dz(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            dz[i] = gp[i];
            dz[n + i] = -gx[i];
        }
        return dz;
    };

    auto shoot = [&](const Vec& p_start, OdeGrid& joint, Vec& defect) -> double {
        Vec z0(2 * n);
        std::copy(x0.begin(), x0.end(), z0.begin());
        std::copy(p_start.begin(), p_start.end(), z0.begin() + offset);
        try {
            joint = integrate_ode(field, std::move(z0), ham.t0, ham.t1, steps);
        } catch (const std::runtime_error&) {
            defect.assign(n, std::numeric_limits<double>::infinity());
            return std::numeric_limits<double>::infinity();
        }
        const Vec& last = joint.states.back();
        defect.resize(n);
        for (std::size_t i = 0; i < n; ++i) defect[i] = last[n + i] - terminal_p[i];
        return norm_inf(defect);
    };

    Vec p0(n, 0.0);
    OdeGrid joint;
    Vec defect;
    double dnorm = shoot(p0, joint, defect);
    const double target = tol * (1.0 + norm_inf(terminal_p));

    int iter = 0;
    while (!(dnorm <= target) && iter < kMaxNewtonIters) {
        ++iter;
        Matrix jac(n, n);
        bool jac_ok = true;
        for (std::size_t j = 0; j < n && jac_ok; ++j) {
            const double eps = 1e-6 * std::max(1.0, std::abs(p0[j]));
            Vec probe = p0;
            probe[j] += eps;
            OdeGrid gj;
            Vec dj;
            if (!std::isfinite(shoot(probe, gj, dj))) {
                jac_ok = false;
                break;
            }
            for (std::size_t i = 0; i < n; ++i) jac(i, j) = (dj[i] - defect[i]) / eps;
        }
        if (!jac_ok) break;

        Vec step;
        try {
            Vec rhs = defect;
            for (auto& v : rhs) v = -v;
            step = solve(jac, rhs);
        } catch (const std::exception&) {
            break;  // singular shooting Jacobian; reported below
        }

        double scale = 1.0;
        bool accepted = false;
        for (int k = 0; k < kMaxDampings; ++k) {
            Vec cand = p0;
            axpy(scale, step, cand);
            OdeGrid gc;
            Vec dc;
            const double nc = shoot(cand, gc, dc);
            if (nc < dnorm) {
                p0 = std::move(cand);
                joint = std::move(gc);
                defect = std::move(dc);
                dnorm = nc;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) break;
    }

    if (!(dnorm <= target)) {
        std::ostringstream msg;
        msg << "integrate_canonical: shooting did not converge; terminal defect " << dnorm
            << " after " << iter << " iterations (target " << target << ")";
        throw std::runtime_error(msg.str());
    }

    CanonicalSolution sol;
    sol.initial_costate = std::move(p0);
    sol.iterations = iter;
    sol.terminal_defect = dnorm;
    sol.x.times = joint.times;
    sol.p.times = joint.times;
    sol.x.states.resize(joint.size());
    sol.p.values.resize(joint.size());
    for (std::size_t i = 0; i < joint.size(); ++i) {
        const Vec& z = joint.states[i];
        sol.x.states[i] = Vec(z.begin(), z.begin() + offset);
        sol.p.values[i] = Vec(z.begin() + offset, z.end());
    }
    return sol;
}

ConstrainedCanonicalSolution solve_constrained_canonical(const QuadraticLagrangianSystem& sys,
                                                         const Vec& x0, std::size_t steps,
                                                         CostateRegime regime, const Matrix* q,
                                                         double tol) {
    if (!sys.B || !sys.alpha)
        throw std::invalid_argument("solve_constrained_canonical: system carries no constraint");
    if (regime == CostateRegime::Unconstrained)
        throw std::invalid_argument(
            "solve_constrained_canonical: nothing to solve without multipliers");
    const std::size_t n = sys.n();
    const std::size_t l = sys.B->rows();
    if (x0.size() != n)
        throw std::invalid_argument("solve_constrained_canonical: x0 dimension mismatch");

    Matrix q_t;  // n x l, SpecialQ only
    if (regime == CostateRegime::SpecialQ) {
        if (!q)
            throw std::invalid_argument("solve_constrained_canonical: SpecialQ regime needs Q");
        if (q->rows() != l || q->cols() != n)
            throw std::invalid_argument("solve_constrained_canonical: Q shape mismatch");
        // The terminal-shift description needs the constraint integrand to
        // factor through the dynamics: B = Q A.
        Matrix residual = *sys.B;
        residual -= (*q) * sys.A;
        if (inf_norm(residual) > 1e-10 * std::max(1.0, inf_norm(*sys.B)))
            throw std::domain_error(
                "solve_constrained_canonical: B != Q A, terminal-shift regime inapplicable");
        q_t = q->transposed();
    } else if (q) {
        throw std::invalid_argument(
            "solve_constrained_canonical: Q only applies to the SpecialQ regime");
    }

    const HamiltonianSpec ham = legendre_transform(sys, Vec(l, 0.0));
    const double inner_tol = std::max(0.1 * tol, 1e-13);

    auto inner = [&](const Vec& mu) -> CanonicalSolution {
        if (regime == CostateRegime::General)
            return integrate_canonical(ham, x0, Vec(n, 0.0), mu, steps, inner_tol);
        return integrate_canonical(ham, x0, q_t * mu, Vec{}, steps, inner_tol);
    };

    const Matrix b = *sys.B;
    const Vec alpha = *sys.alpha;
    auto constraint_value = [&](const CanonicalSolution& sol, const Vec& mu) -> Vec {
        const Vec mu_h = regime_feedback_mu(regime, mu);
        Vec acc(l, 0.0);
        Vec prev;
        for (std::size_t i = 0; i < sol.x.size(); ++i) {
            const Vec u = ham.phi(sol.x.states[i], sol.p.values[i], mu_h);
            Vec gi = b * u + alpha;
            if (i > 0) {
                const double h = sol.x.times[i] - sol.x.times[i - 1];
                for (std::size_t k = 0; k < l; ++k) acc[k] += 0.5 * h * (prev[k] + gi[k]);
            }
            prev = std::move(gi);
        }
        return acc;
    };

    Vec mu(l, 0.0);
    CanonicalSolution sol = inner(mu);
    Vec cres = constraint_value(sol, mu);
    double cnorm = norm_inf(cres);
    const double target = tol * (1.0 + (sys.t1 - sys.t0) * norm_inf(alpha));

    int outer = 0;
    while (!(cnorm <= target) && outer < kMaxNewtonIters) {
        ++outer;
        Matrix jac(l, l);
        for (std::size_t j = 0; j < l; ++j) {
            const double eps = 1e-6 * std::max(1.0, std::abs(mu[j]));
            Vec probe = mu;
            probe[j] += eps;
            const CanonicalSolution sj = inner(probe);
            const Vec cj = constraint_value(sj, probe);
            for (std::size_t i = 0; i < l; ++i) jac(i, j) = (cj[i] - cres[i]) / eps;
        }
        Vec step;
        try {
            Vec rhs = cres;
            for (auto& v : rhs) v = -v;
            step = solve(jac, rhs);
        } catch (const std::exception&) {
            break;
        }

        double scale = 1.0;
        bool accepted = false;
        for (int k = 0; k < kMaxDampings; ++k) {
            Vec cand = mu;
            axpy(scale, step, cand);
            bool ok = true;
            CanonicalSolution sc;
            Vec cc;
            double nn = std::numeric_limits<double>::infinity();
            try {
                sc = inner(cand);
                cc = constraint_value(sc, cand);
                nn = norm_inf(cc);
            } catch (const std::runtime_error&) {
                ok = false;
            }
            if (ok && nn < cnorm) {
                mu = std::move(cand);
                sol = std::move(sc);
                cres = std::move(cc);
                cnorm = nn;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted) break;
    }

    if (!(cnorm <= target)) {
        std::ostringstream msg;
        msg << "solve_constrained_canonical: multiplier iteration did not converge; "
            << "constraint residual " << cnorm << " (target " << target << ")";
        throw std::runtime_error(msg.str());
    }

    ConstrainedCanonicalSolution out;
    out.mu = std::move(mu);
    out.canonical = std::move(sol);
    out.outer_iterations = outer;
    out.constraint_residual = cnorm;
    return out;
}

EquivalenceReport verify_equivalence(const ControlSystem& sys, const HamiltonianSpec& ham,
                                     const OdeGrid& x, const ControlTrajectory& u, const Vec& mu,
                                     CostateRegime regime, const Matrix* q) {
    EquivalenceReport rep;
    rep.direction = EquivalenceDirection::LagrangianToHamiltonian;
    const CostateTrajectory p = costate_from_lagrangian(sys, x, u, mu, regime, q);
    const Vec mu_h = regime_feedback_mu(regime, mu);
    rep.canonical_residual = canonical_defect(ham, x, p, mu_h);
    rep.euler_lagrange_residual = max_node_norm(el_residual(sys, u, x.states.front(), mu));
    const Vec expect = expected_terminal(regime, mu, q, x.states.front().size());
    rep.terminal_costate_error = norm_inf(p.values.back() - expect);
    return rep;
}

EquivalenceReport verify_equivalence(const ControlSystem& sys, const HamiltonianSpec& ham,
                                     const OdeGrid& x, const CostateTrajectory& p, const Vec& mu,
                                     CostateRegime regime, const Matrix* q) {
    if (x.size() == 0 || x.size() != p.size())
        throw std::invalid_argument("verify_equivalence: mismatched canonical pair");
    if (regime == CostateRegime::SpecialQ && !q)
        throw std::invalid_argument("verify_equivalence: SpecialQ regime needs Q");
    EquivalenceReport rep;
    rep.direction = EquivalenceDirection::HamiltonianToLagrangian;
    const Vec mu_h = regime_feedback_mu(regime, mu);

    ControlTrajectory u;
    u.times = x.times;
    u.values.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        u.values[i] = ham.phi(x.states[i], p.values[i], mu_h);

    rep.canonical_residual = canonical_defect(ham, x, p, mu_h);
    rep.euler_lagrange_residual = max_node_norm(el_residual(sys, u, x.states.front(), mu));
    const Vec expect = expected_terminal(regime, mu, q, x.states.front().size());
    rep.terminal_costate_error = norm_inf(p.values.back() - expect);
    return rep;
}

std::size_t numerical_rank(const Matrix& x, double rel_tol) {
    if (x.rows() == 0 || x.cols() == 0) return 0;
    const Matrix xt = x.transposed();
    const Matrix gram = (x.rows() >= x.cols()) ? xt * x : x * xt;
    const EigenDecomposition ed = sym_eig(gram);
    const double top = ed.values.back();
    if (!(top > 0.0)) return 0;
    // Gram eigenvalues are squared singular values. The Jacobi sweep leaves
    // residue ~eps*top on a structurally zero eigenvalue, so the cut is
    // floored above that noise even when rel_tol^2 would dip below it.
    const double noise_floor = 64.0 * std::numeric_limits<double>::epsilon() * top;
    const double cut = std::max(rel_tol * rel_tol * top, noise_floor);
    std::size_t rank = 0;
    for (double v : ed.values)
        if (v > cut) ++rank;
    return rank;
}

bool rank_condition(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols())
        throw std::invalid_argument("rank_condition: column counts differ");
    Matrix stacked(a.rows() + b.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) stacked(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) stacked(a.rows() + i, j) = b(i, j);
    return numerical_rank(a) == numerical_rank(stacked);
}

double energy_drift(const HamiltonianSpec& ham, const OdeGrid& x, const CostateTrajectory& p,
                    const Vec& mu) {
    if (x.size() == 0 || x.size() != p.size())
        throw std::invalid_argument("energy_drift: mismatched canonical pair");
    const double h0 = ham.value(x.states.front(), p.values.front(), mu);
    double drift = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i)
        drift = std::max(drift, std::abs(ham.value(x.states[i], p.values[i], mu) - h0));
    return drift;
}

}  // namespace varlc
