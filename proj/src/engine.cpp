#include "varlc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "varlc/eig.hpp"

namespace varlc {

namespace {

void check_grid(const ControlTrajectory& u) {
    if (u.times.size() < 2 || u.values.size() != u.times.size())
        throw std::invalid_argument("control grid needs >= 2 nodes and matching values");
    for (std::size_t i = 1; i < u.times.size(); ++i)
        if (!(u.times[i] > u.times[i - 1]))
            throw std::invalid_argument("control grid times must be strictly increasing");
}

void check_same_grid(const ControlTrajectory& a, const ControlTrajectory& b) {
    if (a.times.size() != b.times.size())
        throw std::invalid_argument("trajectories must share one grid");
    for (std::size_t i = 0; i < a.times.size(); ++i)
        if (std::abs(a.times[i] - b.times[i]) > 1e-12 * (1.0 + std::abs(a.times[i])))
            throw std::invalid_argument("trajectories must share one grid");
}

void check_pair(const OdeGrid& x, const ControlTrajectory& u) {
    if (x.times.size() != u.times.size())
        throw std::invalid_argument("state grid does not match control grid");
}

Vec midpoint_value(const Vec& a, const Vec& b) {
    Vec out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
    return out;
}

/// Cubic-accurate state at the interval midpoint from endpoint values and
/// slopes: (x_i + x_{i+1})/2 + h (f_i - f_{i+1})/8.
Vec hermite_midpoint(const Vec& xi, const Vec& xj, const Vec& fi, const Vec& fj,
                     double h) {
    Vec out(xi.size());
    for (std::size_t k = 0; k < xi.size(); ++k)
        out[k] = 0.5 * (xi[k] + xj[k]) + h / 8.0 * (fi[k] - fj[k]);
    return out;
}

void ensure_finite(const Vec& v, double t) {
    for (double s : v)
        if (!std::isfinite(s))
            throw std::runtime_error("state diverged (non-finite) at t = " +
                                     std::to_string(t));
}

double trapezoid(const Vec& times, const std::function<double(std::size_t)>& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        acc += 0.5 * (times[i + 1] - times[i]) * (f(i) + f(i + 1));
    return acc;
}

}  // namespace

Vec ControlTrajectory::at(double t) const {
    if (times.empty()) throw std::invalid_argument("empty control trajectory");
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[j - 1]) / (times[j] - times[j - 1]);
    Vec out(values[j].size());
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = (1.0 - w) * values[j - 1][k] + w * values[j][k];
    return out;
}

ControlTrajectory ControlTrajectory::constant(double t0, double t1, int steps,
                                              Vec value) {
    if (steps < 1 || !(t1 > t0))
        throw std::invalid_argument("ControlTrajectory::constant: bad grid request");
    ControlTrajectory u;
    u.times.resize(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i)
        u.times[static_cast<std::size_t>(i)] =
            (i == steps) ? t1 : t0 + (t1 - t0) * static_cast<double>(i) / steps;
    u.values.assign(u.times.size(), value);
    return u;
}

Matrix TransitionOperator::between(std::size_t i_s, std::size_t i_t) const {
    return X.at(i_s) * inverse(X.at(i_t));
}

OdeGrid simulate_state(const ControlSystem& sys, const ControlTrajectory& u,
                       const Vec& x0) {
    check_grid(u);
    if (static_cast<int>(x0.size()) != sys.n)
        throw std::invalid_argument("initial state dimension mismatch");
    OdeGrid grid;
    grid.times = u.times;
    grid.states.resize(u.times.size());
    grid.states[0] = x0;
    for (std::size_t i = 0; i + 1 < u.times.size(); ++i) {
        const double h = u.times[i + 1] - u.times[i];
        const Vec& um = midpoint_value(u.values[i], u.values[i + 1]);
        const Vec& x = grid.states[i];
        const Vec k1 = sys.f(x, u.values[i]);
        const Vec k2 = sys.f(x + 0.5 * h * k1, um);
        const Vec k3 = sys.f(x + 0.5 * h * k2, um);
        const Vec k4 = sys.f(x + h * k3, u.values[i + 1]);
        Vec next = x;
        for (std::size_t k = 0; k < next.size(); ++k)
            next[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        ensure_finite(next, u.times[i + 1]);
        grid.states[i + 1] = std::move(next);
    }
    return grid;
}

TransitionOperator transition_matrix(const ControlSystem& sys, const OdeGrid& x,
                                     const ControlTrajectory& u) {
    check_grid(u);
    check_pair(x, u);
    TransitionOperator op;
    op.times = u.times;
    op.X.resize(u.times.size());
    op.X[0] = Matrix::identity(static_cast<std::size_t>(sys.n));
    for (std::size_t i = 0; i + 1 < u.times.size(); ++i) {
        const double h = u.times[i + 1] - u.times[i];
        const Vec um = midpoint_value(u.values[i], u.values[i + 1]);
        const Vec fi = sys.f(x.states[i], u.values[i]);
        const Vec fj = sys.f(x.states[i + 1], u.values[i + 1]);
        const Vec xm = hermite_midpoint(x.states[i], x.states[i + 1], fi, fj, h);
        const Matrix a1 = sys.f_x(x.states[i], u.values[i]);
        const Matrix am = sys.f_x(xm, um);
        const Matrix a4 = sys.f_x(x.states[i + 1], u.values[i + 1]);
        const Matrix& Xi = op.X[i];
        const Matrix k1 = a1 * Xi;
        const Matrix k2 = am * (Xi + 0.5 * h * k1);
        const Matrix k3 = am * (Xi + 0.5 * h * k2);
        const Matrix k4 = a4 * (Xi + h * k3);
        op.X[i + 1] = Xi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!op.X[i + 1].all_finite())
            throw std::runtime_error("fundamental matrix diverged at t = " +
                                     std::to_string(u.times[i + 1]));
    }
    return op;
}

double lagrange_functional(const ControlSystem& sys, const ControlTrajectory& u,
                           const Vec& x0) {
    const OdeGrid x = simulate_state(sys, u, x0);
    return trapezoid(u.times, [&](std::size_t i) { return sys.L(x.states[i], u.values[i]); });
}

std::vector<Vec> backward_adjoint(
    const ControlSystem& sys, const OdeGrid& x, const ControlTrajectory& u,
    const std::function<Vec(double, const Vec&, const Vec&)>& source) {
    check_grid(u);
    check_pair(x, u);
    const std::size_t n = static_cast<std::size_t>(sys.n);
    const std::size_t last = u.times.size() - 1;

    std::vector<Vec> w(u.times.size());
    w[last] = Vec(n, 0.0);

    const auto rhs = [&](double t, const Vec& xs, const Vec& us, const Vec& ws) {
        const Matrix fx = sys.f_x(xs, us);
        const Vec src = source(t, xs, us);
        Vec out(n);
        for (std::size_t i = 0; i < n; ++i) {
            double acc = -src[i];
            for (std::size_t j = 0; j < n; ++j) acc -= fx(j, i) * ws[j];
            out[i] = acc;
        }
        return out;
    };

    for (std::size_t i = last; i-- > 0;) {
        const double h = u.times[i + 1] - u.times[i];  // step taken backward
        const double tm = 0.5 * (u.times[i] + u.times[i + 1]);
        const Vec um = midpoint_value(u.values[i], u.values[i + 1]);
        const Vec fi = sys.f(x.states[i], u.values[i]);
        const Vec fj = sys.f(x.states[i + 1], u.values[i + 1]);
        const Vec xm = hermite_midpoint(x.states[i], x.states[i + 1], fi, fj, h);

        const Vec& wj = w[i + 1];
        const Vec k1 = rhs(u.times[i + 1], x.states[i + 1], u.values[i + 1], wj);
        const Vec k2 = rhs(tm, xm, um, wj - 0.5 * h * k1);
        const Vec k3 = rhs(tm, xm, um, wj - 0.5 * h * k2);
        const Vec k4 = rhs(u.times[i], x.states[i], u.values[i], wj - h * k3);
        Vec wi = wj;
        for (std::size_t k = 0; k < n; ++k)
            wi[k] -= h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        ensure_finite(wi, u.times[i]);
        w[i] = std::move(wi);
    }
    return w;
}

double first_variation(const ControlSystem& sys, const ControlTrajectory& u,
                       const Vec& x0, const ControlTrajectory& h) {
    check_same_grid(u, h);
    const OdeGrid x = simulate_state(sys, u, x0);
    const std::vector<Vec> w = backward_adjoint(
        sys, x, u, [&](double, const Vec& xs, const Vec& us) { return sys.L_x(xs, us); });
    return trapezoid(u.times, [&](std::size_t i) {
        const Matrix fu = sys.f_u(x.states[i], u.values[i]);
        const Vec lu = sys.L_u(x.states[i], u.values[i]);
        double acc = 0.0;
        for (std::size_t c = 0; c < lu.size(); ++c) {
            double row = lu[c];
            for (std::size_t r = 0; r < w[i].size(); ++r) row += w[i][r] * fu(r, c);
            acc += row * h.values[i][c];
        }
        return acc;
    });
}

double first_variation_nested(const ControlSystem& sys, const ControlTrajectory& u,
                              const Vec& x0, const ControlTrajectory& h) {
    check_same_grid(u, h);
    const OdeGrid x = simulate_state(sys, u, x0);
    const TransitionOperator op = transition_matrix(sys, x, u);
    const std::size_t pts = u.times.size();

    std::vector<Matrix> Xinv(pts);
    for (std::size_t i = 0; i < pts; ++i) Xinv[i] = inverse(op.X[i]);
    std::vector<Vec> lx(pts);
    for (std::size_t i = 0; i < pts; ++i) lx[i] = sys.L_x(x.states[i], u.values[i]);

    const std::size_t n = static_cast<std::size_t>(sys.n);
    const auto inner = [&](std::size_t i) {
        // trapezoid over s in [t_i, t1] of L_x(s) X(s) X(t_i)^{-1}
        Vec acc(n, 0.0);
        for (std::size_t s = i; s + 1 < pts; ++s) {
            const double ds = u.times[s + 1] - u.times[s];
            for (std::size_t c = 0; c < n; ++c) {
                double a = 0.0, b = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    a += lx[s][r] * op.X[s](r, c);
                    b += lx[s + 1][r] * op.X[s + 1](r, c);
                }
                acc[c] += 0.5 * ds * (a + b);
            }
        }
        Vec row(n, 0.0);
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t r = 0; r < n; ++r) row[c] += acc[r] * Xinv[i](r, c);
        return row;
    };

    return trapezoid(u.times, [&](std::size_t i) {
        const Vec row = inner(i);
        const Matrix fu = sys.f_u(x.states[i], u.values[i]);
        const Vec lu = sys.L_u(x.states[i], u.values[i]);
        double acc = 0.0;
        for (std::size_t c = 0; c < lu.size(); ++c) {
            double v = lu[c];
            for (std::size_t r = 0; r < row.size(); ++r) v += row[r] * fu(r, c);
            acc += v * h.values[i][c];
        }
        return acc;
    });
}

std::vector<Vec> el_residual(const ControlSystem& sys, const ControlTrajectory& u,
                             const Vec& x0, const Vec& mu) {
    check_grid(u);
    const bool unconstrained = std::holds_alternative<std::monostate>(sys.constraint);
    if (unconstrained && !mu.empty())
        throw std::invalid_argument("el_residual: mu must be empty for unconstrained systems");
    if (!unconstrained && static_cast<int>(mu.size()) != sys.l)
        throw std::invalid_argument("el_residual: mu dimension must equal the constraint dimension");

    const OdeGrid x = simulate_state(sys, u, x0);

    std::function<Vec(double, const Vec&, const Vec&)> source =
        [&](double, const Vec& xs, const Vec& us) { return sys.L_x(xs, us); };
    if (const auto* gc = std::get_if<GeneralConstraint>(&sys.constraint)) {
        source = [&, gc](double, const Vec& xs, const Vec& us) {
            Vec src = sys.L_x(xs, us);
            const Matrix gx = gc->g_x(xs, us);
            for (std::size_t c = 0; c < src.size(); ++c)
                for (std::size_t r = 0; r < mu.size(); ++r) src[c] -= mu[r] * gx(r, c);
            return src;
        };
    }
    const std::vector<Vec> w = backward_adjoint(sys, x, u, source);

    std::vector<Vec> res(u.times.size());
    for (std::size_t i = 0; i < u.times.size(); ++i) {
        const Matrix fu = sys.f_u(x.states[i], u.values[i]);
        Vec r = sys.L_u(x.states[i], u.values[i]);
        for (std::size_t c = 0; c < r.size(); ++c)
            for (std::size_t k = 0; k < w[i].size(); ++k) r[c] += w[i][k] * fu(k, c);
        if (const auto* lc = std::get_if<LinearConstraint>(&sys.constraint)) {
            for (std::size_t c = 0; c < r.size(); ++c)
                for (std::size_t k = 0; k < mu.size(); ++k) r[c] -= mu[k] * lc->B(k, c);
        } else if (const auto* gc = std::get_if<GeneralConstraint>(&sys.constraint)) {
            const Matrix gu = gc->g_u(x.states[i], u.values[i]);
            for (std::size_t c = 0; c < r.size(); ++c)
                for (std::size_t k = 0; k < mu.size(); ++k) r[c] -= mu[k] * gu(k, c);
        }
        res[i] = std::move(r);
    }
    return res;
}

Vec constraint_residual(const ControlSystem& sys, const ControlTrajectory& u,
                        const Vec& x0) {
    check_grid(u);
    if (std::holds_alternative<std::monostate>(sys.constraint))
        throw std::invalid_argument("constraint_residual: system has no constraint");
    const std::size_t l = static_cast<std::size_t>(sys.l);
    Vec acc(l, 0.0);

    std::function<Vec(std::size_t, const OdeGrid*)> node_value;
    const OdeGrid* xptr = nullptr;
    OdeGrid x;
    if (const auto* gc = std::get_if<GeneralConstraint>(&sys.constraint)) {
        x = simulate_state(sys, u, x0);
        xptr = &x;
        node_value = [&, gc](std::size_t i, const OdeGrid* xs) {
            return gc->g(xs->states[i], u.values[i]);
        };
    } else {
        const auto& lc = std::get<LinearConstraint>(sys.constraint);
        node_value = [&](std::size_t i, const OdeGrid*) {
            Vec v = lc.alpha;
            for (std::size_t r = 0; r < l; ++r)
                for (std::size_t c = 0; c < u.values[i].size(); ++c)
                    v[r] += lc.B(r, c) * u.values[i][c];
            return v;
        };
    }
    for (std::size_t i = 0; i + 1 < u.times.size(); ++i) {
        const double dt = u.times[i + 1] - u.times[i];
        const Vec a = node_value(i, xptr);
        const Vec b = node_value(i + 1, xptr);
        for (std::size_t r = 0; r < l; ++r) acc[r] += 0.5 * dt * (a[r] + b[r]);
    }
    return acc;
}

ControlTrajectory project_allowed_variation(const Matrix& B, const ControlTrajectory& h) {
    check_grid(h);
    const std::size_t l = B.rows(), m = B.cols();
    Vec r(l, 0.0);
    for (std::size_t i = 0; i + 1 < h.times.size(); ++i) {
        const double dt = h.times[i + 1] - h.times[i];
        for (std::size_t a = 0; a < l; ++a) {
            double va = 0.0, vb = 0.0;
            for (std::size_t c = 0; c < m; ++c) {
                va += B(a, c) * h.values[i][c];
                vb += B(a, c) * h.values[i + 1][c];
            }
            r[a] += 0.5 * dt * (va + vb);
        }
    }

    // delta solves (B B^T) delta = r on the range of B (pseudo-inverse via
    // eigendecomposition; r lies in range(B) by construction).
    const Matrix gram = B * B.transposed();
    const EigenDecomposition ed = sym_eig(gram);
    double eig_max = 0.0;
    for (double v : ed.values) eig_max = std::max(eig_max, std::abs(v));
    const double cutoff = 1e-14 * std::max(eig_max, 1e-300);
    Vec delta(l, 0.0);
    for (std::size_t j = 0; j < l; ++j) {
        if (ed.values[j] <= cutoff) continue;
        double coef = 0.0;
        for (std::size_t i = 0; i < l; ++i) coef += ed.vectors(i, j) * r[i];
        coef /= ed.values[j];
        for (std::size_t i = 0; i < l; ++i) delta[i] += coef * ed.vectors(i, j);
    }

    const double span = h.times.back() - h.times.front();
    Vec shift(m, 0.0);
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t a = 0; a < l; ++a) shift[c] += B(a, c) * delta[a] / span;

    ControlTrajectory out = h;
    for (auto& v : out.values)
        for (std::size_t c = 0; c < m; ++c) v[c] -= shift[c];
    return out;
}

}  // namespace varlc
