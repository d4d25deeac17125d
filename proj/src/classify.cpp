#include "varlc/classify.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "varlc/eig.hpp"
#include "varlc/kernels.hpp"
#include "varlc/series.hpp"

namespace varlc {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::array<double, 4> kRaySteps{1.0, 10.0, 100.0, 1000.0};

bool equal_capacitance(const CircuitParams& p) {
    return std::abs(p.C1 - p.C2) <= 1e-12 * std::max(p.C1, p.C2);
}

double definiteness_tol(const Matrix& s) {
    return 1e-8 * std::max(1.0, inf_norm(s));
}

void normalize_coefficients(Matrix& b) {
    const double nrm =
        std::sqrt(kernels::sum_squares(b.data().data(), b.data().size()));
    if (nrm > 0.0) b *= 1.0 / nrm;
}

FourierCurrents sine_direction(const CircuitParams& p, const Matrix& coeffs) {
    FourierCurrents fc = FourierCurrents::zero(p.horizon(), p.t0,
                                               static_cast<int>(coeffs.cols()));
    fc.b = coeffs;
    normalize_coefficients(fc.b);
    return fc;
}

/// Sine coefficients n / (K n^2 - shift) for n = 1..N; the equality-attaining
/// shape of the weighted coefficient inequality for the given channel.
Vec channel_profile(double K, double shift, int N) {
    Vec w(static_cast<std::size_t>(N));
    for (int n = 1; n <= N; ++n) {
        const double nn = static_cast<double>(n);
        w[static_cast<std::size_t>(n - 1)] = nn / (K * nn * nn - shift);
    }
    return w;
}

/// Action values along lambda-mean + h * direction for the four ray steps.
Vec ray_values(const CircuitParams& p, const FourierCurrents& dir) {
    Vec vals;
    vals.reserve(kRaySteps.size());
    FourierCurrents fc = dir;
    fc.lambda = {p.lambda3, p.lambda5, p.lambda6};
    for (double h : kRaySteps) {
        fc.b = dir.b;
        fc.b *= h;
        vals.push_back(evaluate_functional(p, fc).total);
    }
    return vals;
}

bool strictly_decreasing(const Vec& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] < v[i - 1])) return false;
    return true;
}

/// Tries dir and -dir; on success stores the verified ray and returns the
/// surviving witness.
std::optional<FourierCurrents> verify_descent(const CircuitParams& p,
                                              FourierCurrents dir, Vec& ray_out) {
    for (int attempt = 0; attempt < 2; ++attempt) {
        Vec vals = ray_values(p, dir);
        if (strictly_decreasing(vals)) {
            ray_out = std::move(vals);
            return dir;
        }
        dir.b *= -1.0;
    }
    return std::nullopt;
}

}  // namespace

FourierCurrents descent_direction(const CircuitParams& p, DescentMode mode,
                                  const Vec& direction, int Ntrunc) {
    p.validate();
    if (Ntrunc < 1) throw std::invalid_argument("descent_direction: Ntrunc must be >= 1");
    const auto [kc1, kt2] = circuit_constants(p);
    const StabilityMatrices sm = build_stability_matrices(p, kc1.K, kt2.K);
    const double T = p.horizon();
    const double shift1 = T * T / (4.0 * kPi * kPi * p.C1);
    const double shift2 = T * T / (2.0 * kPi * kPi * p.C2);

    Matrix coeffs(3, static_cast<std::size_t>(Ntrunc));
    switch (mode) {
        case DescentMode::TwoCapacitor: {
            if (definiteness(sm.S2, definiteness_tol(sm.S2)) != Definiteness::NegativeDefinite)
                throw std::domain_error(
                    "descent_direction: TwoCapacitor mode requires S2 negative-definite");
            const Vec w3 = channel_profile(kc1.K, shift1, Ntrunc);
            const Vec w56 = channel_profile(kt2.K, shift2, Ntrunc);
            for (int n = 0; n < Ntrunc; ++n) {
                coeffs(0, n) = w3[static_cast<std::size_t>(n)];
                coeffs(1, n) = w56[static_cast<std::size_t>(n)];
                coeffs(2, n) = w56[static_cast<std::size_t>(n)];
            }
            break;
        }
        case DescentMode::EqualCapacitance: {
            if (!equal_capacitance(p))
                throw std::domain_error(
                    "descent_direction: EqualCapacitance mode requires C1 = C2");
            if (direction.size() != 3)
                throw std::invalid_argument(
                    "descent_direction: EqualCapacitance mode needs a 3-vector direction");
            const Vec sd = sm.S2 * direction;
            if (!(dot(direction, sd) < 0.0))
                throw std::domain_error(
                    "descent_direction: supplied direction is not S2-negative");
            const Vec w = channel_profile(kc1.K, shift1, Ntrunc);
            for (int n = 0; n < Ntrunc; ++n)
                for (std::size_t k = 0; k < 3; ++k)
                    coeffs(k, n) = direction[k] * w[static_cast<std::size_t>(n)];
            break;
        }
    }
    return sine_direction(p, coeffs);
}

ClassificationReport classify_critical_structure(const CircuitParams& p, int witness_modes) {
    p.validate();
    if (witness_modes < 1)
        throw std::invalid_argument("classify_critical_structure: witness_modes must be >= 1");
    ClassificationReport rep;
    const auto [kc1, kt2] = circuit_constants(p);
    rep.K_C1 = kc1.K;
    rep.Ktilde_C2 = kt2.K;
    const StabilityMatrices sm = build_stability_matrices(p, kc1.K, kt2.K);
    const EigenDecomposition e1 = sym_eig(sm.S1);
    const EigenDecomposition e2 = sym_eig(sm.S2);
    rep.S1_eigenvalues = e1.values;
    rep.S2_eigenvalues = e2.values;
    rep.S1_definite =
        definiteness(sm.S1, definiteness_tol(sm.S1)) == Definiteness::PositiveDefinite;
    rep.S2_negative_definite =
        definiteness(sm.S2, definiteness_tol(sm.S2)) == Definiteness::NegativeDefinite;
    rep.S2_has_negative_eigenvalue = e2.values[0] < -definiteness_tol(sm.S2);
    rep.equal_capacitance_case = equal_capacitance(p);

    if (rep.S1_definite) {
        rep.verdict = Verdict::UniqueMinimum;
        return rep;
    }

    const double T = p.horizon();
    const double shift1 = T * T / (4.0 * kPi * kPi * p.C1);

    if (rep.S2_negative_definite) {
        auto witness =
            verify_descent(p, descent_direction(p, DescentMode::TwoCapacitor, {}, witness_modes),
                           rep.witness_ray);
        if (!witness) {
            // Single-channel fallback: S2 negative-definite forces the
            // channel-3 quadratic coefficient L3 + L4 - K(C1) below zero, so
            // this ray always descends once the sign is chosen.
            Matrix coeffs(3, witness_modes);
            const Vec w = channel_profile(kc1.K, shift1, witness_modes);
            for (int n = 0; n < witness_modes; ++n)
                coeffs(0, n) = w[static_cast<std::size_t>(n)];
            witness = verify_descent(p, sine_direction(p, coeffs), rep.witness_ray);
        }
        if (witness) {
            rep.verdict = Verdict::NoExtremum;
            rep.witness = std::move(witness);
            return rep;
        }
        rep.verdict = Verdict::Inconclusive;
        return rep;
    }

    if (rep.equal_capacitance_case && rep.S2_has_negative_eigenvalue) {
        // Most-negative eigenvector of S2 first; if its ray fails because the
        // cross term K (y - z)^2 cancels the S2-negativity, retry with the
        // most-negative eigenvector of the exact ray quadratic form
        // W = S2 + K [[0,0,0],[0,1,-1],[0,-1,1]].
        Vec v{e2.vectors(0, 0), e2.vectors(1, 0), e2.vectors(2, 0)};
        std::optional<FourierCurrents> witness;
        const Vec sv = sm.S2 * v;
        if (dot(v, sv) < 0.0)
            witness = verify_descent(
                p, descent_direction(p, DescentMode::EqualCapacitance, v, witness_modes),
                rep.witness_ray);
        if (!witness) {
            Matrix W = sm.S2;
            W(1, 1) += kc1.K;
            W(2, 2) += kc1.K;
            W(1, 2) -= kc1.K;
            W(2, 1) -= kc1.K;
            const EigenDecomposition ew = sym_eig(W);
            if (ew.values[0] < -definiteness_tol(W)) {
                Vec vw{ew.vectors(0, 0), ew.vectors(1, 0), ew.vectors(2, 0)};
                const Vec svw = sm.S2 * vw;
                if (dot(vw, svw) < 0.0)
                    witness = verify_descent(
                        p,
                        descent_direction(p, DescentMode::EqualCapacitance, vw, witness_modes),
                        rep.witness_ray);
                else {
                    // The W-eigenvector need not be S2-negative; build the
                    // ray directly without the precondition check.
                    Matrix coeffs(3, witness_modes);
                    const Vec w = channel_profile(kc1.K, shift1, witness_modes);
                    for (int n = 0; n < witness_modes; ++n)
                        for (std::size_t k = 0; k < 3; ++k)
                            coeffs(k, n) = vw[k] * w[static_cast<std::size_t>(n)];
                    witness = verify_descent(p, sine_direction(p, coeffs), rep.witness_ray);
                }
            }
        }
        if (witness) {
            rep.verdict = Verdict::NoExtremum;
            rep.witness = std::move(witness);
            return rep;
        }
    }

    rep.verdict = Verdict::Inconclusive;
    return rep;
}

}  // namespace varlc
