#include "varlc/circuit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "varlc/eig.hpp"

namespace varlc {

namespace {

void require_positive(double v, const char* name, bool allow_zero = false) {
    const bool ok = allow_zero ? (v >= 0.0) : (v > 0.0);
    if (!ok || !std::isfinite(v))
        throw std::invalid_argument(std::string("circuit parameter ") + name +
                                    (allow_zero ? " must be >= 0" : " must be > 0"));
}

}  // namespace

void CircuitParams::validate() const {
    require_positive(L3, "L3");
    require_positive(L4, "L4", /*allow_zero=*/true);
    require_positive(L5, "L5");
    require_positive(L6, "L6");
    require_positive(C1, "C1");
    require_positive(C2, "C2");
    if (!std::isfinite(t0) || !std::isfinite(t1) || t1 <= t0)
        throw std::invalid_argument("circuit horizon requires t1 > t0");
    for (double v : {q1_0, q2_0, lambda3, lambda5, lambda6})
        if (!std::isfinite(v))
            throw std::invalid_argument("circuit charges must be finite");
}

CircuitMatrices build_matrices(const CircuitParams& p) {
    p.validate();
    CircuitMatrices out;
    out.M = Matrix{{p.L4 + p.L3, -p.L4, -p.L4},
                   {-p.L4, p.L4 + p.L5, p.L4},
                   {-p.L4, p.L4, p.L4 + p.L6}};
    out.N = Matrix{{1.0 / p.C1, 0.0, 0.0},
                   {0.0, 1.0 / p.C2, 1.0 / p.C2},
                   {0.0, 1.0 / p.C2, 1.0 / p.C2}};
    const SpdRoots roots = sqrt_spd(out.M);
    out.M_half = roots.half;
    out.M_neg_half = roots.neg_half;

    const Matrix G = out.M_neg_half * out.N * out.M_neg_half;
    const EigenDecomposition ed = sym_eig(G);

    // Identify the structural zero eigenvalue (kernel of N mapped through
    // M^(-1/2)) as the least-magnitude one; the remaining two, ascending,
    // are h1 and h2.
    std::size_t zero_idx = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(ed.values[i]) < std::abs(ed.values[zero_idx])) zero_idx = i;
    std::size_t pos[2];
    std::size_t w = 0;
    for (std::size_t i = 0; i < 3; ++i)
        if (i != zero_idx) pos[w++] = i;
    out.h1 = ed.values[pos[0]];
    out.h2 = ed.values[pos[1]];
    if (out.h1 <= 0.0 || out.h2 <= 0.0)
        throw std::domain_error("circuit stiffness must have two positive eigenvalues");

    out.P = Matrix(3, 3);
    for (std::size_t j = 0; j < 3; ++j) {
        out.P(0, j) = ed.vectors(j, pos[0]);
        out.P(1, j) = ed.vectors(j, pos[1]);
        out.P(2, j) = ed.vectors(j, zero_idx);
    }
    out.a = initial_charge_vector(p);
    return out;
}

StabilityMatrices build_stability_matrices(const CircuitParams& p, double K_C1,
                                           double Ktilde_C2) {
    p.validate();
    StabilityMatrices out;
    out.K1 = std::max(K_C1, 0.5 * Ktilde_C2);
    out.K2 = std::min(K_C1, 0.5 * Ktilde_C2);
    const Matrix M = Matrix{{p.L4 + p.L3, -p.L4, -p.L4},
                            {-p.L4, p.L4 + p.L5, p.L4},
                            {-p.L4, p.L4, p.L4 + p.L6}};
    const Matrix D = Matrix::diagonal({1.0, 2.0, 2.0});
    out.S1 = M - out.K1 * D;
    out.S2 = M - out.K2 * D;
    return out;
}

Vec initial_charge_vector(const CircuitParams& p) {
    return {-p.q1_0 / p.C1, -p.q2_0 / p.C2, -p.q2_0 / p.C2};
}

}  // namespace varlc
