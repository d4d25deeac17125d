#include "varlc/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace varlc {

namespace {

double off_diagonal_sq(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
    return s;
}

}  // namespace

EigenDecomposition sym_eig(const Matrix& input) {
    const std::size_t n = input.rows();
    if (input.cols() != n) throw std::invalid_argument("sym_eig: matrix not square");
    const double scale = inf_norm(input);
    if (asymmetry(input) > 1e-8 * std::max(1.0, scale))
        throw std::invalid_argument("sym_eig: matrix not symmetric within tolerance");

    // Work on the symmetrized copy so tiny input asymmetry cannot bias rotations.
    Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (input(i, j) + input(j, i));
    Matrix v = Matrix::identity(n);

    const double stop = 1e-30 * std::max(1.0, scale) * std::max(1.0, scale);
    for (int sweep = 0; sweep < 64 && off_diagonal_sq(a) > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                // tan of the smaller rotation angle
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

SpdRoots sqrt_spd(const Matrix& a, double tol) {
    const EigenDecomposition eig = sym_eig(a);
    const double scale = std::max(1.0, std::abs(eig.values.back()));
    for (double lambda : eig.values)
        if (lambda <= tol * scale)
            throw std::domain_error("sqrt_spd: matrix not positive-definite");

    const std::size_t n = a.rows();
    Matrix half(n, n), neg_half(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double h = 0.0, nh = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double r = std::sqrt(eig.values[k]);
                const double vv = eig.vectors(i, k) * eig.vectors(j, k);
                h += r * vv;
                nh += vv / r;
            }
            half(i, j) = h;
            neg_half(i, j) = nh;
        }
    return {half, neg_half};
}

Definiteness definiteness(const Matrix& a, double tol) {
    const EigenDecomposition eig = sym_eig(a);
    bool any_small = false, any_pos = false, any_neg = false;
    for (double lambda : eig.values) {
        if (std::abs(lambda) <= tol) any_small = true;
        else if (lambda > 0.0) any_pos = true;
        else any_neg = true;
    }
    if (any_small) return Definiteness::Semidefinite;
    if (any_pos && any_neg) return Definiteness::Indefinite;
    return any_pos ? Definiteness::PositiveDefinite : Definiteness::NegativeDefinite;
}

}  // namespace varlc
