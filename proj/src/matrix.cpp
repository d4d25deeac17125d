#include "varlc/matrix.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace varlc {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw std::invalid_argument("Matrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const Vec& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix& Matrix::operator+=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("Matrix +=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
        throw std::invalid_argument("Matrix -=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
}

Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
Matrix operator*(Matrix lhs, double s) { return lhs *= s; }
Matrix operator*(double s, Matrix rhs) { return rhs *= s; }

Matrix operator*(const Matrix& lhs, const Matrix& rhs) {
    if (lhs.cols() != rhs.rows()) throw std::invalid_argument("Matrix *: shape mismatch");
    Matrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const double lik = lhs(i, k);
            if (lik == 0.0) continue;
            for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += lik * rhs(k, j);
        }
    return out;
}

Vec operator*(const Matrix& m, const Vec& v) {
    if (m.cols() != v.size()) throw std::invalid_argument("Matrix * Vec: shape mismatch");
    Vec out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

double inf_norm(const Matrix& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) row += std::abs(m(i, j));
        best = std::max(best, row);
    }
    return best;
}

double asymmetry(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("asymmetry: matrix not square");
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
    return worst;
}

namespace {

// In-place LU with partial pivoting; perm holds the row permutation.
void lu_factor(Matrix& a, std::vector<std::size_t>& perm) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("solve: matrix not square");
    perm.resize(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;

    double scale = inf_norm(a);
    if (scale == 0.0) throw std::runtime_error("solve: zero matrix");

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > best) { best = std::abs(a(i, k)); piv = i; }
        if (best <= 1e-14 * scale)
            throw std::runtime_error("solve: matrix singular to working precision");
        if (piv != k) {
            std::swap(perm[k], perm[piv]);
            for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            a(i, k) /= a(k, k);
            const double lik = a(i, k);
            if (lik == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= lik * a(k, j);
        }
    }
}

Vec lu_solve(const Matrix& lu, const std::vector<std::size_t>& perm, const Vec& b) {
    const std::size_t n = lu.rows();
    Vec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[perm[i]];
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= lu(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu(i, j) * x[j];
        x[i] /= lu(i, i);
    }
    return x;
}

}  // namespace

Vec solve(Matrix a, Vec b) {
    if (a.rows() != b.size()) throw std::invalid_argument("solve: rhs size mismatch");
    std::vector<std::size_t> perm;
    lu_factor(a, perm);
    return lu_solve(a, perm, b);
}

Matrix solve(Matrix a, const Matrix& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("solve: rhs shape mismatch");
    std::vector<std::size_t> perm;
    lu_factor(a, perm);
    Matrix x(b.rows(), b.cols());
    Vec col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        Vec xj = lu_solve(a, perm, col);
        for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = xj[i];
    }
    return x;
}

Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.rows())); }

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm_inf(const Vec& v) {
    double best = 0.0;
    for (double x : v) best = std::max(best, std::abs(x));
    return best;
}

double norm2(const Vec& v) { return std::sqrt(dot(v, v)); }

Vec operator+(Vec a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("Vec +: size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

Vec operator-(Vec a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("Vec -: size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

Vec operator*(double s, Vec v) {
    for (double& x : v) x *= s;
    return v;
}

void axpy(double s, const Vec& b, Vec& a) {
    if (a.size() != b.size()) throw std::invalid_argument("axpy: size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
}

}  // namespace varlc
