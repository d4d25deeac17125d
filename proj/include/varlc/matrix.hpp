#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace varlc {

/// Real vector, dimension fixed by context. Units are carried by the caller.
using Vec = std::vector<double>;

/// Small dense real matrix, row-major storage. Sized for the 2x2 .. 6x6
/// problems this library works with; no attempt is made at large-scale
/// performance.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    /// Row-wise construction: Matrix{{1,2},{3,4}}.
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const Vec& d);

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] const std::vector<double>& data() const { return data_; }

    [[nodiscard]] Matrix transposed() const;
    [[nodiscard]] bool all_finite() const;

    Matrix& operator+=(const Matrix& rhs);
    Matrix& operator-=(const Matrix& rhs);
    Matrix& operator*=(double s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix lhs, const Matrix& rhs);
Matrix operator-(Matrix lhs, const Matrix& rhs);
Matrix operator*(Matrix lhs, double s);
Matrix operator*(double s, Matrix rhs);
Matrix operator*(const Matrix& lhs, const Matrix& rhs);
Vec operator*(const Matrix& m, const Vec& v);

/// Max-absolute-row-sum norm.
double inf_norm(const Matrix& m);
/// Max |A(i,j) - A(j,i)| over all pairs; 0 for exactly symmetric input.
double asymmetry(const Matrix& m);

/// Solve A x = b by LU with partial pivoting. Throws on singular A.
Vec solve(Matrix a, Vec b);
/// Solve A X = B columnwise. Throws on singular A.
Matrix solve(Matrix a, const Matrix& b);
/// Dense inverse via LU. Throws on singular A.
Matrix inverse(const Matrix& a);

// Vector helpers.
double dot(const Vec& a, const Vec& b);
double norm_inf(const Vec& v);
double norm2(const Vec& v);
Vec operator+(Vec a, const Vec& b);
Vec operator-(Vec a, const Vec& b);
Vec operator*(double s, Vec v);
/// a += s * b
void axpy(double s, const Vec& b, Vec& a);

}  // namespace varlc
