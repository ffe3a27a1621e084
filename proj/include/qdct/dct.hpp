#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qdct {

using Vector = std::vector<double>;

/// Dense row-major real matrix. Used for image blocks, coefficient
/// matrices and the intermediate product G = D F.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    Vector column(std::size_t c) const;

    std::span<const double> values() const { return data_; }
    std::span<double> values() { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

double dot(std::span<const double> a, std::span<const double> b);

/// Orthonormal DCT-II matrix. Row u is the basis vector
///   D_u[k] = a_u cos((2k+1) u pi / 2n),  a_0 = 1/sqrt(n), a_u = sqrt(2/n).
class DctMatrix {
public:
    explicit DctMatrix(std::size_t n);

    std::size_t size() const { return basis_.rows(); }
    double operator()(std::size_t u, std::size_t k) const { return basis_(u, k); }
    std::span<const double> row(std::size_t u) const { return basis_.row(u); }
    const Matrix& matrix() const { return basis_; }

private:
    Matrix basis_;
};

DctMatrix build_dct_matrix(std::size_t n);

/// Single basis entry, without materialising the matrix.
double dct_basis(std::size_t n, std::size_t u, std::size_t k);

/// c_u = D_u . f for one u, computed from the closed-form row.
double dct_coefficient(std::span<const double> f, std::size_t u);

Vector dct1d(std::span<const double> f, const DctMatrix& d);
Vector idct1d(std::span<const double> c, const DctMatrix& d);

// 2-D transforms by separability: C = D F D^T and F = D^T C D.
Matrix dct2d(const Matrix& f, const DctMatrix& d);
Matrix idct2d(const Matrix& c, const DctMatrix& d);

double energy(std::span<const double> x);
double energy(const Matrix& x);

}  // namespace qdct
