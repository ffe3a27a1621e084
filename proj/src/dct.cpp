#include "qdct/dct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qdct {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values))
{
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("matrix: " + std::to_string(data_.size()) +
                                    " values for " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
}

Matrix Matrix::identity(std::size_t n)
{
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vector Matrix::column(std::size_t c) const
{
    Vector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
}

Matrix multiply(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("multiply: inner dimensions differ");
    }
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

Matrix transpose(const Matrix& a)
{
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw std::invalid_argument("max_abs_diff: size mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double max_abs_diff(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("max_abs_diff: shape mismatch");
    }
    return max_abs_diff(a.values(), b.values());
}

double dot(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
    return sum;
}

double dct_basis(std::size_t n, std::size_t u, std::size_t k)
{
    const double nd = static_cast<double>(n);
    const double scale = u == 0 ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd);
    return scale * std::cos(static_cast<double>((2 * k + 1) * u) * std::numbers::pi / (2.0 * nd));
}

DctMatrix::DctMatrix(std::size_t n)
{
    if (n == 0) throw std::invalid_argument("dct matrix: size must be positive");
    basis_ = Matrix(n, n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t k = 0; k < n; ++k) basis_(u, k) = dct_basis(n, u, k);
}

DctMatrix build_dct_matrix(std::size_t n) { return DctMatrix(n); }

double dct_coefficient(std::span<const double> f, std::size_t u)
{
    if (u >= f.size()) throw std::invalid_argument("dct_coefficient: index out of range");
    double sum = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) sum += f[k] * dct_basis(f.size(), u, k);
    return sum;
}

Vector dct1d(std::span<const double> f, const DctMatrix& d)
{
    if (f.size() != d.size()) throw std::invalid_argument("dct1d: signal length does not match transform size");
    Vector c(d.size());
    for (std::size_t u = 0; u < d.size(); ++u) c[u] = dot(d.row(u), f);
    return c;
}

Vector idct1d(std::span<const double> c, const DctMatrix& d)
{
    if (c.size() != d.size()) throw std::invalid_argument("idct1d: coefficient length does not match transform size");
    const std::size_t n = d.size();
    Vector f(n, 0.0);
    for (std::size_t u = 0; u < n; ++u) {
        const double cu = c[u];
        for (std::size_t k = 0; k < n; ++k) f[k] += d(u, k) * cu;
    }
    return f;
}

namespace {

void check_block(const Matrix& m, const DctMatrix& d, const char* what)
{
    if (!m.square() || m.rows() != d.size()) {
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(d.size()) + "x" +
                                    std::to_string(d.size()) + " input, got " + std::to_string(m.rows()) +
                                    "x" + std::to_string(m.cols()));
    }
}

}  // namespace

Matrix dct2d(const Matrix& f, const DctMatrix& d)
{
    check_block(f, d, "dct2d");
    return multiply(multiply(d.matrix(), f), transpose(d.matrix()));
}

Matrix idct2d(const Matrix& c, const DctMatrix& d)
{
    check_block(c, d, "idct2d");
    return multiply(multiply(transpose(d.matrix()), c), d.matrix());
}

double energy(std::span<const double> x)
{
    double sum = 0.0;
    for (double v : x) sum += v * v;
    return sum;
}

double energy(const Matrix& x) { return energy(x.values()); }

}  // namespace qdct
