#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qdct/dct.hpp"

using namespace qdct;

namespace {

const std::vector<double> kReferenceSignal{156, 159, 158, 155, 158, 156, 159, 158};

Matrix random_block(std::mt19937_64& gen, std::size_t n)
{
    return Matrix(n, n, oracle::random_vector(gen, n * n));
}

}  // namespace

TEST_CASE("dct matrix entries")
{
    const DctMatrix d8 = build_dct_matrix(8);
    for (std::size_t k = 0; k < 8; ++k) CHECK(d8(0, k) == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-15));

    const DctMatrix d2 = build_dct_matrix(2);
    const double h = std::sqrt(0.5);
    CHECK(d2(0, 0) == doctest::Approx(h));
    CHECK(d2(0, 1) == doctest::Approx(h));
    CHECK(d2(1, 0) == doctest::Approx(h));
    CHECK(d2(1, 1) == doctest::Approx(-h));

    for (std::size_t u = 0; u < 8; ++u)
        for (std::size_t k = 0; k < 8; ++k)
            CHECK(std::abs(d8(u, k) - oracle::alpha(8, u) * oracle::cosine(8, u, k)) <= 1e-15);

    CHECK_THROWS_AS(build_dct_matrix(0), std::invalid_argument);
}

TEST_CASE("orthogonality")
{
    for (std::size_t n : {2u, 4u, 8u, 16u, 64u}) {
        const DctMatrix d(n);
        const Matrix ddt = multiply(d.matrix(), transpose(d.matrix()));
        const Matrix dtd = multiply(transpose(d.matrix()), d.matrix());
        CHECK(max_abs_diff(ddt, Matrix::identity(n)) <= 1e-12);
        CHECK(max_abs_diff(dtd, Matrix::identity(n)) <= 1e-12);
    }
}

TEST_CASE("dct1d on the reference signal")
{
    const DctMatrix d(8);
    const Vector c = dct1d(kReferenceSignal, d);
    const double published[] = {1.9814e5, 0.51531, 1.5063, 0.95824, 3.125, 2.5846, 2.7437, 4.4418};
    for (std::size_t u = 0; u < 8; ++u) {
        CHECK(std::abs(c[u] * c[u] - published[u]) / published[u] <= 1e-3);
    }
    // c_0^2 = (sum f)^2 / 8 = 1259^2 / 8
    CHECK(c[0] * c[0] == doctest::Approx(198135.125).epsilon(1e-14));

    const Vector back = idct1d(c, d);
    CHECK(max_abs_diff(back, kReferenceSignal) <= 1e-9);
}

TEST_CASE("dct1d constant and zero signals")
{
    for (std::size_t n : {1u, 3u, 8u, 16u}) {
        const DctMatrix d(n);
        const Vector c = dct1d(Vector(n, 1.0), d);
        CHECK(c[0] == doctest::Approx(std::sqrt(static_cast<double>(n))));
        for (std::size_t u = 1; u < n; ++u) CHECK(std::abs(c[u]) <= 1e-12);

        Vector dc(n, 0.0);
        dc[0] = std::sqrt(static_cast<double>(n));
        const Vector f = idct1d(dc, d);
        for (double v : f) CHECK(v == doctest::Approx(1.0));

        for (double v : idct1d(Vector(n, 0.0), d)) CHECK(v == 0.0);
    }
}

TEST_CASE("dct1d matches the defining sum and inner products")
{
    std::mt19937_64 gen(11);
    for (std::size_t n : {2u, 5u, 8u, 16u}) {
        const DctMatrix d(n);
        for (int trial = 0; trial < 20; ++trial) {
            const auto f = oracle::random_vector(gen, n);
            const Vector c = dct1d(f, d);
            CHECK(max_abs_diff(c, oracle::dct1d_sum(f)) <= 1e-9);
            for (std::size_t u = 0; u < n; ++u) {
                CHECK(std::abs(c[u] - dot(d.row(u), f)) <= 1e-12);
                CHECK(std::abs(c[u] - dct_coefficient(f, u)) <= 1e-9);
            }
            CHECK(std::abs(energy(c) - energy(f)) / energy(f) <= 1e-9);
            CHECK(max_abs_diff(idct1d(c, d), f) <= 1e-9);
        }
    }
}

TEST_CASE("dct1d dimension errors")
{
    const DctMatrix d(4);
    CHECK_THROWS_AS(dct1d(Vector(3, 1.0), d), std::invalid_argument);
    CHECK_THROWS_AS(idct1d(Vector(5, 1.0), d), std::invalid_argument);
}

TEST_CASE("dct2d constant image has only the DC term")
{
    const DctMatrix d(4);
    const Matrix c = dct2d(Matrix(4, 4, 1.0), d);
    CHECK(c(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = 0; q < 4; ++q)
            if (p || q) CHECK(std::abs(c(p, q)) <= 1e-12);

    const DctMatrix d8(8);
    Matrix dc(8, 8);
    dc(0, 0) = 8.0;
    const Matrix f = idct2d(dc, d8);
    for (double v : f.values()) CHECK(v == doctest::Approx(1.0));
    const Matrix zero = idct2d(Matrix(8, 8), d8);
    for (double v : zero.values()) CHECK(v == 0.0);
}

TEST_CASE("dct2d equals the double sum, conserves energy, and inverts")
{
    std::mt19937_64 gen(5);
    const DctMatrix d(8);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix f = random_block(gen, 8);
        const Matrix c = dct2d(f, d);
        const auto ref = oracle::dct2d_double_sum({f.values().begin(), f.values().end()}, 8);
        CHECK(max_abs_diff(c.values(), ref) <= 1e-9);
        CHECK(std::abs(energy(c) - energy(f)) / energy(f) <= 1e-9);
        CHECK(max_abs_diff(idct2d(c, d), f) <= 1e-9);
    }
}

TEST_CASE("dct2d shape errors")
{
    const DctMatrix d(4);
    CHECK_THROWS_AS(dct2d(Matrix(4, 3), d), std::invalid_argument);
    CHECK_THROWS_AS(dct2d(Matrix(8, 8), d), std::invalid_argument);
    CHECK_THROWS_AS(idct2d(Matrix(3, 4), d), std::invalid_argument);
}

TEST_CASE("energy")
{
    CHECK(energy(kReferenceSignal) == 198151.0);
    CHECK(energy(Vector(5, 0.0)) == 0.0);
    CHECK(energy(Vector{3.0, 4.0}) == 25.0);
    CHECK(energy(Matrix(2, 2, 2.0)) == 16.0);
}
