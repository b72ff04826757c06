#include "rbpelm/matrix.hpp"

#include <doctest.h>

#include <random>

using namespace rbpelm;

namespace {

DenseMatrix random_matrix(std::mt19937_64& gen, std::size_t rows, std::size_t cols) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    DenseMatrix m(rows, cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = dist(gen);
    return m;
}

// Independent entry-by-entry reference for matmul.
DenseMatrix naive_matmul(const DenseMatrix& a, const DenseMatrix& b) {
    DenseMatrix out(a.rows(), b.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            for (std::size_t k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
    return out;
}

}  // namespace

TEST_CASE("matmul identity and hand-checked product") {
    std::mt19937_64 gen(1);
    DenseMatrix m = random_matrix(gen, 3, 3);
    CHECK(matmul(DenseMatrix::identity(3), m) == m);

    DenseMatrix a(2, 2, {1, 2, 3, 4});
    DenseMatrix b(2, 1, {0, 1});
    DenseMatrix prod = matmul(a, b);
    CHECK(prod(0, 0) == 2.0);
    CHECK(prod(1, 0) == 4.0);
}

TEST_CASE("matmul matches the triple-loop reference") {
    std::mt19937_64 gen(2);
    DenseMatrix a = random_matrix(gen, 7, 5);
    DenseMatrix b = random_matrix(gen, 5, 3);
    CHECK(max_abs_diff(matmul(a, b), naive_matmul(a, b)) < 1e-13);
}

TEST_CASE("matmul rejects mismatched shapes with both named") {
    DenseMatrix a(2, 3, 0.0), b(2, 3, 0.0);
    CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("2x3"), ShapeError);
}

TEST_CASE("transpose involution and vectors") {
    std::mt19937_64 gen(3);
    DenseMatrix m = random_matrix(gen, 4, 6);
    CHECK(transpose(transpose(m)) == m);
    CHECK(transpose(DenseMatrix(1, 1, {5.0})) == DenseMatrix(1, 1, {5.0}));
    CHECK(transpose(DenseMatrix(1, 3, {1, 2, 3})) == DenseMatrix(3, 1, {1, 2, 3}));
}

TEST_CASE("gram equals H^T H") {
    std::mt19937_64 gen(4);
    DenseMatrix h = random_matrix(gen, 9, 4);
    CHECK(max_abs_diff(gram(h), matmul(transpose(h), h)) < 1e-13);
}

TEST_CASE("stacking and column slicing") {
    DenseMatrix a(2, 2, {1, 2, 3, 4});
    DenseMatrix b(1, 2, {5, 6});
    DenseMatrix v = vstack(a, b);
    CHECK(v.rows() == 3);
    CHECK(v(2, 1) == 6.0);
    CHECK(take_columns(a, 1, 2) == DenseMatrix(2, 1, {2, 4}));
    CHECK(hstack(take_columns(a, 0, 1), take_columns(a, 1, 2)) == a);
    CHECK_THROWS_AS(take_columns(a, 1, 3), ShapeError);
    CHECK_THROWS_AS(vstack(a, DenseMatrix(1, 3, 0.0)), ShapeError);
}

TEST_CASE("constructors enforce shape and finiteness") {
    CHECK_THROWS_AS(DenseMatrix(0, 2, 0.0), ShapeError);
    CHECK_THROWS_AS(DenseMatrix(2, 2, {1, 2, 3}), ShapeError);
    CHECK_THROWS(DenseMatrix(1, 1, {std::numeric_limits<double>::quiet_NaN()}));
}
