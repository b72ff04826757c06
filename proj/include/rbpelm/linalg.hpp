#pragma once

#include "rbpelm/matrix.hpp"

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <vector>

namespace rbpelm {

/// Thrown by symmetric solves when a non-positive (or numerically zero)
/// pivot is hit. Carries the offending pivot so callers can decide on a
/// ridge rescue.
class SingularMatrix : public std::runtime_error {
public:
    SingularMatrix(std::size_t pivot_index, double pivot_value);
    std::size_t pivot_index;
    double pivot_value;
};

/// Column reordering of a matrix together with its detected numerical rank.
/// The first `rank` columns of the permuted matrix are linearly independent
/// at `tolerance`.
struct ColumnPermutation {
    std::vector<std::size_t> order;  // permutation of {0, ..., cols-1}
    std::size_t rank = 0;
    double tolerance = 0.0;
};

/// Result column i is column order[i] of a.
DenseMatrix apply_permutation(const DenseMatrix& a, const ColumnPermutation& p);
/// Exact inverse of apply_permutation on the row side: moves row i of b back
/// to row order[i]. Used to report beta in original hidden-node order.
DenseMatrix invert_permutation_rows(const DenseMatrix& b, const ColumnPermutation& p);

/// Moore-Penrose pseudoinverse via SVD. Singular values below
/// tol * sigma_max are treated as zero; tol <= 0 selects
/// max(rows, cols) * eps.
DenseMatrix pinv_svd(const DenseMatrix& a, double tol = 0.0);

/// Cholesky factorization of a symmetric positive definite matrix,
/// reusable across several right-hand sides. Throws SingularMatrix when a
/// pivot is non-positive or numerically zero.
class SpdFactor {
public:
    explicit SpdFactor(const DenseMatrix& m);
    ~SpdFactor();
    SpdFactor(SpdFactor&&) noexcept;
    SpdFactor& operator=(SpdFactor&&) noexcept;
    SpdFactor(const SpdFactor&) = delete;
    SpdFactor& operator=(const SpdFactor&) = delete;

    DenseMatrix solve(const DenseMatrix& rhs) const;
    std::size_t dim() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Solves m * X = rhs for symmetric positive definite m through a Cholesky
/// factorization; never forms an explicit inverse.
DenseMatrix solve_spd(const DenseMatrix& m, const DenseMatrix& rhs);

/// Rank-revealing column permutation: leading `rank` columns of the permuted
/// matrix are linearly independent at the tolerance. tol = 0 selects the
/// default max(rows, cols) * eps relative threshold. Deterministic, ties in
/// pivot selection go to the lowest original column index.
ColumnPermutation rank_revealing_permutation(const DenseMatrix& a, double tol = 0.0);

/// Result of the pivoted factorization behind rank_revealing_permutation.
/// When the matrix has full column rank, `factor` is the complete lower
/// Cholesky factor of the permuted Gram matrix: F F^T = P^T (a^T a) P with
/// P given by permutation.order. Rows at and beyond `permutation.rank` are
/// unfinished and must not be used.
struct RankRevealingFactor {
    ColumnPermutation permutation;
    DenseMatrix factor;  // cols x cols, lower triangular up to the rank
};

/// Same pivot sequence and rank decision as rank_revealing_permutation, but
/// also returns the triangular factor so full-column-rank callers can solve
/// the normal equations without factoring again.
RankRevealingFactor rank_revealing_factor(const DenseMatrix& a, double tol = 0.0);

/// Solves (a^T a) x = rhs in PERMUTED coordinates through a full-rank
/// RankRevealingFactor: rhs row i must correspond to original column
/// order[i], and the result rows come back in the same permuted order.
/// Requires permutation.rank == cols.
DenseMatrix solve_factored_gram(const RankRevealingFactor& f, const DenseMatrix& rhs);

}  // namespace rbpelm
