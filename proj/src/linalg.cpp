#include "rbpelm/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace rbpelm {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

constexpr double kEps = std::numeric_limits<double>::epsilon();

MatrixXd to_eigen(const DenseMatrix& m) {
    return ConstMap(m.data(), static_cast<Eigen::Index>(m.rows()),
                    static_cast<Eigen::Index>(m.cols()));
}

DenseMatrix from_eigen(const MatrixXd& e) {
    DenseMatrix out(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()), 0.0);
    MutMap(out.data(), e.rows(), e.cols()) = e;
    return out;
}

}  // namespace

SingularMatrix::SingularMatrix(std::size_t index, double value)
    : std::runtime_error("non-positive pivot " + std::to_string(value) + " at index " +
                         std::to_string(index) + " in symmetric factorization"),
      pivot_index(index),
      pivot_value(value) {}

DenseMatrix apply_permutation(const DenseMatrix& a, const ColumnPermutation& p) {
    if (a.cols() != p.order.size()) {
        throw ShapeError("apply_permutation: matrix has " + std::to_string(a.cols()) +
                         " columns but permutation length is " + std::to_string(p.order.size()));
    }
    DenseMatrix out(a.rows(), a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            out(i, j) = a(i, p.order[j]);
        }
    }
    return out;
}

DenseMatrix invert_permutation_rows(const DenseMatrix& b, const ColumnPermutation& p) {
    if (b.rows() != p.order.size()) {
        throw ShapeError("invert_permutation_rows: matrix has " + std::to_string(b.rows()) +
                         " rows but permutation length is " + std::to_string(p.order.size()));
    }
    DenseMatrix out(b.rows(), b.cols(), 0.0);
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            out(p.order[i], j) = b(i, j);
        }
    }
    return out;
}

DenseMatrix pinv_svd(const DenseMatrix& a, double tol) {
    if (a.empty()) {
        throw ShapeError("pinv_svd: empty matrix");
    }
    MatrixXd m = to_eigen(a);
    Eigen::BDCSVD<MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw std::runtime_error("pinv_svd: SVD iteration cap exceeded");
    }
    const VectorXd& sv = svd.singularValues();
    double smax = sv.size() > 0 ? sv(0) : 0.0;
    double rel = tol > 0.0 ? tol : static_cast<double>(std::max(a.rows(), a.cols())) * kEps;
    double cut = rel * smax;
    VectorXd inv = VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cut && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
    }
    MatrixXd pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
    return from_eigen(pinv);
}

struct SpdFactor::Impl {
    MatrixXd chol;  // lower triangular factor
};

SpdFactor::~SpdFactor() = default;
SpdFactor::SpdFactor(SpdFactor&&) noexcept = default;
SpdFactor& SpdFactor::operator=(SpdFactor&&) noexcept = default;

std::size_t SpdFactor::dim() const { return static_cast<std::size_t>(impl_->chol.rows()); }

SpdFactor::SpdFactor(const DenseMatrix& m) : impl_(new Impl) {
    if (m.rows() != m.cols()) {
        throw ShapeError("solve_spd: matrix is not square, " + m.shape_str());
    }
    MatrixXd a = to_eigen(m);
    double scale = a.cwiseAbs().maxCoeff();
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0)) {
        throw std::invalid_argument("solve_spd: matrix is not symmetric within 1e-12 relative");
    }
    const Eigen::Index n = a.rows();
    const double thresh = static_cast<double>(n) * kEps * a.diagonal().maxCoeff();

    // Blocked right-looking Cholesky: unblocked panel, then a rank-b update
    // of the trailing block.
    const Eigen::Index nb = 64;
    for (Eigen::Index k = 0; k < n; k += nb) {
        const Eigen::Index b = std::min(nb, n - k);
        for (Eigen::Index j = k; j < k + b; ++j) {
            double d = a(j, j);
            if (!std::isfinite(d) || d <= thresh || d <= 0.0) {
                throw SingularMatrix(static_cast<std::size_t>(j), d);
            }
            a(j, j) = std::sqrt(d);
            const Eigen::Index below = n - j - 1;
            if (below > 0) {
                a.col(j).tail(below) /= a(j, j);
                for (Eigen::Index c = j + 1; c < k + b; ++c) {
                    a.col(c).tail(n - c).noalias() -= a(c, j) * a.col(j).tail(n - c);
                }
            }
        }
        const Eigen::Index trailing = n - k - b;
        if (trailing > 0) {
            auto panel = a.block(k + b, k, trailing, b);
            a.bottomRightCorner(trailing, trailing)
                .selfadjointView<Eigen::Lower>()
                .rankUpdate(panel, -1.0);
        }
    }
    impl_->chol = a.triangularView<Eigen::Lower>();
}

DenseMatrix SpdFactor::solve(const DenseMatrix& rhs) const {
    const MatrixXd& l = impl_->chol;
    if (rhs.rows() != static_cast<std::size_t>(l.rows())) {
        throw ShapeError("solve_spd: rhs has " + std::to_string(rhs.rows()) +
                         " rows, expected " + std::to_string(l.rows()));
    }
    MatrixXd x = to_eigen(rhs);
    l.triangularView<Eigen::Lower>().solveInPlace(x);
    l.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
    return from_eigen(x);
}

DenseMatrix solve_spd(const DenseMatrix& m, const DenseMatrix& rhs) {
    return SpdFactor(m).solve(rhs);
}

RankRevealingFactor rank_revealing_factor(const DenseMatrix& a, double tol) {
    if (a.empty()) {
        throw ShapeError("rank_revealing_permutation: empty matrix");
    }
    if (tol < 0.0 || !std::isfinite(tol)) {
        throw std::invalid_argument("rank_revealing_permutation: tolerance must be >= 0");
    }
    const std::size_t cols = a.cols();
    const Eigen::Index n = static_cast<Eigen::Index>(cols);

    RankRevealingFactor out;
    ColumnPermutation& p = out.permutation;
    p.order.resize(cols);
    for (std::size_t i = 0; i < cols; ++i) p.order[i] = i;
    p.tolerance = tol > 0.0 ? tol : static_cast<double>(std::max(a.rows(), a.cols())) * kEps;
    out.factor = DenseMatrix(cols, cols, 0.0);

    // Diagonal-pivoted Cholesky of the Gram matrix A^T A. Pivot selection by
    // largest remaining diagonal matches column-pivoted QR on A: the Cholesky
    // diagonal equals |R_kk| of the QR factor, so the rank decision
    // |R_kk| > tol * |R_00| carries over unchanged. When A has full column
    // rank the loop finishes the factorization F F^T of the permuted Gram.
    MatrixXd g = MatrixXd::Zero(n, n);
    {
        MatrixXd acm = to_eigen(a);
        g.selfadjointView<Eigen::Lower>().rankUpdate(acm.transpose());
    }
    g = g.selfadjointView<Eigen::Lower>();

    VectorXd d = g.diagonal();
    MutMap f(out.factor.data(), n, n);  // factor rows; row i = factored entries of column i

    double dmax0 = d.maxCoeff();
    if (!(dmax0 > 0.0)) {
        p.rank = 0;  // all-zero matrix: valid result, identity order
        return out;
    }
    const double r00 = std::sqrt(dmax0);
    const double cut = p.tolerance * r00;

    // Blocked right-looking pivoted factorization: each panel is factored
    // column by column (with updates drawn from the panel only, since the
    // trailing matrix is current up to the panel start), then the trailing
    // Gram block receives one rank-kb update. The running diagonal d carries
    // the fully updated pivot candidates throughout.
    std::size_t rank = cols;
    const Eigen::Index nb = 64;
    for (Eigen::Index k = 0; k < n && rank == cols; k += nb) {
        const Eigen::Index kb = std::min(nb, n - k);
        for (Eigen::Index j = k; j < k + kb; ++j) {
            Eigen::Index piv = j;
            for (Eigen::Index i = j + 1; i < n; ++i) {
                if (d(i) > d(piv)) piv = i;  // strict '>' keeps the lowest index on ties
            }
            if (piv != j) {
                std::swap(p.order[static_cast<std::size_t>(j)],
                          p.order[static_cast<std::size_t>(piv)]);
                std::swap(d(j), d(piv));
                f.row(j).head(j).swap(f.row(piv).head(j));
                g.row(j).swap(g.row(piv));
                g.col(j).swap(g.col(piv));
            }
            double rjj = d(j) > 0.0 ? std::sqrt(d(j)) : 0.0;
            if (rjj <= cut) {
                rank = static_cast<std::size_t>(j);
                break;
            }
            f(j, j) = rjj;
            const Eigen::Index below = n - j - 1;
            if (below > 0) {
                VectorXd col = g.col(j).tail(below);
                if (j > k) {
                    col.noalias() -=
                        f.block(j + 1, k, below, j - k) * f.row(j).segment(k, j - k).transpose();
                }
                col /= rjj;
                f.col(j).tail(below) = col;
                d.tail(below).array() -= col.array().square();
            }
        }
        const Eigen::Index trailing = n - k - kb;
        if (rank == cols && trailing > 0) {
            auto tail = g.bottomRightCorner(trailing, trailing);
            tail.selfadjointView<Eigen::Lower>().rankUpdate(f.block(k + kb, k, trailing, kb),
                                                            -1.0);
            tail.template triangularView<Eigen::StrictlyUpper>() =
                tail.transpose().template triangularView<Eigen::StrictlyUpper>();
        }
    }
    p.rank = rank;
    return out;
}

ColumnPermutation rank_revealing_permutation(const DenseMatrix& a, double tol) {
    return rank_revealing_factor(a, tol).permutation;
}

DenseMatrix solve_factored_gram(const RankRevealingFactor& f, const DenseMatrix& rhs) {
    const std::size_t n = f.permutation.order.size();
    if (f.permutation.rank != n) {
        throw std::invalid_argument("solve_factored_gram: factor is rank-deficient (" +
                                    std::to_string(f.permutation.rank) + " of " +
                                    std::to_string(n) + ")");
    }
    if (rhs.rows() != n) {
        throw ShapeError("solve_factored_gram: rhs has " + std::to_string(rhs.rows()) +
                         " rows, expected " + std::to_string(n));
    }
    ConstMap l(f.factor.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    MatrixXd x = to_eigen(rhs);
    l.triangularView<Eigen::Lower>().solveInPlace(x);
    l.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
    return from_eigen(x);
}

}  // namespace rbpelm
