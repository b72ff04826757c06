#include "rbpelm/matrix.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <utility>

namespace rbpelm {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMajor>;
using MutMap = Eigen::Map<RowMajor>;

ConstMap map_of(const DenseMatrix& m) {
    return ConstMap(m.data(), static_cast<Eigen::Index>(m.rows()),
                    static_cast<Eigen::Index>(m.cols()));
}

MutMap map_of(DenseMatrix& m) {
    return MutMap(m.data(), static_cast<Eigen::Index>(m.rows()),
                  static_cast<Eigen::Index>(m.cols()));
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("DenseMatrix dimensions must be positive, got " + shape_str());
    }
    if (!std::isfinite(fill)) {
        throw std::invalid_argument("DenseMatrix fill value must be finite");
    }
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("DenseMatrix dimensions must be positive, got " + shape_str());
    }
    if (data_.size() != rows * cols) {
        throw ShapeError("DenseMatrix data length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_str());
    }
    if (!all_finite()) {
        throw std::invalid_argument("DenseMatrix data contains non-finite entries");
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

bool DenseMatrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

std::string DenseMatrix::shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions differ, " + a.shape_str() + " times " +
                         b.shape_str());
    }
    DenseMatrix out(a.rows(), b.cols(), 0.0);
    map_of(out).noalias() = map_of(a) * map_of(b);
    return out;
}

DenseMatrix matmul_at(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) {
        throw ShapeError("matmul_at: row counts differ, " + a.shape_str() + "^T times " +
                         b.shape_str());
    }
    DenseMatrix out(a.cols(), b.cols(), 0.0);
    map_of(out).noalias() = map_of(a).transpose() * map_of(b);
    return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.rows(), 0.0);
    map_of(out) = map_of(a).transpose();
    return out;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) {
        throw ShapeError("add: shapes differ, " + a.shape_str() + " vs " + b.shape_str());
    }
    DenseMatrix out(a.rows(), a.cols(), 0.0);
    map_of(out) = map_of(a) + map_of(b);
    return out;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) {
        throw ShapeError("subtract: shapes differ, " + a.shape_str() + " vs " + b.shape_str());
    }
    DenseMatrix out(a.rows(), a.cols(), 0.0);
    map_of(out) = map_of(a) - map_of(b);
    return out;
}

DenseMatrix scale(const DenseMatrix& a, double s) {
    DenseMatrix out(a.rows(), a.cols(), 0.0);
    map_of(out) = map_of(a) * s;
    return out;
}

DenseMatrix take_columns(const DenseMatrix& a, std::size_t begin, std::size_t end) {
    if (begin >= end || end > a.cols()) {
        throw ShapeError("take_columns: invalid range [" + std::to_string(begin) + ", " +
                         std::to_string(end) + ") for " + a.shape_str());
    }
    DenseMatrix out(a.rows(), end - begin, 0.0);
    map_of(out) = map_of(a).middleCols(static_cast<Eigen::Index>(begin),
                                       static_cast<Eigen::Index>(end - begin));
    return out;
}

DenseMatrix vstack(const DenseMatrix& top, const DenseMatrix& bottom) {
    if (top.cols() != bottom.cols()) {
        throw ShapeError("vstack: column counts differ, " + top.shape_str() + " vs " +
                         bottom.shape_str());
    }
    DenseMatrix out(top.rows() + bottom.rows(), top.cols(), 0.0);
    map_of(out).topRows(static_cast<Eigen::Index>(top.rows())) = map_of(top);
    map_of(out).bottomRows(static_cast<Eigen::Index>(bottom.rows())) = map_of(bottom);
    return out;
}

DenseMatrix hstack(const DenseMatrix& left, const DenseMatrix& right) {
    if (left.rows() != right.rows()) {
        throw ShapeError("hstack: row counts differ, " + left.shape_str() + " vs " +
                         right.shape_str());
    }
    DenseMatrix out(left.rows(), left.cols() + right.cols(), 0.0);
    map_of(out).leftCols(static_cast<Eigen::Index>(left.cols())) = map_of(left);
    map_of(out).rightCols(static_cast<Eigen::Index>(right.cols())) = map_of(right);
    return out;
}

DenseMatrix gram(const DenseMatrix& a) {
    const Eigen::Index n = static_cast<Eigen::Index>(a.cols());
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd acm = map_of(a);
    g.selfadjointView<Eigen::Lower>().rankUpdate(acm.transpose());
    g = g.selfadjointView<Eigen::Lower>();
    DenseMatrix out(a.cols(), a.cols(), 0.0);
    map_of(out) = g;
    return out;
}

double frobenius_norm(const DenseMatrix& a) {
    return map_of(a).norm();
}

double max_abs(const DenseMatrix& a) {
    return map_of(a).cwiseAbs().maxCoeff();
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    if (!a.same_shape(b)) {
        throw ShapeError("max_abs_diff: shapes differ, " + a.shape_str() + " vs " +
                         b.shape_str());
    }
    return (map_of(a) - map_of(b)).cwiseAbs().maxCoeff();
}

}  // namespace rbpelm
