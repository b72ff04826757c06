#pragma once

#include "rbpelm/matrix.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rbpelm {

/// Feature matrix plus one-hot targets. Classes are ordered by first
/// appearance in the source; feature_ranges holds the per-feature (min, max)
/// captured when normalize() ran (empty for raw datasets).
struct Dataset {
    DenseMatrix x;  // N x n
    DenseMatrix y;  // N x m, one-hot rows
    std::vector<std::string> class_names;
    std::vector<std::pair<double, double>> feature_ranges;

    std::size_t samples() const { return x.rows(); }
    std::size_t features() const { return x.cols(); }
    std::size_t classes() const { return y.cols(); }
};

class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Comma-separated numeric features with one label column.
/// label_column < 0 means the last column. Raw (un-normalized) output.
Dataset load_csv(const std::string& path, int label_column = -1, bool has_header = false);

/// Sparse "label idx:val ..." text format with 1-based indices; absent
/// indices read as 0.0. Raw output.
Dataset load_libsvm(const std::string& path);

/// Writes a dataset in the libsvm text format (full precision, so a
/// write/load round trip is exact).
void save_libsvm(const Dataset& ds, const std::string& path);

/// Per-feature min-max map onto [-1, 1]; constant features map to 0.
Dataset normalize(const Dataset& ds);

/// Applies previously captured feature ranges (e.g. to test data).
Dataset normalize_with(const Dataset& ds,
                       const std::vector<std::pair<double, double>>& ranges);

/// Deterministic Gaussian-cluster dataset, one cluster per class,
/// already normalized.
Dataset synth(std::size_t samples, std::size_t features, std::size_t classes,
              std::uint64_t seed);

}  // namespace rbpelm
