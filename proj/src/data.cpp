#include "rbpelm/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace rbpelm {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(line);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!line.empty() && line.back() == sep) out.push_back("");
    return out;
}

bool parse_double(const std::string& token, double& out) {
    std::string t = trim(token);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size() && std::isfinite(out);
}

std::size_t class_index(std::vector<std::string>& names, const std::string& label) {
    auto it = std::find(names.begin(), names.end(), label);
    if (it != names.end()) return static_cast<std::size_t>(it - names.begin());
    names.push_back(label);
    return names.size() - 1;
}

Dataset assemble(const std::vector<std::vector<double>>& rows,
                 const std::vector<std::size_t>& labels,
                 std::vector<std::string> class_names) {
    const std::size_t n = rows.size();
    const std::size_t f = rows.front().size();
    const std::size_t m = class_names.size();
    Dataset ds;
    ds.x = DenseMatrix(n, f, 0.0);
    ds.y = DenseMatrix(n, m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < f; ++j) ds.x(i, j) = rows[i][j];
        ds.y(i, labels[i]) = 1.0;
    }
    ds.class_names = std::move(class_names);
    return ds;
}

}  // namespace

Dataset load_csv(const std::string& path, int label_column, bool has_header) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);

    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> labels;
    std::vector<std::string> class_names;

    std::string line;
    std::size_t lineno = 0;
    std::size_t expected_cols = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (has_header && lineno == 1) continue;
        if (trim(line).empty()) continue;
        auto cells = split(line, ',');
        if (expected_cols == 0) {
            expected_cols = cells.size();
            if (expected_cols < 2) {
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": need at least one feature and one label column");
            }
        } else if (cells.size() != expected_cols) {
            throw DataError(path + ":" + std::to_string(lineno) + ": expected " +
                            std::to_string(expected_cols) + " columns, got " +
                            std::to_string(cells.size()));
        }
        std::size_t label_idx = label_column < 0 ? expected_cols - 1
                                                 : static_cast<std::size_t>(label_column);
        if (label_idx >= expected_cols) {
            throw DataError(path + ": label column " + std::to_string(label_idx) +
                            " out of range for " + std::to_string(expected_cols) + " columns");
        }
        std::vector<double> row;
        row.reserve(expected_cols - 1);
        for (std::size_t c = 0; c < expected_cols; ++c) {
            if (c == label_idx) continue;
            double v;
            if (!parse_double(cells[c], v)) {
                throw DataError(path + ":" + std::to_string(lineno) + ": column " +
                                std::to_string(c + 1) + ": non-numeric cell '" + trim(cells[c]) +
                                "'");
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
        labels.push_back(class_index(class_names, trim(cells[label_idx])));
    }
    if (rows.empty()) throw DataError(path + ": no data rows");
    return assemble(rows, labels, std::move(class_names));
}

Dataset load_libsvm(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);

    struct SparseRow {
        std::vector<std::pair<std::size_t, double>> entries;  // 0-based
    };
    std::vector<SparseRow> rows;
    std::vector<std::size_t> labels;
    std::vector<std::string> class_names;
    std::size_t max_index = 0;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty()) continue;
        std::istringstream is(t);
        std::string label;
        is >> label;
        labels.push_back(class_index(class_names, label));
        SparseRow row;
        std::string tok;
        while (is >> tok) {
            auto colon = tok.find(':');
            double val;
            std::size_t idx = 0;
            bool ok = colon != std::string::npos && colon > 0;
            if (ok) {
                try {
                    std::size_t used = 0;
                    long parsed = std::stol(tok.substr(0, colon), &used);
                    ok = used == colon && parsed >= 1;
                    idx = static_cast<std::size_t>(parsed);
                } catch (const std::exception&) {
                    ok = false;
                }
            }
            if (ok) ok = parse_double(tok.substr(colon + 1), val);
            if (!ok) {
                throw DataError(path + ":" + std::to_string(lineno) +
                                ": malformed index:value token '" + tok + "'");
            }
            max_index = std::max(max_index, idx);
            row.entries.emplace_back(idx - 1, val);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(path + ": no data rows");
    if (max_index == 0) max_index = 1;  // all-empty feature lists still give one column

    Dataset ds;
    ds.x = DenseMatrix(rows.size(), max_index, 0.0);
    ds.y = DenseMatrix(rows.size(), class_names.size(), 0.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& [j, v] : rows[i].entries) ds.x(i, j) = v;
        ds.y(i, labels[i]) = 1.0;
    }
    ds.class_names = std::move(class_names);
    return ds;
}

void save_libsvm(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    out.precision(17);
    for (std::size_t i = 0; i < ds.samples(); ++i) {
        std::size_t label = 0;
        for (std::size_t j = 1; j < ds.classes(); ++j) {
            if (ds.y(i, j) > ds.y(i, label)) label = j;
        }
        out << ds.class_names[label];
        for (std::size_t j = 0; j < ds.features(); ++j) {
            if (ds.x(i, j) != 0.0) out << ' ' << (j + 1) << ':' << ds.x(i, j);
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed for " + path);
}

Dataset normalize(const Dataset& ds) {
    std::vector<std::pair<double, double>> ranges(ds.features());
    for (std::size_t j = 0; j < ds.features(); ++j) {
        double lo = ds.x(0, j), hi = ds.x(0, j);
        for (std::size_t i = 1; i < ds.samples(); ++i) {
            lo = std::min(lo, ds.x(i, j));
            hi = std::max(hi, ds.x(i, j));
        }
        ranges[j] = {lo, hi};
    }
    return normalize_with(ds, ranges);
}

Dataset normalize_with(const Dataset& ds,
                       const std::vector<std::pair<double, double>>& ranges) {
    if (ranges.size() != ds.features()) {
        throw DataError("normalize: " + std::to_string(ranges.size()) + " ranges for " +
                        std::to_string(ds.features()) + " features");
    }
    Dataset out = ds;
    for (std::size_t j = 0; j < ds.features(); ++j) {
        auto [lo, hi] = ranges[j];
        double span = hi - lo;
        for (std::size_t i = 0; i < ds.samples(); ++i) {
            double v = span > 0.0 ? 2.0 * (ds.x(i, j) - lo) / span - 1.0 : 0.0;
            out.x(i, j) = std::clamp(v, -1.0, 1.0);
        }
    }
    out.feature_ranges = ranges;
    return out;
}

Dataset synth(std::size_t samples, std::size_t features, std::size_t classes,
              std::uint64_t seed) {
    if (samples < 1 || features < 1 || classes < 1) {
        throw DataError("synth: samples, features and classes must be >= 1");
    }
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> center(-1.0, 1.0);
    std::normal_distribution<double> noise(0.0, 0.4);

    DenseMatrix means(classes, features, 0.0);
    for (std::size_t c = 0; c < classes; ++c) {
        for (std::size_t j = 0; j < features; ++j) means(c, j) = center(gen);
    }

    Dataset ds;
    ds.x = DenseMatrix(samples, features, 0.0);
    ds.y = DenseMatrix(samples, classes, 0.0);
    for (std::size_t i = 0; i < samples; ++i) {
        std::size_t c = i % classes;
        for (std::size_t j = 0; j < features; ++j) ds.x(i, j) = means(c, j) + noise(gen);
        ds.y(i, c) = 1.0;
    }
    for (std::size_t c = 0; c < classes; ++c) ds.class_names.push_back("c" + std::to_string(c));
    return normalize(ds);
}

}  // namespace rbpelm
