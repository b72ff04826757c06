#pragma once

#include "rbpelm/data.hpp"
#include "rbpelm/elm.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rbpelm {

/// One measured training run.
struct TrialRecord {
    std::uint64_t seed = 0;
    double total_seconds = 0.0;   // H construction through beta completion
    double solve_seconds = 0.0;   // beta computation only
    double hidden_seconds = 0.0;  // H construction only
    double accuracy = 0.0;        // training accuracy
    std::size_t rank = 0;
    bool rank_known = false;
    bool ridge_applied = false;
    bool fallback_to_direct = false;
};

/// Trial statistics for one (strategy, hidden node count) cell.
struct TrialStats {
    std::string strategy;
    std::size_t hidden_nodes = 0;
    std::size_t trials = 0;
    double mean_seconds = 0.0;
    double min_seconds = 0.0;
    double max_seconds = 0.0;
    double stddev_seconds = 0.0;
    double mean_solve_seconds = 0.0;
    double mean_accuracy = 0.0;
    std::vector<TrialRecord> records;
};

struct DatasetInfo {
    std::string name;
    std::size_t samples = 0;
    std::size_t features = 0;
    std::size_t classes = 0;
};

struct BenchmarkReport {
    std::string machine;
    DatasetInfo dataset;
    std::vector<std::size_t> node_counts;
    std::vector<std::size_t> split_points;
    std::vector<TrialStats> stats;
};

struct SweepResult {
    std::vector<TrialStats> stats;
    std::size_t best_index = 0;   // argmin of mean_seconds
    std::size_t worst_index = 0;  // argmax of mean_seconds
};

/// Runs `trials` trainings, reseeding each trial with base seed + index.
/// One warm-up trial runs first and is discarded.
TrialStats run_trials(const Dataset& ds, const ElmParams& params_template,
                      const SolverStrategy& strategy, std::size_t trials);

/// One TrialStats per split point, plus the best/worst split by mean time.
SweepResult sweep_df_splits(const Dataset& ds, const ElmParams& params_template,
                            const std::vector<std::size_t>& split_points, std::size_t trials);

/// Full cross product of node counts and strategies.
BenchmarkReport sweep_nodes(const Dataset& ds, const ElmParams& params_template,
                            const std::vector<std::size_t>& node_counts,
                            const std::vector<SolverStrategy>& strategies, std::size_t trials,
                            const std::string& machine = "", const std::string& dataset_name = "");

/// format is "json" or "csv".
void emit_report(const BenchmarkReport& report, const std::string& format,
                 const std::string& path);

/// One tab-separated file per strategy (path_prefix.<strategy>.tsv) with
/// columns: hidden_nodes, mean, min, max seconds.
std::vector<std::string> emit_plot_data(const BenchmarkReport& report,
                                        const std::string& path_prefix);

std::string report_to_json(const BenchmarkReport& report);
BenchmarkReport report_from_json(const std::string& text);

}  // namespace rbpelm
