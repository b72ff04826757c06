#include "rbpelm/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rbpelm {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::json;

TrialRecord one_trial(const Dataset& ds, ElmParams params, const SolverStrategy& strategy,
                      std::uint64_t seed) {
    params.seed = seed;
    auto t0 = Clock::now();
    auto [model, diag] = train(params, ds.x, ds.y, strategy);
    double total = std::chrono::duration<double>(Clock::now() - t0).count();

    TrialRecord rec;
    rec.seed = seed;
    rec.total_seconds = total;
    rec.solve_seconds = diag.solve_seconds;
    rec.hidden_seconds = diag.hidden_seconds;
    rec.accuracy = diag.training_accuracy;
    rec.rank = diag.rank;
    rec.rank_known = diag.rank_known;
    rec.ridge_applied = diag.ridge_applied;
    rec.fallback_to_direct = diag.fallback_to_direct;
    return rec;
}

json stats_to_json(const TrialStats& s) {
    json recs = json::array();
    for (const auto& r : s.records) {
        recs.push_back({{"seed", r.seed},
                        {"total_seconds", r.total_seconds},
                        {"solve_seconds", r.solve_seconds},
                        {"hidden_seconds", r.hidden_seconds},
                        {"accuracy", r.accuracy},
                        {"rank", r.rank},
                        {"rank_known", r.rank_known},
                        {"ridge_applied", r.ridge_applied},
                        {"fallback_to_direct", r.fallback_to_direct}});
    }
    return {{"strategy", s.strategy},
            {"hidden_nodes", s.hidden_nodes},
            {"trials", s.trials},
            {"mean_seconds", s.mean_seconds},
            {"min_seconds", s.min_seconds},
            {"max_seconds", s.max_seconds},
            {"stddev_seconds", s.stddev_seconds},
            {"mean_solve_seconds", s.mean_solve_seconds},
            {"mean_accuracy", s.mean_accuracy},
            {"records", recs}};
}

TrialStats stats_from_json(const json& j) {
    TrialStats s;
    s.strategy = j.at("strategy").get<std::string>();
    s.hidden_nodes = j.at("hidden_nodes").get<std::size_t>();
    s.trials = j.at("trials").get<std::size_t>();
    s.mean_seconds = j.at("mean_seconds").get<double>();
    s.min_seconds = j.at("min_seconds").get<double>();
    s.max_seconds = j.at("max_seconds").get<double>();
    s.stddev_seconds = j.at("stddev_seconds").get<double>();
    s.mean_solve_seconds = j.at("mean_solve_seconds").get<double>();
    s.mean_accuracy = j.at("mean_accuracy").get<double>();
    for (const auto& jr : j.at("records")) {
        TrialRecord r;
        r.seed = jr.at("seed").get<std::uint64_t>();
        r.total_seconds = jr.at("total_seconds").get<double>();
        r.solve_seconds = jr.at("solve_seconds").get<double>();
        r.hidden_seconds = jr.at("hidden_seconds").get<double>();
        r.accuracy = jr.at("accuracy").get<double>();
        r.rank = jr.at("rank").get<std::size_t>();
        r.rank_known = jr.at("rank_known").get<bool>();
        r.ridge_applied = jr.at("ridge_applied").get<bool>();
        r.fallback_to_direct = jr.at("fallback_to_direct").get<bool>();
        s.records.push_back(r);
    }
    return s;
}

}  // namespace

TrialStats run_trials(const Dataset& ds, const ElmParams& params_template,
                      const SolverStrategy& strategy, std::size_t trials) {
    if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");

    one_trial(ds, params_template, strategy, params_template.seed);  // warm-up, discarded

    TrialStats s;
    s.strategy = strategy.describe();
    s.hidden_nodes = params_template.hidden_nodes;
    s.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
        s.records.push_back(one_trial(ds, params_template, strategy, params_template.seed + t));
    }

    double sum = 0.0, sum_solve = 0.0, sum_acc = 0.0;
    s.min_seconds = s.records.front().total_seconds;
    s.max_seconds = s.records.front().total_seconds;
    for (const auto& r : s.records) {
        sum += r.total_seconds;
        sum_solve += r.solve_seconds;
        sum_acc += r.accuracy;
        s.min_seconds = std::min(s.min_seconds, r.total_seconds);
        s.max_seconds = std::max(s.max_seconds, r.total_seconds);
    }
    const double n = static_cast<double>(trials);
    s.mean_seconds = sum / n;
    s.mean_solve_seconds = sum_solve / n;
    s.mean_accuracy = sum_acc / n;
    if (trials > 1) {
        double ss = 0.0;
        for (const auto& r : s.records) {
            double d = r.total_seconds - s.mean_seconds;
            ss += d * d;
        }
        s.stddev_seconds = std::sqrt(ss / (n - 1.0));
    }
    return s;
}

SweepResult sweep_df_splits(const Dataset& ds, const ElmParams& params_template,
                            const std::vector<std::size_t>& split_points, std::size_t trials) {
    if (split_points.empty()) throw std::invalid_argument("sweep_df_splits: no split points");
    for (std::size_t s : split_points) {
        if (s < 1 || s >= params_template.hidden_nodes) {
            throw std::invalid_argument("sweep_df_splits: split " + std::to_string(s) +
                                        " outside (0, " +
                                        std::to_string(params_template.hidden_nodes) + ")");
        }
    }
    SweepResult result;
    for (std::size_t s : split_points) {
        result.stats.push_back(run_trials(ds, params_template, SolverStrategy::df_split(s), trials));
    }
    for (std::size_t i = 1; i < result.stats.size(); ++i) {
        if (result.stats[i].mean_seconds < result.stats[result.best_index].mean_seconds)
            result.best_index = i;
        if (result.stats[i].mean_seconds > result.stats[result.worst_index].mean_seconds)
            result.worst_index = i;
    }
    return result;
}

BenchmarkReport sweep_nodes(const Dataset& ds, const ElmParams& params_template,
                            const std::vector<std::size_t>& node_counts,
                            const std::vector<SolverStrategy>& strategies, std::size_t trials,
                            const std::string& machine, const std::string& dataset_name) {
    if (node_counts.empty() || strategies.empty()) {
        throw std::invalid_argument("sweep_nodes: need at least one node count and one strategy");
    }
    for (std::size_t l : node_counts) {
        if (l > ds.samples()) {
            throw std::invalid_argument("sweep_nodes: node count " + std::to_string(l) +
                                        " exceeds the dataset's " +
                                        std::to_string(ds.samples()) + " samples");
        }
    }
    BenchmarkReport report;
    report.machine = machine;
    report.dataset = {dataset_name, ds.samples(), ds.features(), ds.classes()};
    report.node_counts = node_counts;
    for (std::size_t l : node_counts) {
        ElmParams params = params_template;
        params.hidden_nodes = l;
        for (const auto& strat : strategies) {
            report.stats.push_back(run_trials(ds, params, strat, trials));
        }
    }
    return report;
}

std::string report_to_json(const BenchmarkReport& report) {
    json stats = json::array();
    for (const auto& s : report.stats) stats.push_back(stats_to_json(s));
    json j = {{"schema", 1},
              {"machine", report.machine},
              {"dataset",
               {{"name", report.dataset.name},
                {"samples", report.dataset.samples},
                {"features", report.dataset.features},
                {"classes", report.dataset.classes}}},
              {"node_counts", report.node_counts},
              {"split_points", report.split_points},
              {"stats", stats}};
    return j.dump(2);
}

BenchmarkReport report_from_json(const std::string& text) {
    json j = json::parse(text);
    if (j.at("schema").get<int>() != 1) {
        throw std::runtime_error("report_from_json: unsupported schema version");
    }
    BenchmarkReport report;
    report.machine = j.at("machine").get<std::string>();
    const auto& d = j.at("dataset");
    report.dataset.name = d.at("name").get<std::string>();
    report.dataset.samples = d.at("samples").get<std::size_t>();
    report.dataset.features = d.at("features").get<std::size_t>();
    report.dataset.classes = d.at("classes").get<std::size_t>();
    report.node_counts = j.at("node_counts").get<std::vector<std::size_t>>();
    report.split_points = j.at("split_points").get<std::vector<std::size_t>>();
    for (const auto& js : j.at("stats")) report.stats.push_back(stats_from_json(js));
    return report;
}

void emit_report(const BenchmarkReport& report, const std::string& format,
                 const std::string& path) {
    if (report.stats.empty()) throw std::invalid_argument("emit_report: empty report");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit_report: cannot write " + path);
    if (format == "json") {
        out << report_to_json(report) << '\n';
    } else if (format == "csv") {
        out << "strategy,hidden_nodes,trials,mean_seconds,min_seconds,max_seconds,"
               "stddev_seconds,mean_solve_seconds,mean_accuracy\n";
        out.precision(17);
        for (const auto& s : report.stats) {
            out << s.strategy << ',' << s.hidden_nodes << ',' << s.trials << ','
                << s.mean_seconds << ',' << s.min_seconds << ',' << s.max_seconds << ','
                << s.stddev_seconds << ',' << s.mean_solve_seconds << ',' << s.mean_accuracy
                << '\n';
        }
    } else {
        throw std::invalid_argument("emit_report: unknown format '" + format + "'");
    }
    if (!out) throw std::runtime_error("emit_report: write failed for " + path);
}

std::vector<std::string> emit_plot_data(const BenchmarkReport& report,
                                        const std::string& path_prefix) {
    if (report.stats.empty()) throw std::invalid_argument("emit_plot_data: empty report");
    std::vector<std::string> strategies;
    for (const auto& s : report.stats) {
        if (std::find(strategies.begin(), strategies.end(), s.strategy) == strategies.end()) {
            strategies.push_back(s.strategy);
        }
    }
    std::vector<std::string> paths;
    for (const auto& strat : strategies) {
        std::string safe = strat;
        std::replace(safe.begin(), safe.end(), ':', '-');
        std::string path = path_prefix + "." + safe + ".tsv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("emit_plot_data: cannot write " + path);
        out.precision(17);
        for (const auto& s : report.stats) {
            if (s.strategy != strat) continue;
            out << s.hidden_nodes << '\t' << s.mean_seconds << '\t' << s.min_seconds << '\t'
                << s.max_seconds << '\n';
        }
        if (!out) throw std::runtime_error("emit_plot_data: write failed for " + path);
        paths.push_back(path);
    }
    return paths;
}

}  // namespace rbpelm
