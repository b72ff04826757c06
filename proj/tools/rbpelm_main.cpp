#include "rbpelm/bench.hpp"
#include "rbpelm/checks.hpp"
#include "rbpelm/data.hpp"
#include "rbpelm/elm.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace rbpelm;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DatasetOptions {
    std::string synth_spec;
    std::string data_path;
    std::string format = "csv";
    std::string label_col = "last";
    bool has_header = false;
};

void add_dataset_flags(CLI::App* cmd, DatasetOptions& opts) {
    auto* synth_opt = cmd->add_option("--synth", opts.synth_spec,
                                      "synthetic dataset spec NxnxC (instances x features x classes)");
    auto* data_opt = cmd->add_option("--data", opts.data_path, "dataset file path");
    cmd->add_option("--format", opts.format, "dataset file format: csv or libsvm")
        ->check(CLI::IsMember({"csv", "libsvm"}));
    cmd->add_option("--label-col", opts.label_col, "label column: 'last' or a 0-based index");
    cmd->add_flag("--header", opts.has_header, "csv file has a header row");
    synth_opt->excludes(data_opt);
}

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what) {
    std::vector<std::size_t> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            std::size_t used = 0;
            long v = std::stol(tok, &used);
            if (used != tok.size() || v < 1) throw std::invalid_argument(tok);
            out.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw UsageError("invalid " + what + " entry '" + tok + "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw UsageError("empty " + what + " list");
    return out;
}

Dataset load_dataset(const DatasetOptions& opts, std::uint64_t seed, std::string& name) {
    if (!opts.synth_spec.empty()) {
        auto dims = [&] {
            std::vector<std::size_t> d;
            std::size_t pos = 0;
            std::string spec = opts.synth_spec;
            while (true) {
                std::size_t x = spec.find('x', pos);
                std::string tok = spec.substr(pos, x == std::string::npos ? x : x - pos);
                std::size_t used = 0;
                long v = 0;
                try {
                    v = std::stol(tok, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != tok.size() || v < 1) {
                    throw UsageError("invalid synth spec '" + spec + "', expected NxnxC");
                }
                d.push_back(static_cast<std::size_t>(v));
                if (x == std::string::npos) break;
                pos = x + 1;
            }
            return d;
        }();
        if (dims.size() != 3) {
            throw UsageError("invalid synth spec '" + opts.synth_spec + "', expected NxnxC");
        }
        name = "synth-" + opts.synth_spec;
        return synth(dims[0], dims[1], dims[2], seed);
    }
    if (opts.data_path.empty()) {
        throw UsageError("no dataset given: use --data or --synth");
    }
    name = opts.data_path;
    Dataset ds;
    if (opts.format == "libsvm") {
        ds = load_libsvm(opts.data_path);
    } else {
        int label = -1;
        if (opts.label_col != "last") {
            try {
                label = std::stoi(opts.label_col);
            } catch (const std::exception&) {
                throw UsageError("invalid --label-col '" + opts.label_col + "'");
            }
        }
        ds = load_csv(opts.data_path, label, opts.has_header);
    }
    return normalize(ds);
}

SolverStrategy parse_strategy(const std::string& text) {
    if (text == "direct") return SolverStrategy::direct();
    if (text == "rank") return SolverStrategy::rank_based();
    if (text.rfind("rank:", 0) == 0) {
        try {
            double tol = std::stod(text.substr(5));
            if (tol < 0.0) throw std::invalid_argument(text);
            return SolverStrategy::rank_based(tol);
        } catch (const std::exception&) {
            throw UsageError("invalid rank tolerance in '" + text + "'");
        }
    }
    if (text.rfind("df:", 0) == 0) {
        try {
            long split = std::stol(text.substr(3));
            if (split < 1) throw std::invalid_argument(text);
            return SolverStrategy::df_split(static_cast<std::size_t>(split));
        } catch (const std::exception&) {
            throw UsageError("invalid df split in '" + text + "' (need df:<split>, split >= 1)");
        }
    }
    throw UsageError("unknown strategy '" + text +
                     "' (use direct, df:<split>, df-sweep[:a,b,c] or rank[:tol])");
}

struct StrategySpec {
    bool is_sweep = false;
    std::vector<std::size_t> sweep_splits;  // empty = defaults per node count
    SolverStrategy strategy;                // when !is_sweep
};

/// Splits a strategies option on commas; the integers after "df-sweep:"
/// belong to the sweep, not to the list.
std::vector<StrategySpec> parse_strategy_list(const std::string& text) {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t comma = text.find(',', pos);
        tokens.push_back(text.substr(pos, comma == std::string::npos ? comma : comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    std::vector<StrategySpec> specs;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const std::string& tok = tokens[i];
        if (tok == "df-sweep" || tok.rfind("df-sweep:", 0) == 0) {
            StrategySpec spec;
            spec.is_sweep = true;
            std::string first = tok.size() > 9 ? tok.substr(9) : "";
            auto eat_int = [&](const std::string& t) {
                try {
                    std::size_t used = 0;
                    long v = std::stol(t, &used);
                    if (used != t.size() || v < 1) return false;
                    spec.sweep_splits.push_back(static_cast<std::size_t>(v));
                    return true;
                } catch (const std::exception&) {
                    return false;
                }
            };
            if (!first.empty() && !eat_int(first)) {
                throw UsageError("invalid df-sweep split '" + first + "'");
            }
            while (!first.empty() && i + 1 < tokens.size() && eat_int(tokens[i + 1])) ++i;
            specs.push_back(std::move(spec));
        } else {
            specs.push_back({false, {}, parse_strategy(tok)});
        }
    }
    if (specs.empty()) throw UsageError("empty strategies list");
    return specs;
}

std::vector<std::size_t> default_sweep_splits(std::size_t nodes) {
    if (nodes < 2) throw UsageError("df-sweep needs at least 2 hidden nodes");
    std::vector<std::size_t> splits{std::max<std::size_t>(1, nodes / 10), nodes / 2,
                                    std::min(nodes - 1, (nodes * 9) / 10)};
    std::sort(splits.begin(), splits.end());
    splits.erase(std::unique(splits.begin(), splits.end()), splits.end());
    return splits;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("RBP_ELM_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError(std::string("invalid RBP_ELM_SEED value '") + env + "'");
        }
    }
    return 0;
}

int cmd_train(const DatasetOptions& data_opts, std::size_t nodes, const std::string& strategy_str,
              std::optional<std::uint64_t> seed_opt, bool as_json) {
    SolverStrategy strategy = parse_strategy(strategy_str);
    std::uint64_t seed = seed_opt ? *seed_opt : default_seed();
    std::string name;
    Dataset ds = load_dataset(data_opts, seed, name);
    if (strategy.kind == SolverStrategy::Kind::DfSplit && strategy.split_index >= nodes) {
        throw UsageError("df split " + std::to_string(strategy.split_index) +
                         " must be below the node count " + std::to_string(nodes));
    }
    ElmParams params{ds.features(), nodes, ds.classes(), Activation::Sigmoid, seed};
    auto [model, diag] = train(params, ds.x, ds.y, strategy);

    if (as_json) {
        nlohmann::json j = {{"schema", 1},
                            {"dataset", name},
                            {"samples", ds.samples()},
                            {"features", ds.features()},
                            {"classes", ds.classes()},
                            {"hidden_nodes", nodes},
                            {"strategy", diag.strategy},
                            {"rank", diag.rank_known ? nlohmann::json(diag.rank) : nlohmann::json()},
                            {"split", {diag.split_lo, diag.split_hi}},
                            {"ridge_applied", diag.ridge_applied},
                            {"fallback_to_direct", diag.fallback_to_direct},
                            {"hidden_seconds", diag.hidden_seconds},
                            {"solve_seconds", diag.solve_seconds},
                            {"training_accuracy", diag.training_accuracy}};
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "dataset:            " << name << " (" << ds.samples() << " x "
                  << ds.features() << ", " << ds.classes() << " classes)\n";
        std::cout << "strategy:           " << diag.strategy << '\n';
        if (diag.rank_known) std::cout << "rank:               " << diag.rank << '\n';
        std::cout << "split:              (" << diag.split_lo << ", " << diag.split_hi << ")\n";
        std::cout << "ridge applied:      " << (diag.ridge_applied ? "yes" : "no") << '\n';
        std::cout << "fallback to direct: " << (diag.fallback_to_direct ? "yes" : "no") << '\n';
        std::cout << "hidden seconds:     " << diag.hidden_seconds << '\n';
        std::cout << "solve seconds:      " << diag.solve_seconds << '\n';
        std::cout << "training accuracy:  " << diag.training_accuracy << '\n';
    }
    return 0;
}

int cmd_bench(const DatasetOptions& data_opts, const std::string& nodes_str,
              const std::string& strategies_str, std::size_t trials,
              std::optional<std::uint64_t> seed_opt, const std::string& machine,
              const std::string& out_path, const std::string& out_format,
              const std::string& plot_prefix) {
    std::vector<std::size_t> node_counts = parse_size_list(nodes_str, "node count");
    std::vector<StrategySpec> specs = parse_strategy_list(strategies_str);
    std::uint64_t seed = seed_opt ? *seed_opt : default_seed();

    std::string name;
    Dataset ds = load_dataset(data_opts, seed, name);

    BenchmarkReport report;
    report.machine = machine;
    report.dataset = {name, ds.samples(), ds.features(), ds.classes()};
    report.node_counts = node_counts;

    struct SweepMark {
        std::string best, worst;
        std::size_t nodes;
    };
    std::vector<SweepMark> sweep_marks;

    for (std::size_t nodes : node_counts) {
        ElmParams params{ds.features(), nodes, ds.classes(), Activation::Sigmoid, seed};
        for (const auto& spec : specs) {
            if (spec.is_sweep) {
                std::vector<std::size_t> splits =
                    spec.sweep_splits.empty() ? default_sweep_splits(nodes) : spec.sweep_splits;
                for (std::size_t s : splits) {
                    if (s >= nodes) {
                        throw UsageError("df-sweep split " + std::to_string(s) +
                                         " must be below the node count " + std::to_string(nodes));
                    }
                }
                for (std::size_t s : splits) {
                    if (std::find(report.split_points.begin(), report.split_points.end(), s) ==
                        report.split_points.end()) {
                        report.split_points.push_back(s);
                    }
                }
                SweepResult sweep = sweep_df_splits(ds, params, splits, trials);
                sweep_marks.push_back({sweep.stats[sweep.best_index].strategy,
                                       sweep.stats[sweep.worst_index].strategy, nodes});
                for (auto& st : sweep.stats) report.stats.push_back(std::move(st));
            } else {
                if (spec.strategy.kind == SolverStrategy::Kind::DfSplit &&
                    spec.strategy.split_index >= nodes) {
                    throw UsageError("df split " + std::to_string(spec.strategy.split_index) +
                                     " must be below the node count " + std::to_string(nodes));
                }
                report.stats.push_back(run_trials(ds, params, spec.strategy, trials));
            }
        }
    }

    std::printf("%-12s %8s %8s %12s %12s %12s %10s\n", "strategy", "nodes", "trials",
                "mean(s)", "min(s)", "max(s)", "accuracy");
    for (const auto& s : report.stats) {
        std::printf("%-12s %8zu %8zu %12.4f %12.4f %12.4f %10.4f\n", s.strategy.c_str(),
                    s.hidden_nodes, s.trials, s.mean_seconds, s.min_seconds, s.max_seconds,
                    s.mean_accuracy);
    }
    for (const auto& mark : sweep_marks) {
        std::printf("df-sweep @ %zu nodes: best split %s, worst split %s (by mean time)\n",
                    mark.nodes, mark.best.c_str(), mark.worst.c_str());
    }

    if (!out_path.empty()) {
        emit_report(report, out_format, out_path);
        std::printf("report written to %s\n", out_path.c_str());
    }
    if (!plot_prefix.empty()) {
        for (const auto& p : emit_plot_data(report, plot_prefix)) {
            std::printf("plot series written to %s\n", p.c_str());
        }
    }
    return 0;
}

int cmd_verify(std::uint64_t seed, std::size_t cases, bool inject_fault) {
    auto results = run_verification(seed, cases, inject_fault);
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("%-34s max error %.3e (tolerance %.1e)  %s", r.name.c_str(), r.max_error,
                    r.tolerance, r.pass ? "PASS" : "FAIL");
        if (!r.pass) {
            std::printf("  [replay seed %llu]", static_cast<unsigned long long>(r.failing_seed));
            all_pass = false;
        }
        std::printf("\n");
    }
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-hidden-layer ELM trainer with direct, split-based and rank-based "
                 "output-weight solvers"};
    app.require_subcommand(1);

    // train
    auto* train_cmd = app.add_subcommand("train", "train one model and print diagnostics");
    DatasetOptions train_data;
    add_dataset_flags(train_cmd, train_data);
    std::size_t train_nodes = 0;
    std::string train_strategy = "rank";
    std::optional<std::uint64_t> train_seed;
    bool train_json = false;
    train_cmd->add_option("--nodes", train_nodes, "hidden node count")->required();
    train_cmd->add_option("--strategy", train_strategy,
                          "direct | df:<split> | rank[:tol]");
    train_cmd->add_option("--seed", train_seed, "random seed (default: RBP_ELM_SEED or 0)");
    train_cmd->add_flag("--json", train_json, "emit diagnostics as JSON");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "repeated-trial timing benchmark");
    DatasetOptions bench_data;
    add_dataset_flags(bench_cmd, bench_data);
    std::string bench_nodes, bench_strategies = "df-sweep,rank";
    std::size_t bench_trials = 50;
    std::optional<std::uint64_t> bench_seed;
    std::string bench_machine, bench_out, bench_format = "json", bench_plot;
    bench_cmd->add_option("--nodes", bench_nodes, "comma-separated hidden node counts")
        ->required();
    bench_cmd->add_option("--strategies", bench_strategies,
                          "comma-separated: direct, df:<split>, df-sweep[:a,b,c], rank[:tol]");
    bench_cmd->add_option("--trials", bench_trials, "trials per cell (default 50)");
    bench_cmd->add_option("--seed", bench_seed, "base seed (default: RBP_ELM_SEED or 0)");
    bench_cmd->add_option("--machine", bench_machine, "machine descriptor recorded in the report");
    bench_cmd->add_option("--out", bench_out, "report output path");
    bench_cmd->add_option("--report-format", bench_format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    bench_cmd->add_option("--plot-data", bench_plot, "prefix for tab-separated plot series");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the randomized property suites");
    std::uint64_t verify_seed = 42;
    std::size_t verify_cases = 200;
    bool verify_fault = false;
    verify_cmd->add_option("--seed", verify_seed, "suite seed (default 42)");
    verify_cmd->add_option("--cases", verify_cases, "random instances per suite (default 200)");
    verify_cmd->add_flag("--inject-fault", verify_fault)->group("");  // negative control, hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (train_cmd->parsed()) {
            return cmd_train(train_data, train_nodes, train_strategy, train_seed, train_json);
        }
        if (bench_cmd->parsed()) {
            return cmd_bench(bench_data, bench_nodes, bench_strategies, bench_trials, bench_seed,
                             bench_machine, bench_out, bench_format, bench_plot);
        }
        if (verify_cmd->parsed()) {
            return cmd_verify(verify_seed, verify_cases, verify_fault);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
