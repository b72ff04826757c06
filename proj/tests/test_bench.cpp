#include "rbpelm/bench.hpp"
#include "rbpelm/checks.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace rbpelm;

namespace {

ElmParams small_params(const Dataset& ds, std::size_t nodes, std::uint64_t seed = 0) {
    return ElmParams{ds.features(), nodes, ds.classes(), Activation::Sigmoid, seed};
}

}  // namespace

TEST_CASE("single trial collapses min, mean and max") {
    Dataset ds = synth(40, 5, 2, 1);
    TrialStats s = run_trials(ds, small_params(ds, 8), SolverStrategy::rank_based(), 1);
    CHECK(s.trials == 1);
    CHECK(s.min_seconds == s.mean_seconds);
    CHECK(s.max_seconds == s.mean_seconds);
    CHECK(s.stddev_seconds == 0.0);
}

TEST_CASE("same base seed reproduces the accuracies") {
    Dataset ds = synth(50, 6, 3, 2);
    TrialStats a = run_trials(ds, small_params(ds, 10, 4), SolverStrategy::direct(), 3);
    TrialStats b = run_trials(ds, small_params(ds, 10, 4), SolverStrategy::direct(), 3);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].accuracy == b.records[i].accuracy);
        CHECK(a.records[i].seed == 4 + i);  // per-trial reseeding from the base
    }
}

TEST_CASE("trial statistics are ordered and accuracies match across strategies") {
    Dataset ds = synth(60, 8, 2, 3);
    for (const auto& strat : {SolverStrategy::df_split(6), SolverStrategy::rank_based()}) {
        TrialStats s = run_trials(ds, small_params(ds, 12), strat, 4);
        CHECK(s.min_seconds <= s.mean_seconds);
        CHECK(s.mean_seconds <= s.max_seconds);
        CHECK(s.stddev_seconds >= 0.0);
    }
    TrialStats df = run_trials(ds, small_params(ds, 12), SolverStrategy::df_split(6), 4);
    TrialStats rb = run_trials(ds, small_params(ds, 12), SolverStrategy::rank_based(), 4);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(df.records[i].accuracy == rb.records[i].accuracy);  // the Table-2 phenomenon
    }
}

TEST_CASE("df split sweep finds best and worst splits") {
    Dataset ds = synth(50, 5, 2, 4);
    ElmParams params = small_params(ds, 12);

    SweepResult single = sweep_df_splits(ds, params, {6}, 2);
    CHECK(single.stats.size() == 1);

    SweepResult sweep = sweep_df_splits(ds, params, {3, 6, 9}, 2);
    CHECK(sweep.stats.size() == 3);
    CHECK(sweep.stats[sweep.worst_index].mean_seconds >=
          sweep.stats[sweep.best_index].mean_seconds);

    // symmetric splits solve the same system: identical accuracy
    CHECK(sweep.stats[0].mean_accuracy == sweep.stats[2].mean_accuracy);

    CHECK_THROWS_AS(sweep_df_splits(ds, params, {12}, 2), std::invalid_argument);
    CHECK_THROWS_AS(sweep_df_splits(ds, params, {}, 2), std::invalid_argument);
}

TEST_CASE("node sweep builds the full cross product") {
    Dataset ds = synth(60, 5, 2, 5);
    std::vector<SolverStrategy> strategies{SolverStrategy::direct(), SolverStrategy::rank_based()};
    BenchmarkReport report =
        sweep_nodes(ds, small_params(ds, 0), {8, 12, 16}, strategies, 2, "test-machine", "synth");
    CHECK(report.stats.size() == 6);
    CHECK(report.dataset.samples == 60);

    BenchmarkReport one = sweep_nodes(ds, small_params(ds, 0), {8}, {SolverStrategy::direct()}, 1);
    CHECK(one.stats.size() == 1);

    CHECK_THROWS_AS(
        sweep_nodes(ds, small_params(ds, 0), {100}, strategies, 1), std::invalid_argument);
}

TEST_CASE("json report round trip is lossless") {
    Dataset ds = synth(40, 4, 2, 6);
    BenchmarkReport report = sweep_nodes(ds, small_params(ds, 0), {6, 10},
                                         {SolverStrategy::rank_based()}, 2, "m", "synth");
    report.split_points = {3, 5};
    std::string text = report_to_json(report);
    BenchmarkReport back = report_from_json(text);
    CHECK(report_to_json(back) == text);
    CHECK(back.stats.size() == report.stats.size());
    CHECK(back.stats[1].records[0].total_seconds == report.stats[1].records[0].total_seconds);
}

TEST_CASE("csv and plot emission shapes") {
    Dataset ds = synth(40, 4, 2, 7);
    BenchmarkReport report =
        sweep_nodes(ds, small_params(ds, 0), {6, 10},
                    {SolverStrategy::direct(), SolverStrategy::rank_based()}, 1, "m", "synth");

    std::string csv_path = "/tmp/rbpelm_test_report.csv";
    emit_report(report, "csv", csv_path);
    std::ifstream in(csv_path);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) ++lines;
    std::remove(csv_path.c_str());
    CHECK(lines == report.stats.size() + 1);  // one header row

    auto paths = emit_plot_data(report, "/tmp/rbpelm_test_plot");
    CHECK(paths.size() == 2);  // one series file per strategy
    for (const auto& p : paths) {
        std::ifstream pin(p);
        std::string row;
        while (std::getline(pin, row)) {
            std::istringstream is(row);
            std::string field;
            std::size_t fields = 0;
            while (std::getline(is, field, '\t')) ++fields;
            CHECK(fields == 4);
        }
        std::remove(p.c_str());
    }

    CHECK_THROWS_AS(emit_report(report, "xml", "/tmp/x"), std::invalid_argument);
    CHECK_THROWS_AS(emit_report(report, "json", "/nonexistent_dir/x.json"), std::runtime_error);
}

TEST_CASE("verification suite passes and catches an injected fault") {
    auto results = run_verification(123, 25);
    CHECK(results.size() >= 8);
    for (const auto& r : results) {
        INFO(r.name);
        CHECK(r.pass);
    }
    bool any_fail = false;
    for (const auto& r : run_verification(123, 5, /*inject_fault=*/true)) {
        if (!r.pass) any_fail = true;
    }
    CHECK(any_fail);
}
