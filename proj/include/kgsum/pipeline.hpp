#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kgsum/graph.hpp"
#include "kgsum/metrics.hpp"
#include "kgsum/paths.hpp"
#include "kgsum/pcst.hpp"
#include "kgsum/reweight.hpp"
#include "kgsum/steiner.hpp"
#include "kgsum/synth.hpp"

namespace kgsum {

enum class SampleMode { Users, Items };

// One fully parsed CLI invocation. The CLI layer owns flag syntax; everything
// here is already typed. Runners throw kgsum::Error on any failure.
struct RunConfig {
    // Input files.
    std::string ratings_path;
    std::string triples_path;
    std::string kinds_path;
    std::string paths_path;
    std::string subjects_path;          // optional subject list file
    std::vector<std::string> subjects;  // explicit --subject labels
    std::string attributes_path;        // node -> stratum/group TSV

    // Scenario.
    ScenarioKind scenario = ScenarioKind::UserCentric;
    std::string group_label = "group";  // subject name for group scenarios
    int k_min = 1;
    int k_max = 10;

    // Methods and parameters.
    bool run_st = true;
    bool run_pcst = true;
    WeightParams weights;
    AttributeWeights attr;
    ReweightParams reweight;
    SteinerParams steiner;
    PrizeMode prize_mode = PrizeMode::Weighted;
    double rho = 1.0;
    PcstAlgo pcst_algo = PcstAlgo::GoemansWilliamson;
    RedundancyMode redundancy_mode = RedundancyMode::Incidence;

    std::uint64_t seed = 1;
    std::string out_dir = ".";

    // evaluate: where summarize wrote its files (defaults to out_dir).
    std::string summaries_dir;
    // baseline-evaluate: method column becomes "baseline:<name>".
    std::string baseline_name = "paths";

    // synth extras: optionally also emit random paths for the first
    // synth_paths_users users (0 = all) with synth_paths_k paths each.
    SynthSpec synth;
    int synth_paths_k = 0;  // 0 = no paths file
    int synth_paths_len = 3;
    std::size_t synth_paths_users = 0;

    // benchmark.
    std::vector<std::size_t> bench_graph_sizes = {10000};
    std::vector<std::size_t> bench_group_sizes = {10, 25, 50, 100};
    int bench_k = 10;
    int bench_reps = 5;

    // sample.
    SampleMode sample_mode = SampleMode::Users;
    std::size_t sample_n_users = 100;
    std::vector<std::string> sample_strata;
    std::size_t sample_n_top = 50;
    std::size_t sample_n_bottom = 50;
};

// build: load + validate the graph (and paths when given), print a stats
// JSON to `out`.
void run_build(const RunConfig& cfg, std::ostream& out);

// summarize: one summary JSON file per (subject, method, k); returns the
// paths of the files written, in write order.
std::vector<std::string> run_summarize(const RunConfig& cfg);

// evaluate / baseline-evaluate: long-format metrics CSV
// (scenario,method,k,lambda,group,metric,value); per-group means over
// subjects; consistency over each full k series (k column "<kmin>-<kmax>").
// evaluate scores summary files; baseline-evaluate scores the raw path sets.
// Returns the CSV path written (metrics.csv / baseline_metrics.csv).
std::string run_evaluate(const RunConfig& cfg);
std::string run_baseline_evaluate(const RunConfig& cfg);

// benchmark: synthetic graphs x group sizes x methods; median-of-reps wall
// time and peak heap per cell, warm-up excluded. Writes timings.csv (the one
// output that is legitimately not byte-reproducible) and returns its path.
std::string run_benchmark(const RunConfig& cfg);

// synth: emit ratings.csv / triples.tsv / kinds.tsv (and optionally
// paths.jsonl) into out_dir; returns the file paths written.
std::vector<std::string> run_synth(const RunConfig& cfg);

// sample: subject TSV (label<TAB>group) for user strata or item popularity
// halves; returns the file path written.
std::string run_sample(const RunConfig& cfg);

}  // namespace kgsum
