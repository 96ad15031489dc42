#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "kgsum/error.hpp"
#include "kgsum/pipeline.hpp"

namespace {

using kgsum::ErrorCode;
using kgsum::RunConfig;

// String-valued flags that map onto enums/ranges after parsing. CLI11 does
// the membership checks, so the conversions below cannot fail.
struct RawFlags {
    std::string scenario = "user";
    std::string method = "both";
    std::string k_spec = "1..10";
    std::string count_mode = "per-target";
    std::string prize_mode = "weighted";
    std::string pcst_algo = "gw";
    std::string redundancy = "incidence";
    std::string sample_mode;
    std::vector<std::string> relation_weights;
};

void parse_k_spec(const std::string& spec, RunConfig& cfg) {
    try {
        auto pos = spec.find("..");
        if (pos == std::string::npos) {
            cfg.k_min = cfg.k_max = std::stoi(spec);
        } else {
            cfg.k_min = std::stoi(spec.substr(0, pos));
            cfg.k_max = std::stoi(spec.substr(pos + 2));
        }
    } catch (const std::exception&) {
        kgsum::fail(ErrorCode::InvalidConfig, "cannot parse k range '" + spec + "'");
    }
}

void apply_raw_flags(const RawFlags& raw, RunConfig& cfg) {
    if (raw.scenario == "user") cfg.scenario = kgsum::ScenarioKind::UserCentric;
    else if (raw.scenario == "item") cfg.scenario = kgsum::ScenarioKind::ItemCentric;
    else if (raw.scenario == "user-group") cfg.scenario = kgsum::ScenarioKind::UserGroup;
    else cfg.scenario = kgsum::ScenarioKind::ItemGroup;

    cfg.run_st = raw.method != "pcst";
    cfg.run_pcst = raw.method != "st";
    parse_k_spec(raw.k_spec, cfg);
    cfg.reweight.count = raw.count_mode == "per-path" ? kgsum::CoverageCount::PerPath
                                                      : kgsum::CoverageCount::PerTarget;
    cfg.prize_mode = raw.prize_mode == "unit" ? kgsum::PrizeMode::Unit
                                              : kgsum::PrizeMode::Weighted;
    cfg.pcst_algo = raw.pcst_algo == "paper-prim" ? kgsum::PcstAlgo::PaperPrim
                                                  : kgsum::PcstAlgo::GoemansWilliamson;
    cfg.redundancy_mode = raw.redundancy == "multinode" ? kgsum::RedundancyMode::MultiNode
                                                        : kgsum::RedundancyMode::Incidence;
    cfg.sample_mode = raw.sample_mode == "items" ? kgsum::SampleMode::Items
                                                 : kgsum::SampleMode::Users;
    for (const std::string& rw : raw.relation_weights) {
        auto eq = rw.find('=');
        double w = 0.0;
        bool ok = eq != std::string::npos && eq > 0;
        if (ok) {
            try {
                w = std::stod(rw.substr(eq + 1));
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (!ok)
            kgsum::fail(ErrorCode::InvalidConfig,
                        "--relation-weight expects name=value, got '" + rw + "'");
        cfg.attr.per_relation[rw.substr(0, eq)] = w;
    }
    cfg.synth.seed = cfg.seed;
}

void add_graph_opts(CLI::App* cmd, RunConfig& cfg, RawFlags& raw) {
    cmd->add_option("--ratings", cfg.ratings_path, "ratings CSV: user,item,rating,timestamp");
    cmd->add_option("--triples", cfg.triples_path, "attribute triples TSV: head<TAB>relation<TAB>tail");
    cmd->add_option("--kinds", cfg.kinds_path, "node kinds TSV: node<TAB>user|item|external");
    cmd->add_option("--beta1", cfg.weights.beta1, "rating coefficient of the edge weight");
    cmd->add_option("--beta2", cfg.weights.beta2, "recency coefficient of the edge weight");
    cmd->add_option("--gamma", cfg.weights.gamma, "recency decay rate");
    cmd->add_option("--t0", cfg.weights.t0, "recency reference timestamp");
    cmd->add_option("--attr-weight", cfg.attr.default_weight,
                    "default weight of attribute edges");
    cmd->add_option("--relation-weight", raw.relation_weights,
                    "per-relation attribute weight override, name=value (repeatable)");
}

void add_scenario_opts(CLI::App* cmd, RunConfig& cfg, RawFlags& raw) {
    cmd->add_option("--paths", cfg.paths_path, "explanation paths JSONL");
    cmd->add_option("--scenario", raw.scenario, "scenario kind")
        ->check(CLI::IsMember({"user", "item", "user-group", "item-group"}));
    cmd->add_option("--subject", cfg.subjects, "subject node label (repeatable)");
    cmd->add_option("--subjects-file", cfg.subjects_path, "file with one subject label per line");
    cmd->add_option("--group-label", cfg.group_label, "name for the group in outputs");
    cmd->add_option("--k", raw.k_spec, "recommendation cutoff, single value or min..max");
}

void add_method_opts(CLI::App* cmd, RunConfig& cfg, RawFlags& raw) {
    cmd->add_option("--method", raw.method, "summarizer selection")
        ->check(CLI::IsMember({"st", "pcst", "both"}));
    cmd->add_option("--lambda", cfg.reweight.lambda, "path-coverage boost strength");
    cmd->add_option("--delta", cfg.reweight.delta, "additive floor on base weights");
    cmd->add_option("--count-mode", raw.count_mode, "coverage counting basis")
        ->check(CLI::IsMember({"per-target", "per-path"}));
    cmd->add_option("--epsilon", cfg.steiner.epsilon, "cost-transform offset");
    cmd->add_option("--prize-mode", raw.prize_mode, "PCST prize assignment")
        ->check(CLI::IsMember({"weighted", "unit"}));
    cmd->add_option("--rho", cfg.rho, "unit-mode terminal prize");
    cmd->add_option("--pcst-algo", raw.pcst_algo, "PCST algorithm")
        ->check(CLI::IsMember({"gw", "paper-prim"}));
}

void add_common_opts(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--seed", cfg.seed, "RNG seed for anything randomized");
    cmd->add_option("--out", cfg.out_dir, "output directory")->envname("KGSUM_OUT");
}

int fail_exit(const kgsum::Error& e) {
    nlohmann::ordered_json j;
    j["error"] = std::string(kgsum::to_string(e.code()));
    j["message"] = e.what();
    if (e.line() >= 0) j["line"] = e.line();
    std::cerr << j.dump() << "\n";
    return e.is_io() ? 1 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Explanation summarizer over knowledge graphs: Steiner-tree and "
                 "prize-collecting summaries of recommendation paths, metrics, and "
                 "benchmark tooling"};
    app.require_subcommand(1);

    RunConfig cfg;
    RawFlags raw;

    CLI::App* build = app.add_subcommand("build", "load a graph and print its statistics");
    add_graph_opts(build, cfg, raw);
    build->add_option("--paths", cfg.paths_path, "also validate this paths JSONL");
    add_common_opts(build, cfg);

    CLI::App* summarize =
        app.add_subcommand("summarize", "write summary JSON files for a scenario sweep");
    add_graph_opts(summarize, cfg, raw);
    add_scenario_opts(summarize, cfg, raw);
    add_method_opts(summarize, cfg, raw);
    add_common_opts(summarize, cfg);

    CLI::App* evaluate =
        app.add_subcommand("evaluate", "score existing summaries into metrics.csv");
    add_graph_opts(evaluate, cfg, raw);
    add_scenario_opts(evaluate, cfg, raw);
    add_method_opts(evaluate, cfg, raw);
    evaluate->add_option("--summaries-dir", cfg.summaries_dir,
                         "where summarize wrote its files (default: --out)");
    evaluate->add_option("--attributes", cfg.attributes_path,
                         "subject group TSV for per-group aggregation");
    evaluate->add_option("--redundancy", raw.redundancy, "redundancy counter")
        ->check(CLI::IsMember({"incidence", "multinode"}));
    add_common_opts(evaluate, cfg);

    CLI::App* baseline = app.add_subcommand(
        "baseline-evaluate", "score the raw path sets into baseline_metrics.csv");
    add_graph_opts(baseline, cfg, raw);
    add_scenario_opts(baseline, cfg, raw);
    baseline->add_option("--baseline-name", cfg.baseline_name,
                         "method column becomes baseline:<name>");
    baseline->add_option("--attributes", cfg.attributes_path,
                         "subject group TSV for per-group aggregation");
    baseline->add_option("--redundancy", raw.redundancy, "redundancy counter")
        ->check(CLI::IsMember({"incidence", "multinode"}));
    add_common_opts(baseline, cfg);

    CLI::App* benchmark = app.add_subcommand(
        "benchmark", "time the summarizers on synthetic graphs into timings.csv");
    add_method_opts(benchmark, cfg, raw);
    benchmark->add_option("--graph-sizes", cfg.bench_graph_sizes,
                          "nominal synthetic node totals");
    benchmark->add_option("--group-sizes", cfg.bench_group_sizes, "user group sizes");
    benchmark->add_option("--bench-k", cfg.bench_k, "paths per user");
    benchmark->add_option("--reps", cfg.bench_reps, "measured repetitions per cell");
    add_common_opts(benchmark, cfg);

    CLI::App* synth =
        app.add_subcommand("synth", "generate a synthetic graph in the standard formats");
    synth->add_option("--nodes", cfg.synth.total_nodes, "nominal node total");
    synth->add_option("--edges", cfg.synth.target_total_edges,
                      "edge total (default: derived from the node total)");
    synth->add_option("--user-frac", cfg.synth.user_fraction, "user class fraction");
    synth->add_option("--item-frac", cfg.synth.item_fraction, "item class fraction");
    synth->add_option("--external-frac", cfg.synth.external_fraction,
                      "external class fraction");
    synth->add_option("--tmin", cfg.synth.t_min, "earliest rating timestamp");
    synth->add_option("--tmax", cfg.synth.t_max, "latest rating timestamp");
    synth->add_option("--gen-paths", cfg.synth_paths_k,
                      "also emit this many random paths per user (0 = none)");
    synth->add_option("--path-length", cfg.synth_paths_len, "edges per generated path");
    synth->add_option("--paths-users", cfg.synth_paths_users,
                      "limit path generation to the first N users (0 = all)");
    add_common_opts(synth, cfg);

    CLI::App* sample =
        app.add_subcommand("sample", "select evaluation subjects (users or items)");
    add_graph_opts(sample, cfg, raw);
    sample->add_option("mode", raw.sample_mode, "what to sample")
        ->required()
        ->check(CLI::IsMember({"users", "items"}));
    sample->add_option("--attributes", cfg.attributes_path, "user stratum TSV");
    sample->add_option("--strata", cfg.sample_strata, "stratum labels to sample from");
    sample->add_option("--n", cfg.sample_n_users, "users per stratum");
    sample->add_option("--top", cfg.sample_n_top, "most-rated items to take");
    sample->add_option("--bottom", cfg.sample_n_bottom, "least-rated items to take");
    add_common_opts(sample, cfg);

    CLI11_PARSE(app, argc, argv);

    try {
        apply_raw_flags(raw, cfg);
        if (build->parsed()) {
            kgsum::run_build(cfg, std::cout);
        } else if (summarize->parsed()) {
            for (const std::string& path : kgsum::run_summarize(cfg))
                std::cout << path << "\n";
        } else if (evaluate->parsed()) {
            std::cout << kgsum::run_evaluate(cfg) << "\n";
        } else if (baseline->parsed()) {
            std::cout << kgsum::run_baseline_evaluate(cfg) << "\n";
        } else if (benchmark->parsed()) {
            std::cout << kgsum::run_benchmark(cfg) << "\n";
        } else if (synth->parsed()) {
            for (const std::string& path : kgsum::run_synth(cfg))
                std::cout << path << "\n";
        } else if (sample->parsed()) {
            std::cout << kgsum::run_sample(cfg) << "\n";
        }
    } catch (const kgsum::Error& e) {
        return fail_exit(e);
    } catch (const std::exception& e) {
        nlohmann::ordered_json j;
        j["error"] = "internal";
        j["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return 2;
    }
    return 0;
}
