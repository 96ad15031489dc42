#include "kgsum/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "kgsum/error.hpp"
#include "kgsum/io.hpp"
#include "kgsum/summary.hpp"

namespace kgsum {

namespace {

namespace fs = std::filesystem;

std::string fmt_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Short form for file names and the lambda CSV column (0.01, 1, 100, ...).
std::string fmt_short(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s) {
        unsigned char u = static_cast<unsigned char>(c);
        out += (std::isalnum(u) || c == '-' || c == '_' || c == '.') ? c : '_';
    }
    return out.empty() ? std::string("_") : out;
}

KnowledgeGraph load_graph_cfg(const RunConfig& cfg) {
    if (cfg.ratings_path.empty() || cfg.kinds_path.empty() || cfg.triples_path.empty())
        fail(ErrorCode::InvalidConfig,
             "this command needs --ratings, --triples and --kinds");
    return load_graph(cfg.ratings_path, cfg.triples_path, cfg.kinds_path, cfg.weights,
                      cfg.attr);
}

std::vector<std::string> subject_labels(const RunConfig& cfg) {
    std::vector<std::string> labels = cfg.subjects;
    if (!cfg.subjects_path.empty()) {
        auto more = load_subjects(cfg.subjects_path);
        labels.insert(labels.end(), more.begin(), more.end());
    }
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (auto& l : labels)
        if (seen.insert(l).second) out.push_back(l);
    if (out.empty())
        fail(ErrorCode::InvalidConfig, "no subjects given (--subject or --subjects-file)");
    return out;
}

// One summarizer invocation unit: a single subject for the centric
// scenarios, the whole group for the group scenarios.
struct SubjectUnit {
    std::string label;
    std::vector<NodeId> ids;
};

std::vector<SubjectUnit> subject_units(const KnowledgeGraph& g, const RunConfig& cfg) {
    auto labels = subject_labels(cfg);
    std::vector<NodeId> ids;
    for (const auto& l : labels) {
        auto v = g.find(l);
        if (!v)
            fail(ErrorCode::EmptyScenario, "subject '" + l + "' is not in the graph");
        ids.push_back(*v);
    }
    std::vector<SubjectUnit> units;
    if (cfg.scenario == ScenarioKind::UserCentric ||
        cfg.scenario == ScenarioKind::ItemCentric) {
        for (std::size_t i = 0; i < labels.size(); ++i)
            units.push_back({labels[i], {ids[i]}});
    } else {
        units.push_back({cfg.group_label, std::move(ids)});
    }
    return units;
}

void check_k_range(const RunConfig& cfg, const ExplanationPathSet& set) {
    if (cfg.k_min < 1 || cfg.k_max < cfg.k_min)
        fail(ErrorCode::InvalidConfig, "k range must satisfy 1 <= k_min <= k_max");
    if (cfg.k_max > set.K)
        fail(ErrorCode::InvalidConfig,
             "k range goes to " + std::to_string(cfg.k_max) + " but the path file has K = " +
                 std::to_string(set.K));
}

std::string summary_file_name(const RunConfig& cfg, const std::string& method,
                              const std::string& subject, int k) {
    return method + "_" + std::string(to_string(cfg.scenario)) + "_" + sanitize(subject) +
           "_k" + std::to_string(k) + "_lambda" + fmt_short(cfg.reweight.lambda) + ".json";
}

void fill_params(SummarySubgraph& s, const RunConfig& cfg, const std::string& subject,
                 int k) {
    s.params.k = k;
    s.params.lambda = cfg.reweight.lambda;
    s.params.scenario = std::string(to_string(cfg.scenario));
    s.params.subject = subject;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    return out;
}

// ---- metrics CSV ---------------------------------------------------------

constexpr std::array<const char*, 6> kPointMetrics = {
    "comprehensibility", "actionability", "diversity", "redundancy", "relevance", "privacy"};

struct GroupAccum {
    // k -> per-metric sums and the number of non-empty explanations behind them.
    std::map<int, std::array<double, 6>> sums;
    std::map<int, int> counts;
    std::vector<double> consistency_values;
};

void accumulate_point(GroupAccum& acc, int k, const MetricsReport& r) {
    auto& s = acc.sums[k];
    s[0] += r.comprehensibility;
    s[1] += r.actionability;
    s[2] += r.diversity;
    s[3] += r.redundancy;
    s[4] += r.relevance;
    s[5] += r.privacy;
    acc.counts[k] += 1;
}

void emit_group_rows(std::ostringstream& csv, const RunConfig& cfg,
                     const std::string& method, const std::string& group,
                     const GroupAccum& acc) {
    const std::string scenario(to_string(cfg.scenario));
    const std::string lambda = fmt_short(cfg.reweight.lambda);
    for (const auto& [k, sums] : acc.sums) {
        const int n = acc.counts.at(k);
        if (n == 0) continue;
        for (std::size_t m = 0; m < kPointMetrics.size(); ++m) {
            csv << scenario << ',' << method << ',' << k << ',' << lambda << ',' << group
                << ',' << kPointMetrics[m] << ',' << fmt_value(sums[m] / n) << '\n';
        }
    }
    if (!acc.consistency_values.empty()) {
        double sum = 0.0;
        for (double v : acc.consistency_values) sum += v;
        csv << scenario << ',' << method << ',' << cfg.k_min << '-' << cfg.k_max << ','
            << lambda << ',' << group << ",consistency,"
            << fmt_value(sum / static_cast<double>(acc.consistency_values.size())) << '\n';
    }
}

std::unordered_map<std::string, std::string> group_map(const RunConfig& cfg) {
    std::unordered_map<std::string, std::string> groups;
    if (!cfg.attributes_path.empty())
        for (const auto& [node, grp] : load_attributes(cfg.attributes_path))
            groups.emplace(node, grp);
    return groups;
}

std::string group_of(const std::unordered_map<std::string, std::string>& groups,
                     const std::string& label) {
    auto it = groups.find(label);
    std::string g = it == groups.end() ? std::string("all") : it->second;
    for (char& c : g)
        if (c == ',') c = '_';
    return g;
}

// Shared frame for evaluate and baseline-evaluate: iterate subjects and ks,
// hand each (unit, k) to `score`, which returns the explanation node set for
// the consistency series plus an optional metrics report (absent for empty
// explanations).
using ScoreFn = std::function<std::optional<MetricsReport>(const SubjectUnit&, int,
                                                           std::vector<NodeId>&)>;

void evaluate_frame(const RunConfig& cfg, const std::vector<SubjectUnit>& units,
                    const std::string& method, const ScoreFn& score,
                    std::ostringstream& csv) {
    auto groups = group_map(cfg);
    std::map<std::string, GroupAccum> accums;  // ordered -> deterministic rows
    const bool want_series = cfg.k_max > cfg.k_min;
    for (const auto& unit : units) {
        GroupAccum& acc = accums[group_of(groups, unit.label)];
        std::vector<std::vector<NodeId>> series;
        for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
            std::vector<NodeId> node_set;
            if (auto report = score(unit, k, node_set)) accumulate_point(acc, k, *report);
            series.push_back(std::move(node_set));
        }
        if (want_series) acc.consistency_values.push_back(consistency(series));
    }
    for (const auto& [group, acc] : accums) emit_group_rows(csv, cfg, method, group, acc);
}

}  // namespace

void run_build(const RunConfig& cfg, std::ostream& out) {
    KnowledgeGraph g = load_graph_cfg(cfg);
    nlohmann::ordered_json j;
    j["nodes"] = g.node_count();
    j["users"] = g.count_of(NodeKind::User);
    j["items"] = g.count_of(NodeKind::Item);
    j["external"] = g.count_of(NodeKind::External);
    j["edges"] = g.edge_count();
    j["rating_edges"] = g.rating_edge_count();
    j["attribute_edges"] = g.edge_count() - g.rating_edge_count();
    j["relations"] = g.relation_names();
    if (!cfg.paths_path.empty()) {
        std::vector<PathReject> rejected;
        ExplanationPathSet set = parse_paths(cfg.paths_path, g, &rejected);
        j["paths"] = set.paths.size();
        j["paths_rejected"] = rejected.size();
        j["K"] = set.K;
    }
    out << j.dump(2) << "\n";
}

std::vector<std::string> run_summarize(const RunConfig& cfg) {
    KnowledgeGraph g = load_graph_cfg(cfg);
    if (cfg.paths_path.empty())
        fail(ErrorCode::InvalidConfig, "summarize needs --paths");
    ExplanationPathSet set = parse_paths(cfg.paths_path, g);
    check_k_range(cfg, set);
    if (!cfg.run_st && !cfg.run_pcst)
        fail(ErrorCode::InvalidConfig, "no method selected");
    auto units = subject_units(g, cfg);
    fs::create_directories(cfg.out_dir);

    std::vector<std::string> written;
    for (const auto& unit : units) {
        for (int k = cfg.k_min; k <= cfg.k_max; ++k) {
            ScenarioSpec sc = derive_scenario(set, cfg.scenario, unit.ids, k);
            std::vector<NodeId> terminals = terminal_set(sc);
            const bool need_weights = cfg.run_st || cfg.prize_mode == PrizeMode::Weighted;
            WorkingWeights ww;
            if (need_weights) ww = adjust_weights(g, sc, cfg.reweight);
            if (cfg.run_st) {
                SummarySubgraph s = steiner_summary(g, ww, terminals, cfg.steiner);
                fill_params(s, cfg, unit.label, k);
                std::string path =
                    cfg.out_dir + "/" + summary_file_name(cfg, "st", unit.label, k);
                write_text_file(path, to_json(s, g));
                written.push_back(std::move(path));
            }
            if (cfg.run_pcst) {
                PrizeAssignment pz = assign_prizes(
                    g, need_weights ? &ww : nullptr, terminals, cfg.prize_mode, cfg.rho,
                    cfg.steiner.epsilon);
                SummarySubgraph s = pcst_summary(g, pz, cfg.pcst_algo);
                fill_params(s, cfg, unit.label, k);
                std::string path =
                    cfg.out_dir + "/" + summary_file_name(cfg, "pcst", unit.label, k);
                write_text_file(path, to_json(s, g));
                written.push_back(std::move(path));
            }
        }
    }
    return written;
}

std::string run_evaluate(const RunConfig& cfg) {
    KnowledgeGraph g = load_graph_cfg(cfg);
    if (cfg.k_min < 1 || cfg.k_max < cfg.k_min)
        fail(ErrorCode::InvalidConfig, "k range must satisfy 1 <= k_min <= k_max");
    auto units = subject_units(g, cfg);
    const std::string dir = cfg.summaries_dir.empty() ? cfg.out_dir : cfg.summaries_dir;
    const bool series = cfg.k_max > cfg.k_min;

    std::ostringstream csv;
    csv << "scenario,method,k,lambda,group,metric,value\n";
    std::vector<std::string> methods;
    if (cfg.run_st) methods.push_back("st");
    if (cfg.run_pcst) methods.push_back("pcst");
    if (methods.empty()) fail(ErrorCode::InvalidConfig, "no method selected");

    for (const auto& method : methods) {
        ScoreFn score = [&](const SubjectUnit& unit, int k,
                            std::vector<NodeId>& node_set) -> std::optional<MetricsReport> {
            std::string path = dir + "/" + summary_file_name(cfg, method, unit.label, k);
            if (!fs::exists(path)) {
                if (series)
                    fail(ErrorCode::SeriesTooShort,
                         "summary for k=" + std::to_string(k) + " is missing: " + path);
                fail(ErrorCode::IoError, "summary file missing: " + path);
            }
            SummarySubgraph s = load_summary(path, g);
            node_set = s.nodes;  // sorted; includes isolated single-node summaries
            Explanation x = Explanation::from_subgraph(s);
            if (x.empty()) return std::nullopt;  // no edges: point metrics undefined
            return point_metrics(x, g, cfg.redundancy_mode);
        };
        evaluate_frame(cfg, units, method, score, csv);
    }

    fs::create_directories(cfg.out_dir);
    std::string out_path = cfg.out_dir + "/metrics.csv";
    write_text_file(out_path, csv.str());
    return out_path;
}

std::string run_baseline_evaluate(const RunConfig& cfg) {
    KnowledgeGraph g = load_graph_cfg(cfg);
    if (cfg.paths_path.empty())
        fail(ErrorCode::InvalidConfig, "baseline-evaluate needs --paths");
    ExplanationPathSet set = parse_paths(cfg.paths_path, g);
    check_k_range(cfg, set);
    auto units = subject_units(g, cfg);

    std::ostringstream csv;
    csv << "scenario,method,k,lambda,group,metric,value\n";
    ScoreFn score = [&](const SubjectUnit& unit, int k,
                        std::vector<NodeId>& node_set) -> std::optional<MetricsReport> {
        ScenarioSpec sc = derive_scenario(set, cfg.scenario, unit.ids, k);
        Explanation x = Explanation::from_paths(g, sc.path_subset);
        node_set = x.unique_nodes;
        if (x.empty()) return std::nullopt;
        return point_metrics(x, g, cfg.redundancy_mode);
    };
    evaluate_frame(cfg, units, "baseline:" + cfg.baseline_name, score, csv);

    fs::create_directories(cfg.out_dir);
    std::string out_path = cfg.out_dir + "/baseline_metrics.csv";
    write_text_file(out_path, csv.str());
    return out_path;
}

namespace {

struct BenchStats {
    double wall_ms;
    std::size_t peak_bytes;
};

BenchStats median_measure(const std::function<void()>& fn, int reps) {
    fn();  // warm-up, excluded
    std::vector<double> walls;
    std::vector<std::size_t> peaks;
    for (int i = 0; i < reps; ++i) {
        Measured m = measure(fn);
        walls.push_back(m.wall_ms);
        peaks.push_back(m.peak_bytes);
    }
    std::sort(walls.begin(), walls.end());
    std::sort(peaks.begin(), peaks.end());
    return {walls[walls.size() / 2], peaks[peaks.size() / 2]};
}

std::vector<NodeId> spaced_users(std::size_t available, std::size_t want) {
    std::vector<NodeId> users;
    if (want == 1) {
        users.push_back(0);
        return users;
    }
    for (std::size_t j = 0; j < want; ++j)
        users.push_back(static_cast<NodeId>(j * (available - 1) / (want - 1)));
    return users;
}

}  // namespace

std::string run_benchmark(const RunConfig& cfg) {
    if (cfg.bench_reps < 1) fail(ErrorCode::InvalidConfig, "need at least one repetition");
    std::ostringstream csv;
    csv << "graph_nodes,graph_edges,group_size,method,prize_mode,k,lambda,rho,reps,"
           "median_wall_ms,median_peak_bytes\n";
    for (std::size_t total : cfg.bench_graph_sizes) {
        SynthSpec sp = cfg.synth;
        sp.total_nodes = total;
        sp.seed = cfg.seed;
        KnowledgeGraph g = generate_synthetic(sp, cfg.weights, cfg.attr);
        const std::size_t nu = g.count_of(NodeKind::User);
        for (std::size_t gs : cfg.bench_group_sizes) {
            if (gs == 0 || gs > nu)
                fail(ErrorCode::InsufficientPopulation,
                     "group size " + std::to_string(gs) + " not available, graph has " +
                         std::to_string(nu) + " users");
            std::vector<NodeId> users = spaced_users(nu, gs);
            ExplanationPathSet set =
                generate_random_paths(g, users, cfg.bench_k, 3, cfg.seed);
            ScenarioSpec sc =
                derive_scenario(set, ScenarioKind::UserGroup, users, cfg.bench_k);
            std::vector<NodeId> terminals = terminal_set(sc);
            WorkingWeights ww = adjust_weights(g, sc, cfg.reweight);

            auto emit = [&](const char* method, const char* prize_mode, BenchStats st) {
                csv << g.node_count() << ',' << g.edge_count() << ',' << gs << ','
                    << method << ',' << prize_mode << ',' << cfg.bench_k << ','
                    << fmt_short(cfg.reweight.lambda) << ',' << fmt_short(cfg.rho) << ','
                    << cfg.bench_reps << ',' << fmt_value(st.wall_ms) << ','
                    << st.peak_bytes << '\n';
            };
            if (cfg.run_st) {
                BenchStats st = median_measure(
                    [&] { steiner_summary(g, ww, terminals, cfg.steiner); },
                    cfg.bench_reps);
                emit("st", "-", st);
            }
            if (cfg.run_pcst) {
                PrizeAssignment pz =
                    assign_prizes(g, &ww, terminals, cfg.prize_mode, cfg.rho,
                                  cfg.steiner.epsilon);
                BenchStats st = median_measure(
                    [&] { pcst_summary(g, pz, cfg.pcst_algo); }, cfg.bench_reps);
                emit("pcst", cfg.prize_mode == PrizeMode::Weighted ? "weighted" : "unit",
                     st);
            }
        }
    }
    fs::create_directories(cfg.out_dir);
    std::string out_path = cfg.out_dir + "/timings.csv";
    write_text_file(out_path, csv.str());
    return out_path;
}

std::vector<std::string> run_synth(const RunConfig& cfg) {
    SynthData d = generate_synthetic_data(cfg.synth);
    fs::create_directories(cfg.out_dir);
    std::vector<std::string> written;

    {
        std::string path = cfg.out_dir + "/kinds.tsv";
        auto out = open_out(path);
        write_kinds(out, d.nodes);
        written.push_back(std::move(path));
    }
    {
        std::string path = cfg.out_dir + "/ratings.csv";
        auto out = open_out(path);
        write_ratings(out, d.nodes, d.ratings);
        written.push_back(std::move(path));
    }
    {
        std::string path = cfg.out_dir + "/triples.tsv";
        auto out = open_out(path);
        write_triples(out, d.nodes, d.triples);
        written.push_back(std::move(path));
    }

    if (cfg.synth_paths_k > 0) {
        KnowledgeGraph g =
            KnowledgeGraph::build(std::move(d.nodes), d.ratings, d.triples.triples,
                                  std::move(d.triples.relation_names), cfg.weights, cfg.attr);
        std::size_t nu = g.count_of(NodeKind::User);
        std::size_t take = cfg.synth_paths_users == 0
                               ? nu
                               : std::min(cfg.synth_paths_users, nu);
        std::vector<NodeId> users;
        for (std::size_t i = 0; i < take; ++i) users.push_back(static_cast<NodeId>(i));
        ExplanationPathSet set = generate_random_paths(g, users, cfg.synth_paths_k,
                                                       cfg.synth_paths_len, cfg.synth.seed);
        std::ostringstream lines;
        for (const ExplanationPath& p : set.paths) {
            nlohmann::ordered_json j;
            j["user"] = g.label(p.user);
            j["item"] = g.label(p.item);
            nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
            for (NodeId v : p.nodes) nodes.push_back(g.label(v));
            j["nodes"] = std::move(nodes);
            j["rank"] = p.rank;
            lines << j.dump() << '\n';
        }
        std::string path = cfg.out_dir + "/paths.jsonl";
        write_text_file(path, lines.str());
        written.push_back(std::move(path));
    }
    return written;
}

std::string run_sample(const RunConfig& cfg) {
    KnowledgeGraph g = load_graph_cfg(cfg);
    std::ostringstream out;
    std::string path;
    if (cfg.sample_mode == SampleMode::Users) {
        if (cfg.attributes_path.empty())
            fail(ErrorCode::InvalidConfig, "user sampling needs --attributes");
        if (cfg.sample_strata.empty())
            fail(ErrorCode::InvalidConfig, "user sampling needs --strata");
        auto attrs = load_attributes(cfg.attributes_path);
        auto samples =
            sample_users(g, attrs, cfg.sample_n_users, cfg.sample_strata, cfg.seed);
        for (const auto& s : samples)
            for (NodeId v : s.users) out << g.label(v) << '\t' << s.label << '\n';
        path = cfg.out_dir + "/sample_users.tsv";
    } else {
        ItemSample s =
            sample_items_by_popularity(g, cfg.sample_n_top, cfg.sample_n_bottom, cfg.seed);
        for (NodeId v : s.popular) out << g.label(v) << "\tpopular\n";
        for (NodeId v : s.unpopular) out << g.label(v) << "\tunpopular\n";
        path = cfg.out_dir + "/sample_items.tsv";
    }
    fs::create_directories(cfg.out_dir);
    write_text_file(path, out.str());
    return path;
}

}  // namespace kgsum
