#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "helpers.hpp"
#include "kgsum/io.hpp"
#include "kgsum/pipeline.hpp"
#include "kgsum/summary.hpp"

using namespace kgsum;
using kgtest::thrown_code;
namespace fs = std::filesystem;

namespace {

std::string data_dir() {
    const char* env = std::getenv("KGSUM_TEST_DATA");
    return env ? env : "tests/data";
}

std::string films() { return data_dir() + "/films"; }

// A 12-node film graph with one strong rating (u1 -> ulysses_gaze at 5, all
// others at 1) and three explanation paths for u1, so every k in 1..3 has a
// unique best summary that tests can pin down exactly.
RunConfig films_config(const std::string& out) {
    RunConfig cfg;
    cfg.ratings_path = films() + "/ratings.csv";
    cfg.triples_path = films() + "/triples.tsv";
    cfg.kinds_path = films() + "/kinds.tsv";
    cfg.paths_path = films() + "/paths.jsonl";
    cfg.subjects = {"u1"};
    cfg.k_min = 1;
    cfg.k_max = 3;
    cfg.out_dir = out;
    return cfg;
}

std::string fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("kgsum_pipe_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir.string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

KnowledgeGraph films_graph() {
    return load_graph(films() + "/ratings.csv", films() + "/triples.tsv",
                      films() + "/kinds.tsv", WeightParams{});
}

NodeId id_of(const KnowledgeGraph& g, const std::string& label) {
    auto v = g.find(label);
    REQUIRE(v.has_value());
    return *v;
}

const std::string kExpectedMetrics =
    "scenario,method,k,lambda,group,metric,value\n"
    "user,st,1,1,all,comprehensibility,0.25\n"
    "user,st,1,1,all,actionability,0.4\n"
    "user,st,1,1,all,diversity,0.833333333333\n"
    "user,st,1,1,all,redundancy,0.375\n"
    "user,st,1,1,all,relevance,5\n"
    "user,st,1,1,all,privacy,0.8\n"
    "user,st,2,1,all,comprehensibility,0.2\n"
    "user,st,2,1,all,actionability,0.5\n"
    "user,st,2,1,all,diversity,0.833333333333\n"
    "user,st,2,1,all,redundancy,0.4\n"
    "user,st,2,1,all,relevance,5\n"
    "user,st,2,1,all,privacy,0.833333333333\n"
    "user,st,3,1,all,comprehensibility,0.166666666667\n"
    "user,st,3,1,all,actionability,0.571428571429\n"
    "user,st,3,1,all,diversity,0.844444444444\n"
    "user,st,3,1,all,redundancy,0.416666666667\n"
    "user,st,3,1,all,relevance,5\n"
    "user,st,3,1,all,privacy,0.857142857143\n"
    "user,st,1-3,1,all,consistency,0.845238095238\n"
    "user,pcst,1-3,1,all,consistency,1\n";

const std::string kExpectedBaseline =
    "scenario,method,k,lambda,group,metric,value\n"
    "user,baseline:paths,1,1,all,comprehensibility,0.2\n"
    "user,baseline:paths,1,1,all,actionability,0.5\n"
    "user,baseline:paths,1,1,all,diversity,0.866666666667\n"
    "user,baseline:paths,1,1,all,redundancy,0\n"
    "user,baseline:paths,1,1,all,relevance,3\n"
    "user,baseline:paths,1,1,all,privacy,0.666666666667\n"
    "user,baseline:paths,2,1,all,comprehensibility,0.125\n"
    "user,baseline:paths,2,1,all,actionability,0.555555555556\n"
    "user,baseline:paths,2,1,all,diversity,0.916666666667\n"
    "user,baseline:paths,2,1,all,redundancy,0.1\n"
    "user,baseline:paths,2,1,all,relevance,8\n"
    "user,baseline:paths,2,1,all,privacy,0.777777777778\n"
    "user,baseline:paths,3,1,all,comprehensibility,0.0769230769231\n"
    "user,baseline:paths,3,1,all,actionability,0.666666666667\n"
    "user,baseline:paths,3,1,all,diversity,0.910256410256\n"
    "user,baseline:paths,3,1,all,redundancy,0.25\n"
    "user,baseline:paths,3,1,all,relevance,9\n"
    "user,baseline:paths,3,1,all,privacy,0.833333333333\n"
    "user,baseline:paths,1-3,1,all,consistency,0.708333333333\n";

}  // namespace

TEST_CASE("build stats describe the bundled fixture") {
    RunConfig cfg = films_config(fresh_dir("build"));
    std::ostringstream out;
    run_build(cfg, out);
    auto j = nlohmann::json::parse(out.str());
    CHECK(j["nodes"] == 12);
    CHECK(j["users"] == 2);
    CHECK(j["items"] == 8);
    CHECK(j["external"] == 2);
    CHECK(j["edges"] == 14);
    CHECK(j["rating_edges"] == 5);
    CHECK(j["attribute_edges"] == 9);
    CHECK(j["relations"] ==
          nlohmann::json({"has_genre", "directed_by", "known_for"}));
    CHECK(j["paths"] == 3);
    CHECK(j["paths_rejected"] == 0);
    CHECK(j["K"] == 3);
}

TEST_CASE("summarize writes the expected files and trees") {
    std::string out = fresh_dir("summ");
    RunConfig cfg = films_config(out);
    std::vector<std::string> written = run_summarize(cfg);
    std::vector<std::string> names;
    for (const auto& p : written) names.push_back(fs::path(p).filename().string());
    CHECK(names == std::vector<std::string>{
                       "st_user_u1_k1_lambda1.json", "pcst_user_u1_k1_lambda1.json",
                       "st_user_u1_k2_lambda1.json", "pcst_user_u1_k2_lambda1.json",
                       "st_user_u1_k3_lambda1.json", "pcst_user_u1_k3_lambda1.json"});

    KnowledgeGraph g = films_graph();
    SummarySubgraph s3 = load_summary(out + "/st_user_u1_k3_lambda1.json", g);
    CHECK(s3.method == SummaryMethod::SteinerTree);
    CHECK(s3.params.algo == "kmb");
    CHECK(s3.params.scenario == "user");
    CHECK(s3.params.subject == "u1");
    CHECK(s3.params.k == 3);
    CHECK(s3.params.lambda == 1.0);
    CHECK(is_tree(s3));
    CHECK(s3.dropped_terminals.empty());

    std::vector<NodeId> expect_nodes = {
        id_of(g, "drama"),         id_of(g, "eternity_and_a_day"),
        id_of(g, "suspended_step_of_the_stork"), id_of(g, "the_beekeeper"),
        id_of(g, "theo_angelopoulos"), id_of(g, "u1"), id_of(g, "ulysses_gaze")};
    std::sort(expect_nodes.begin(), expect_nodes.end());
    CHECK(s3.nodes == expect_nodes);
    REQUIRE(s3.edges.size() == 6);
    // The strong rating routes the whole summary through the director hub.
    std::set<std::pair<NodeId, NodeId>> got;
    for (const SummaryEdge& e : s3.edges) got.insert({e.src, e.dst});
    std::set<std::pair<NodeId, NodeId>> expect_edges = {
        {id_of(g, "eternity_and_a_day"), id_of(g, "drama")},
        {id_of(g, "suspended_step_of_the_stork"), id_of(g, "drama")},
        {id_of(g, "the_beekeeper"), id_of(g, "theo_angelopoulos")},
        {id_of(g, "theo_angelopoulos"), id_of(g, "drama")},
        {id_of(g, "u1"), id_of(g, "ulysses_gaze")},
        {id_of(g, "ulysses_gaze"), id_of(g, "theo_angelopoulos")}};
    CHECK(got == expect_edges);

    // k=1 is the same route minus the two extra targets.
    SummarySubgraph s1 = load_summary(out + "/st_user_u1_k1_lambda1.json", g);
    CHECK(s1.nodes.size() == 5);
    CHECK(s1.edges.size() == 4);
}

TEST_CASE("pcst summaries on the fixture collapse to the subject") {
    std::string out = fresh_dir("pcstsum");
    RunConfig cfg = films_config(out);
    run_summarize(cfg);
    KnowledgeGraph g = films_graph();

    // Weighted prizes pay alpha once but every edge costs nearly
    // (wmax + eps) - w, so any connection loses money: the best tree is the
    // singleton {u1} with C = -alpha = -wmax of that scenario.
    struct Expect {
        int k;
        double cost;
        std::size_t dropped;
    };
    for (const Expect& e : {Expect{1, -5.000001, 1}, Expect{2, -7.5000015, 2},
                            Expect{3, -6.666668, 3}}) {
        std::string path =
            out + "/pcst_user_u1_k" + std::to_string(e.k) + "_lambda1.json";
        SummarySubgraph s = load_summary(path, g);
        CHECK(s.method == SummaryMethod::Pcst);
        CHECK(s.params.algo == "gw");
        CHECK(s.nodes == std::vector<NodeId>{id_of(g, "u1")});
        CHECK(s.edges.empty());
        CHECK(s.cost == doctest::Approx(e.cost).epsilon(1e-12));
        CHECK(s.dropped_terminals.size() == e.dropped);
    }
}

TEST_CASE("summarize and evaluate rerun byte-identically") {
    std::string a = fresh_dir("rerun_a");
    std::string b = fresh_dir("rerun_b");
    run_summarize(films_config(a));
    run_summarize(films_config(b));
    for (const auto& entry : fs::directory_iterator(a)) {
        std::string name = entry.path().filename().string();
        CHECK(read_file(a + "/" + name) == read_file(b + "/" + name));
    }

    RunConfig ea = films_config(a);
    ea.summaries_dir = a;
    RunConfig eb = films_config(b);
    eb.summaries_dir = b;
    CHECK(read_file(run_evaluate(ea)) == read_file(run_evaluate(eb)));
}

TEST_CASE("evaluate reproduces the frozen metrics table") {
    std::string out = fresh_dir("eval");
    RunConfig cfg = films_config(out);
    run_summarize(cfg);
    std::string csv = run_evaluate(cfg);  // summaries default to out_dir
    CHECK(fs::path(csv).filename() == "metrics.csv");
    CHECK(read_file(csv) == kExpectedMetrics);
}

TEST_CASE("baseline evaluation scores the raw paths") {
    std::string out = fresh_dir("base");
    RunConfig cfg = films_config(out);
    std::string csv = run_baseline_evaluate(cfg);
    CHECK(fs::path(csv).filename() == "baseline_metrics.csv");
    CHECK(read_file(csv) == kExpectedBaseline);
}

TEST_CASE("group attributes relabel the aggregation column") {
    std::string out = fresh_dir("group");
    std::string attrs = out + "/user_groups.tsv";
    {
        std::ofstream f(attrs, std::ios::binary);
        f << "u1\theavy\nu2\tlight\n";
    }
    RunConfig cfg = films_config(out);
    cfg.attributes_path = attrs;
    run_summarize(cfg);
    std::string body = read_file(run_evaluate(cfg));
    CHECK(body.find(",heavy,") != std::string::npos);
    CHECK(body.find(",all,") == std::string::npos);
}

TEST_CASE("evaluate distinguishes a broken series from a missing file") {
    std::string out = fresh_dir("missing");
    RunConfig cfg = films_config(out);  // nothing summarized into out
    CHECK(thrown_code([&] { run_evaluate(cfg); }) == ErrorCode::SeriesTooShort);
    cfg.k_min = cfg.k_max = 2;
    CHECK(thrown_code([&] { run_evaluate(cfg); }) == ErrorCode::IoError);
}

TEST_CASE("pipeline input validation") {
    std::string out = fresh_dir("valid");
    {
        RunConfig cfg = films_config(out);
        cfg.k_min = 0;
        CHECK(thrown_code([&] { run_summarize(cfg); }) == ErrorCode::InvalidConfig);
    }
    {
        RunConfig cfg = films_config(out);
        cfg.k_max = 9;  // the fixture only has K = 3
        CHECK(thrown_code([&] { run_summarize(cfg); }) == ErrorCode::InvalidConfig);
    }
    {
        RunConfig cfg = films_config(out);
        cfg.subjects = {"nobody"};
        CHECK(thrown_code([&] { run_summarize(cfg); }) == ErrorCode::EmptyScenario);
    }
    {
        RunConfig cfg = films_config(out);
        cfg.subjects.clear();
        CHECK(thrown_code([&] { run_summarize(cfg); }) == ErrorCode::InvalidConfig);
    }
    {
        RunConfig cfg = films_config(out);
        cfg.run_st = cfg.run_pcst = false;
        CHECK(thrown_code([&] { run_summarize(cfg); }) == ErrorCode::InvalidConfig);
        CHECK(thrown_code([&] { run_evaluate(cfg); }) == ErrorCode::InvalidConfig);
    }
    {
        RunConfig cfg = films_config(out);
        cfg.paths_path.clear();
        CHECK(thrown_code([&] { run_summarize(cfg); }) == ErrorCode::InvalidConfig);
        CHECK(thrown_code([&] { run_baseline_evaluate(cfg); }) == ErrorCode::InvalidConfig);
    }
    {
        RunConfig cfg = films_config(out);
        cfg.ratings_path.clear();
        std::ostringstream sink;
        CHECK(thrown_code([&] { run_build(cfg, sink); }) == ErrorCode::InvalidConfig);
    }
}

TEST_CASE("synth emits loadable files deterministically") {
    std::string a = fresh_dir("synth_a");
    std::string b = fresh_dir("synth_b");
    RunConfig cfg;
    cfg.synth.total_nodes = 300;
    cfg.synth.target_total_edges = 2000;
    cfg.synth.t_min = 100;
    cfg.synth.t_max = 200;
    cfg.synth.seed = 7;
    cfg.synth_paths_k = 2;
    cfg.synth_paths_len = 3;
    cfg.synth_paths_users = 5;

    cfg.out_dir = a;
    std::vector<std::string> written = run_synth(cfg);
    REQUIRE(written.size() == 4);
    CHECK(fs::path(written[0]).filename() == "kinds.tsv");
    CHECK(fs::path(written[1]).filename() == "ratings.csv");
    CHECK(fs::path(written[2]).filename() == "triples.tsv");
    CHECK(fs::path(written[3]).filename() == "paths.jsonl");

    cfg.out_dir = b;
    run_synth(cfg);
    for (const char* name : {"kinds.tsv", "ratings.csv", "triples.tsv", "paths.jsonl"})
        CHECK(read_file(a + "/" + std::string(name)) ==
              read_file(b + "/" + std::string(name)));

    // The emitted corpus loads back through the standard front door.
    KnowledgeGraph g = load_graph(a + "/ratings.csv", a + "/triples.tsv",
                                  a + "/kinds.tsv", WeightParams{});
    CHECK(g.node_count() == 312);
    CHECK(g.edge_count() == 2000);
    std::vector<PathReject> rejected;
    ExplanationPathSet set = parse_paths(a + "/paths.jsonl", g, &rejected);
    CHECK(rejected.empty());
    CHECK(!set.paths.empty());
    CHECK(set.K >= 1);
    CHECK(set.K <= 2);
}

TEST_CASE("benchmark writes one row per method and group size") {
    std::string out = fresh_dir("bench");
    RunConfig cfg;
    cfg.out_dir = out;
    cfg.bench_graph_sizes = {400};  // smallest total the derived density fits
    cfg.bench_group_sizes = {2, 3};
    cfg.bench_k = 2;
    cfg.bench_reps = 1;
    std::string path = run_benchmark(cfg);
    std::istringstream in(read_file(path));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line ==
          "graph_nodes,graph_edges,group_size,method,prize_mode,k,lambda,rho,reps,"
          "median_wall_ms,median_peak_bytes");
    std::vector<std::string> rows;
    while (std::getline(in, line))
        if (!line.empty()) rows.push_back(line);
    REQUIRE(rows.size() == 4);  // {st,pcst} x {2,3}
    CHECK(rows[0].rfind("417,22389,2,st,-,2,1,1,1,", 0) == 0);
    CHECK(rows[1].rfind("417,22389,2,pcst,weighted,2,1,1,1,", 0) == 0);
    CHECK(rows[2].rfind("417,22389,3,st,-,2,1,1,1,", 0) == 0);
    CHECK(rows[3].rfind("417,22389,3,pcst,weighted,2,1,1,1,", 0) == 0);

    cfg.bench_reps = 0;
    CHECK(thrown_code([&] { run_benchmark(cfg); }) == ErrorCode::InvalidConfig);
    cfg.bench_reps = 1;
    cfg.bench_group_sizes = {100000};
    CHECK(thrown_code([&] { run_benchmark(cfg); }) == ErrorCode::InsufficientPopulation);
}

TEST_CASE("sample writes subject lists") {
    std::string out = fresh_dir("sample");
    std::string attrs = out + "/strata.tsv";
    {
        std::ofstream f(attrs, std::ios::binary);
        f << "u1\tF\nu2\tM\n";
    }
    RunConfig cfg = films_config(out);
    cfg.sample_mode = SampleMode::Users;
    cfg.attributes_path = attrs;
    cfg.sample_strata = {"F", "M"};
    cfg.sample_n_users = 1;
    std::string upath = run_sample(cfg);
    CHECK(fs::path(upath).filename() == "sample_users.tsv");
    CHECK(read_file(upath) == "u1\tF\nu2\tM\n");

    cfg.sample_mode = SampleMode::Items;
    cfg.sample_n_top = 2;
    cfg.sample_n_bottom = 2;
    std::string ipath = run_sample(cfg);
    CHECK(fs::path(ipath).filename() == "sample_items.tsv");
    CHECK(read_file(ipath) ==
          "landscape_in_the_mist\tpopular\n"
          "travelling_players\tpopular\n"
          "dust_of_time\tunpopular\n"
          "suspended_step_of_the_stork\tunpopular\n");

    cfg.sample_mode = SampleMode::Users;
    cfg.sample_strata.clear();
    CHECK(thrown_code([&] { run_sample(cfg); }) == ErrorCode::InvalidConfig);
}
