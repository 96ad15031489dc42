#include <map>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "kgsum/oracle.hpp"
#include "kgsum/pcst.hpp"

using namespace kgsum;
using kgtest::contains_node;
using kgtest::random_connected_graph;
using kgtest::thrown_code;
using kgtest::weighted_graph;

namespace {

std::vector<NodeId> random_terminals(const KnowledgeGraph& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<NodeId> t;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (rng() % 3 == 0) t.push_back(v);
    if (t.size() < 2) t = {0, static_cast<NodeId>(g.node_count() - 1)};
    return t;
}

double total_prize(const PrizeAssignment& pz) {
    double s = 0;
    for (double p : pz.prize) s += p;
    return s;
}

}  // namespace

TEST_CASE("a triangle of terminals is worth connecting") {
    KnowledgeGraph g = weighted_graph(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
    std::vector<NodeId> t = {0, 1, 2};
    PrizeAssignment pz = assign_prizes(g, nullptr, t, PrizeMode::Unit, 10.0);
    SummarySubgraph s = pcst_summary(g, pz);
    CHECK(s.method == SummaryMethod::Pcst);
    CHECK(s.params.algo == "gw");
    CHECK(is_tree(s));
    CHECK(s.nodes == std::vector<NodeId>{0, 1, 2});
    REQUIRE(s.edges.size() == 2);
    CHECK(s.edges[0].id == 0);
    CHECK(s.edges[1].id == 1);
    CHECK(s.cost == doctest::Approx(2.0 - 30.0).epsilon(1e-12));
    CHECK(s.dropped_terminals.empty());
    CHECK(pcst_cost(s, pz) == doctest::Approx(-28.0).epsilon(1e-12));
}

TEST_CASE("distant terminals are foregone when the prize is small") {
    KnowledgeGraph g = weighted_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
    std::vector<NodeId> t = {0, 3};

    // rho 1: connecting costs 3 for 2 in prizes; a lone terminal wins.
    PrizeAssignment p1 = assign_prizes(g, nullptr, t, PrizeMode::Unit, 1.0);
    SummarySubgraph s1 = pcst_summary(g, p1);
    CHECK(s1.nodes == std::vector<NodeId>{0});
    CHECK(s1.edges.empty());
    CHECK(s1.cost == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(s1.dropped_terminals == std::vector<NodeId>{3});
    CHECK(is_tree(s1));

    // rho 10 flips the trade-off.
    PrizeAssignment p10 = assign_prizes(g, nullptr, t, PrizeMode::Unit, 10.0);
    SummarySubgraph s10 = pcst_summary(g, p10);
    CHECK(s10.nodes == std::vector<NodeId>{0, 1, 2, 3});
    CHECK(s10.edges.size() == 3);
    CHECK(s10.cost == doctest::Approx(3.0 - 20.0).epsilon(1e-12));
    CHECK(s10.dropped_terminals.empty());
}

TEST_CASE("no prizes means an empty summary") {
    KnowledgeGraph g = weighted_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    PrizeAssignment pz = assign_prizes(g, nullptr, {}, PrizeMode::Unit, 1.0);
    SummarySubgraph s = pcst_summary(g, pz);
    CHECK(s.nodes.empty());
    CHECK(s.edges.empty());
    CHECK(s.cost == 0.0);
    CHECK(s.dropped_terminals.empty());
}

TEST_CASE("gw returns the single best component of a disconnected graph") {
    // 0-1-2 chain and a 3-4 pair; terminals at 0, 2, 3, 4 with prize 2.
    KnowledgeGraph g = weighted_graph(5, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}});
    std::vector<NodeId> t = {0, 2, 3, 4};
    PrizeAssignment pz = assign_prizes(g, nullptr, t, PrizeMode::Unit, 2.0);
    SummarySubgraph s = pcst_summary(g, pz);
    // {3,4} nets 4 - 1 = 3, beating the chain's 4 - 2 = 2.
    CHECK(s.nodes == std::vector<NodeId>{3, 4});
    CHECK(s.edges.size() == 1);
    CHECK(s.cost == doctest::Approx(1.0 - 4.0).epsilon(1e-12));
    CHECK(s.dropped_terminals == std::vector<NodeId>{0, 2});
}

TEST_CASE("the literal comparison variant degenerates to prized singletons") {
    // Its seed keys start at -prize, so a positive edge cost never beats
    // them and no edge is ever adopted: what survives the component prune
    // is exactly the positive-prize nodes.
    KnowledgeGraph g = weighted_graph(5, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}});
    std::vector<NodeId> t = {0, 2, 3, 4};
    PrizeAssignment pz = assign_prizes(g, nullptr, t, PrizeMode::Unit, 2.0);
    SummarySubgraph s = pcst_summary(g, pz, PcstAlgo::PaperPrim);
    CHECK(s.params.algo == "paper-prim");
    CHECK(s.nodes == std::vector<NodeId>{0, 2, 3, 4});
    CHECK(s.edges.empty());
    CHECK(!is_tree(s));  // a forest of four singletons
    CHECK(s.cost == doctest::Approx(-8.0).epsilon(1e-12));
    // Zero-prize nodes (1, here) never survive the prune.
    CHECK(!contains_node(s.nodes, 1));
}

TEST_CASE("exhaustive pcst solver on known instances") {
    KnowledgeGraph single = weighted_graph(2, {{0, 1, 5.0}});
    OraclePcst one = brute_force_pcst(single, {1.0, 0.0}, {5.0});
    CHECK(one.nodes == std::vector<NodeId>{0});
    CHECK(one.net_cost == doctest::Approx(-1.0).epsilon(1e-12));

    OraclePcst none = brute_force_pcst(single, {0.0, 0.0}, {5.0});
    CHECK(none.nodes.empty());
    CHECK(none.net_cost == 0.0);

    // The two summary toys above are exactly optimal.
    KnowledgeGraph tri = weighted_graph(3, {{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}});
    std::vector<NodeId> all = {0, 1, 2};
    PrizeAssignment tz = assign_prizes(tri, nullptr, all, PrizeMode::Unit, 10.0);
    OraclePcst topt = brute_force_pcst(tri, tz.prize, tz.edge_cost);
    CHECK(topt.net_cost == doctest::Approx(-28.0).epsilon(1e-12));

    KnowledgeGraph chain = weighted_graph(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
    std::vector<NodeId> ends = {0, 3};
    PrizeAssignment cz = assign_prizes(chain, nullptr, ends, PrizeMode::Unit, 1.0);
    OraclePcst copt = brute_force_pcst(chain, cz.prize, cz.edge_cost);
    CHECK(copt.net_cost == doctest::Approx(-1.0).epsilon(1e-12));

    KnowledgeGraph big = random_connected_graph(13, 0, 9);
    std::vector<double> pr(13, 1.0), ec(big.edge_count(), 1.0);
    CHECK(thrown_code([&] { brute_force_pcst(big, pr, ec); }) ==
          ErrorCode::OracleTooLarge);
}

TEST_CASE("stays within the penalty-form approximation bound") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        int n = 4 + static_cast<int>(seed % 7);
        KnowledgeGraph g = random_connected_graph(n, static_cast<int>(seed % 5), seed);
        PrizeAssignment pz;
        if (seed % 2) {
            double rho = 0.5 + static_cast<double>(seed % 8) / 2.0;
            pz = assign_prizes(g, nullptr, random_terminals(g, seed * 13), PrizeMode::Unit,
                               rho);
        } else {
            WorkingWeights ww = WorkingWeights::from_base(g);
            pz = assign_prizes(g, &ww, random_terminals(g, seed * 13),
                               PrizeMode::Weighted);
        }
        SummarySubgraph s = pcst_summary(g, pz);
        OraclePcst opt = brute_force_pcst(g, pz.prize, pz.edge_cost);

        CAPTURE(seed);
        // Penalty objective: cost(S) plus the prizes of the excluded nodes.
        double pen_gw = s.cost + total_prize(pz);
        double pen_opt = opt.net_cost + total_prize(pz);
        CHECK(pen_gw >= pen_opt - 1e-9);
        CHECK(pen_gw <= 2 * pen_opt + 1e-9);
        CHECK(s.cost <= 1e-12);

        // Structure: a tree (possibly one node) or nothing.
        if (!s.nodes.empty()) CHECK(is_tree(s));
        CHECK(pcst_cost(s, pz) == doctest::Approx(s.cost).epsilon(1e-9));

        // Kept and dropped terminals partition the terminal set.
        for (NodeId t : pz.terminals)
            CHECK((contains_node(s.nodes, t) || contains_node(s.dropped_terminals, t)));
        for (NodeId t : s.dropped_terminals) CHECK(!contains_node(s.nodes, t));

        // Every non-terminal leaf pays for itself.
        std::map<NodeId, int> degree;
        for (const SummaryEdge& e : s.edges) {
            ++degree[e.src];
            ++degree[e.dst];
        }
        for (NodeId v : s.nodes) {
            if (degree[v] != 1 || contains_node(pz.terminals, v)) continue;
            for (const SummaryEdge& e : s.edges)
                if (e.src == v || e.dst == v)
                    CHECK(pz.prize[v] > pz.edge_cost[e.id] - 1e-9);
        }

        SummarySubgraph again = pcst_summary(g, pz);
        CHECK(again.nodes == s.nodes);
        CHECK(again.cost == s.cost);
        REQUIRE(again.edges.size() == s.edges.size());
        for (std::size_t i = 0; i < s.edges.size(); ++i)
            CHECK(again.edges[i].id == s.edges[i].id);
    }
}

TEST_CASE("raising rho never drops more terminals") {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        int n = 5 + static_cast<int>(seed % 8);
        KnowledgeGraph g = random_connected_graph(n, static_cast<int>(seed % 5), seed);
        std::vector<NodeId> t = random_terminals(g, seed * 31);
        std::size_t last = t.size() + 1;
        for (double rho : {0.3, 1.0, 2.5, 10.0}) {
            PrizeAssignment pz = assign_prizes(g, nullptr, t, PrizeMode::Unit, rho);
            SummarySubgraph s = pcst_summary(g, pz);
            CHECK(s.dropped_terminals.size() <= last);
            last = s.dropped_terminals.size();
        }
        // A huge prize keeps every terminal of a connected graph.
        PrizeAssignment big = assign_prizes(g, nullptr, t, PrizeMode::Unit, 1000.0);
        SummarySubgraph s = pcst_summary(g, big);
        CHECK(s.dropped_terminals.empty());
        for (NodeId v : t) CHECK(contains_node(s.nodes, v));
    }
}

TEST_CASE("weighted prizes use the working-weight extremes") {
    KnowledgeGraph g = weighted_graph(4, {{0, 1, 4.0}, {1, 2, 1.0}, {2, 3, 2.0}});
    WorkingWeights ww = WorkingWeights::from_base(g);
    std::vector<NodeId> t = {0, 3};
    PrizeAssignment pz = assign_prizes(g, &ww, t, PrizeMode::Weighted, 1.0, 1e-3);
    CHECK(pz.mode == PrizeMode::Weighted);
    CHECK(pz.alpha == doctest::Approx(ww.max_weight).epsilon(1e-15));
    CHECK(pz.beta == doctest::Approx(1.0 + 1e-6).epsilon(1e-9));
    CHECK(pz.prize[0] == pz.alpha);
    CHECK(pz.prize[3] == pz.alpha);
    CHECK(pz.prize[1] == pz.beta);
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        CHECK(pz.edge_cost[e] ==
              doctest::Approx(edge_cost(ww.weight[e], ww.max_weight, 1e-3)).epsilon(1e-12));
}

TEST_CASE("prize assignment validation") {
    KnowledgeGraph g = weighted_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    std::vector<NodeId> t = {0, 2};
    CHECK(thrown_code([&] { assign_prizes(g, nullptr, t, PrizeMode::Unit, 0.0); }) ==
          ErrorCode::InvalidConfig);
    CHECK(thrown_code([&] { assign_prizes(g, nullptr, t, PrizeMode::Weighted); }) ==
          ErrorCode::InvalidConfig);
    std::vector<NodeId> oob = {0, 7};
    CHECK(thrown_code([&] { assign_prizes(g, nullptr, oob, PrizeMode::Unit, 1.0); }) ==
          ErrorCode::UnknownNode);

    PrizeAssignment pz = assign_prizes(g, nullptr, t, PrizeMode::Unit, 1.0);
    PrizeAssignment short_prize = pz;
    short_prize.prize.pop_back();
    CHECK(thrown_code([&] { pcst_summary(g, short_prize); }) == ErrorCode::InvalidConfig);
    PrizeAssignment zero_cost = pz;
    zero_cost.edge_cost[0] = 0.0;
    CHECK(thrown_code([&] { pcst_summary(g, zero_cost); }) == ErrorCode::InvalidConfig);
}
