#pragma once

// Shared builders for the tests: seeded random instances for the property
// tests against the brute-force solvers, plus small utilities.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "kgsum/graph.hpp"
#include "kgsum/reweight.hpp"
#include "kgsum/steiner.hpp"

namespace kgtest {

using namespace kgsum;

// Runs fn and reports the kgsum error code it threw, if any.
template <class F>
std::optional<ErrorCode> thrown_code(F&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return std::nullopt;
}

// Random connected graph: a random spanning tree plus `extra` distinct extra
// pairs. Every edge is an attribute triple carrying its own relation name so
// each can get its own base weight through the per-relation overrides.
inline KnowledgeGraph random_connected_graph(int n, int extra, std::uint64_t seed,
                                             double wmin = 0.5, double wmax = 5.0) {
    std::mt19937_64 rng(seed);
    NodeTable nodes;
    for (int i = 0; i < n; ++i) {
        NodeKind kind = i % 3 == 0   ? NodeKind::User
                        : i % 3 == 1 ? NodeKind::Item
                                     : NodeKind::External;
        nodes.add("n" + std::to_string(i), kind);
    }
    std::vector<TripleRecord> triples;
    std::vector<std::string> rel_names;
    AttributeWeights attr;
    std::set<std::pair<NodeId, NodeId>> used;
    auto add_edge = [&](NodeId a, NodeId b) {
        double w = wmin + (wmax - wmin) * (static_cast<double>(rng() % 10000) / 10000.0);
        std::string rel = "r" + std::to_string(triples.size());
        attr.per_relation[rel] = w;
        triples.push_back({a, b, static_cast<std::int32_t>(rel_names.size())});
        rel_names.push_back(rel);
        used.insert({std::min(a, b), std::max(a, b)});
    };
    for (NodeId v = 1; v < static_cast<NodeId>(n); ++v)
        add_edge(static_cast<NodeId>(rng() % v), v);
    for (int tries = 0; extra > 0 && tries < 50 * extra + 100; ++tries) {
        NodeId a = static_cast<NodeId>(rng() % n);
        NodeId b = static_cast<NodeId>(rng() % n);
        if (a == b) continue;
        if (used.count({std::min(a, b), std::max(a, b)})) continue;
        add_edge(a, b);
        --extra;
    }
    return KnowledgeGraph::build(std::move(nodes), {}, triples, std::move(rel_names), {},
                                 attr);
}

// Hand-specified undirected weighted graph on n nodes (labels n0..n<n-1>),
// one relation per edge so each carries its own base weight.
inline KnowledgeGraph weighted_graph(
    int n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
    NodeTable nodes;
    for (int i = 0; i < n; ++i) nodes.add("n" + std::to_string(i), NodeKind::External);
    std::vector<TripleRecord> triples;
    std::vector<std::string> rel_names;
    AttributeWeights attr;
    for (const auto& [a, b, w] : edges) {
        std::string rel = "r" + std::to_string(triples.size());
        attr.per_relation[rel] = w;
        triples.push_back({a, b, static_cast<std::int32_t>(rel_names.size())});
        rel_names.push_back(rel);
    }
    return KnowledgeGraph::build(std::move(nodes), {}, triples, std::move(rel_names), {},
                                 attr);
}

// t distinct random nodes, sorted.
inline std::vector<NodeId> pick_terminals(const KnowledgeGraph& g, int t,
                                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<NodeId> all(g.node_count());
    std::iota(all.begin(), all.end(), 0u);
    for (std::size_t i = all.size(); i > 1; --i)
        std::swap(all[i - 1], all[rng() % i]);
    all.resize(static_cast<std::size_t>(t));
    std::sort(all.begin(), all.end());
    return all;
}

// Per-edge transformed costs matching what the summarizers minimize.
inline std::vector<double> st_costs(const KnowledgeGraph& g, const WorkingWeights& ww,
                                    double eps = 1e-3) {
    std::vector<double> c(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        c[e] = edge_cost(ww.weight[e], ww.max_weight, eps);
    return c;
}

inline bool contains_node(const std::vector<NodeId>& sorted, NodeId v) {
    return std::binary_search(sorted.begin(), sorted.end(), v);
}

}  // namespace kgtest
