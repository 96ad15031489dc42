#include "kgsum/oracle.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "dsu.hpp"
#include "kgsum/error.hpp"

namespace kgsum {

namespace {

// Kruskal restricted to edges with both endpoints inside `mask`. Returns true
// iff the masked nodes end up in a single component; fills cost and edges.
bool induced_mst(const KnowledgeGraph& g, const std::vector<double>& edge_cost,
                 uint32_t mask, int n_selected, double& total,
                 std::vector<EdgeId>& out) {
    std::vector<EdgeId> cand;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        const KnowledgeGraph::Edge& ed = g.edge(e);
        if (((mask >> ed.src) & 1u) && ((mask >> ed.dst) & 1u)) cand.push_back(e);
    }
    std::sort(cand.begin(), cand.end(), [&](EdgeId a, EdgeId b) {
        if (edge_cost[a] != edge_cost[b]) return edge_cost[a] < edge_cost[b];
        return a < b;
    });
    detail::Dsu dsu(g.node_count());
    total = 0.0;
    out.clear();
    int merges = 0;
    for (EdgeId e : cand) {
        NodeId a = g.edge(e).src;
        NodeId b = g.edge(e).dst;
        if (dsu.find(a) == dsu.find(b)) continue;
        dsu.unite(a, b);
        total += edge_cost[e];
        out.push_back(e);
        ++merges;
    }
    return merges == n_selected - 1;
}

std::vector<NodeId> mask_nodes(uint32_t mask, size_t n) {
    std::vector<NodeId> nodes;
    for (NodeId v = 0; v < n; ++v)
        if ((mask >> v) & 1u) nodes.push_back(v);
    return nodes;
}

}  // namespace

OracleTree brute_force_steiner(const KnowledgeGraph& g,
                               const std::vector<double>& edge_cost,
                               const std::vector<NodeId>& terminals) {
    const size_t n = g.node_count();
    if (n > 16)
        fail(ErrorCode::OracleTooLarge,
             "exhaustive solver capped at 16 nodes, got " + std::to_string(n));
    if (edge_cost.size() != g.edge_count())
        fail(ErrorCode::InvalidConfig, "edge cost vector does not match edge count");
    if (terminals.size() < 2)
        fail(ErrorCode::DegenerateTerminals, "need at least two terminals");

    uint32_t term_mask = 0;
    for (NodeId t : terminals) term_mask |= 1u << t;
    std::vector<NodeId> optional;
    for (NodeId v = 0; v < n; ++v)
        if (!((term_mask >> v) & 1u)) optional.push_back(v);

    OracleTree best;
    bool found = false;
    const uint32_t lim = 1u << optional.size();
    std::vector<EdgeId> edges;
    for (uint32_t pick = 0; pick < lim; ++pick) {
        uint32_t mask = term_mask;
        for (size_t i = 0; i < optional.size(); ++i)
            if ((pick >> i) & 1u) mask |= 1u << optional[i];
        double total;
        if (!induced_mst(g, edge_cost, mask, std::popcount(mask), total, edges)) continue;
        if (!found || total < best.cost) {
            best.cost = total;
            best.edges = edges;
            found = true;
        }
    }
    if (!found)
        fail(ErrorCode::DisconnectedTerminals, "terminals cannot be connected");

    std::sort(best.edges.begin(), best.edges.end());
    std::vector<NodeId> nodes;
    for (EdgeId e : best.edges) {
        nodes.push_back(g.edge(e).src);
        nodes.push_back(g.edge(e).dst);
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    best.nodes = std::move(nodes);
    return best;
}

OraclePcst brute_force_pcst(const KnowledgeGraph& g,
                            const std::vector<double>& prize,
                            const std::vector<double>& edge_cost) {
    const size_t n = g.node_count();
    if (n > 12)
        fail(ErrorCode::OracleTooLarge,
             "exhaustive solver capped at 12 nodes, got " + std::to_string(n));
    if (prize.size() != n)
        fail(ErrorCode::InvalidConfig, "prize vector does not match node count");
    if (edge_cost.size() != g.edge_count())
        fail(ErrorCode::InvalidConfig, "edge cost vector does not match edge count");

    OraclePcst best;  // empty selection, net 0
    const uint32_t lim = 1u << n;
    std::vector<EdgeId> edges;
    for (uint32_t mask = 1; mask < lim; ++mask) {
        double mst;
        if (!induced_mst(g, edge_cost, mask, std::popcount(mask), mst, edges)) continue;
        double collected = 0.0;
        for (NodeId v = 0; v < n; ++v)
            if ((mask >> v) & 1u) collected += prize[v];
        double net = mst - collected;
        if (net < best.net_cost) {
            best.net_cost = net;
            best.edges = edges;
            best.nodes = mask_nodes(mask, n);
        }
    }
    std::sort(best.edges.begin(), best.edges.end());
    return best;
}

}  // namespace kgsum
