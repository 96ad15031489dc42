#include "kgsum/steiner.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "dsu.hpp"

namespace kgsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Above this many terminals, per-terminal shortest-path trees are recomputed
// during expansion instead of cached (caps memory at closure size).
constexpr std::size_t kParentCacheLimit = 128;

class Dijkstra {
  public:
    Dijkstra(const KnowledgeGraph& g, const std::vector<double>& cost) : g_(g), cost_(cost) {}

    void run(NodeId src, bool with_parents) {
        const std::size_t n = g_.node_count();
        dist_.assign(n, kInf);
        if (with_parents) {
            pnode_.assign(n, kNoNode);
            pedge_.assign(n, kNoEdge);
        }
        using Item = std::pair<double, NodeId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        dist_[src] = 0.0;
        heap.push({0.0, src});
        while (!heap.empty()) {
            auto [d, u] = heap.top();
            heap.pop();
            if (d > dist_[u]) continue;
            for (EdgeId e : g_.incident_edges(u)) {
                NodeId v = g_.other_endpoint(e, u);
                double alt = d + cost_[e];
                if (alt < dist_[v]) {
                    dist_[v] = alt;
                    if (with_parents) {
                        pnode_[v] = u;
                        pedge_[v] = e;
                    }
                    heap.push({alt, v});
                } else if (with_parents && alt == dist_[v] &&
                           (u < pnode_[v] || (u == pnode_[v] && e < pedge_[v]))) {
                    // Equal-length alternative with a smaller predecessor:
                    // keep the canonical (deterministic) shortest-path tree.
                    pnode_[v] = u;
                    pedge_[v] = e;
                }
            }
        }
    }

    double dist(NodeId v) const { return dist_[v]; }
    NodeId parent_node(NodeId v) const { return pnode_[v]; }
    EdgeId parent_edge(NodeId v) const { return pedge_[v]; }
    std::vector<NodeId> take_parent_nodes() { return std::move(pnode_); }
    std::vector<EdgeId> take_parent_edges() { return std::move(pedge_); }

  private:
    const KnowledgeGraph& g_;
    const std::vector<double>& cost_;
    std::vector<double> dist_;
    std::vector<NodeId> pnode_;
    std::vector<EdgeId> pedge_;
};

[[noreturn]] void report_disconnected(const KnowledgeGraph& g, const std::vector<NodeId>& t) {
    // Find the component holding the most terminals; everything else is the
    // unreachable subset reported to the caller.
    detail::Dsu dsu(g.node_count());
    for (const auto& e : g.edges()) dsu.unite(e.src, e.dst);
    std::unordered_map<std::uint32_t, std::size_t> comp_count;
    for (NodeId v : t) ++comp_count[dsu.find(v)];
    std::uint32_t majority = dsu.find(t.front());
    for (NodeId v : t) {
        std::uint32_t c = dsu.find(v);
        if (comp_count[c] > comp_count[majority]) majority = c;
    }
    std::string who;
    for (NodeId v : t)
        if (dsu.find(v) != majority) who += (who.empty() ? "" : ", ") + g.label(v);
    fail(ErrorCode::DisconnectedTerminals, "terminals unreachable from the rest: " + who);
}

}  // namespace

double edge_cost(double w, double w_max, double epsilon) {
    if (epsilon <= 0) fail(ErrorCode::InvalidConfig, "epsilon must be positive");
    if (w > w_max)
        fail(ErrorCode::InvalidConfig, "edge weight exceeds the declared maximum");
    return (w_max + epsilon) - w;
}

SummarySubgraph steiner_summary(const KnowledgeGraph& g, const WorkingWeights& weights,
                                std::span<const NodeId> terminals, const SteinerParams& params) {
    if (weights.weight.size() != g.edge_count())
        fail(ErrorCode::InvalidConfig, "working weights do not match the graph");
    if (g.edge_count() == 0) fail(ErrorCode::NoEdges, "graph has no edges");

    std::vector<NodeId> t(terminals.begin(), terminals.end());
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    if (t.size() < 2)
        fail(ErrorCode::DegenerateTerminals, "need at least two distinct terminals");
    for (NodeId v : t)
        if (v >= g.node_count())
            fail(ErrorCode::UnknownNode, "terminal id " + std::to_string(v) + " out of range");

    std::vector<double> cost(g.edge_count());
    for (EdgeId e = 0; e < g.edge_count(); ++e)
        cost[e] = edge_cost(weights.weight[e], weights.max_weight, params.epsilon);

    const std::size_t nt = t.size();
    const bool cache_parents = nt <= kParentCacheLimit;

    // Metric closure: pairwise shortest-path distances between terminals.
    std::vector<std::vector<double>> closure(nt, std::vector<double>(nt, 0.0));
    std::vector<std::vector<NodeId>> pnodes;
    std::vector<std::vector<EdgeId>> pedges;
    if (cache_parents) {
        pnodes.resize(nt);
        pedges.resize(nt);
    }
    Dijkstra dij(g, cost);
    for (std::size_t a = 0; a < nt; ++a) {
        dij.run(t[a], cache_parents);
        for (std::size_t b = 0; b < nt; ++b) {
            closure[a][b] = dij.dist(t[b]);
            if (closure[a][b] == kInf) report_disconnected(g, t);
        }
        if (cache_parents) {
            pnodes[a] = dij.take_parent_nodes();
            pedges[a] = dij.take_parent_edges();
        }
    }

    // MST of the closure (Kruskal; ties break on terminal indices).
    struct ClosureEdge {
        double d;
        std::uint32_t a, b;
    };
    std::vector<ClosureEdge> cedges;
    cedges.reserve(nt * (nt - 1) / 2);
    for (std::uint32_t a = 0; a < nt; ++a)
        for (std::uint32_t b = a + 1; b < nt; ++b) cedges.push_back({closure[a][b], a, b});
    std::sort(cedges.begin(), cedges.end(), [](const ClosureEdge& x, const ClosureEdge& y) {
        return std::tie(x.d, x.a, x.b) < std::tie(y.d, y.a, y.b);
    });
    detail::Dsu closure_dsu(nt);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> mst;  // (a, b) terminal indices
    for (const ClosureEdge& ce : cedges) {
        if (mst.size() + 1 == nt) break;
        if (closure_dsu.unite(ce.a, ce.b)) mst.emplace_back(ce.a, ce.b);
    }

    // Expand closure edges back to graph edges along the shortest-path trees.
    std::sort(mst.begin(), mst.end());
    std::unordered_set<EdgeId> expanded;
    {
        std::size_t i = 0;
        while (i < mst.size()) {
            std::uint32_t a = mst[i].first;
            const std::vector<NodeId>* pn;
            const std::vector<EdgeId>* pe;
            std::vector<NodeId> tmp_n;
            std::vector<EdgeId> tmp_e;
            if (cache_parents) {
                pn = &pnodes[a];
                pe = &pedges[a];
            } else {
                dij.run(t[a], true);
                tmp_n = dij.take_parent_nodes();
                tmp_e = dij.take_parent_edges();
                pn = &tmp_n;
                pe = &tmp_e;
            }
            for (; i < mst.size() && mst[i].first == a; ++i) {
                for (NodeId v = t[mst[i].second]; v != t[a]; v = (*pn)[v])
                    expanded.insert((*pe)[v]);
            }
        }
    }

    // MST over the expanded subgraph (removes any cycle created by
    // overlapping expansions, dropping the costliest edge on each).
    std::vector<EdgeId> pool(expanded.begin(), expanded.end());
    std::sort(pool.begin(), pool.end(),
              [&](EdgeId x, EdgeId y) { return std::tie(cost[x], x) < std::tie(cost[y], y); });
    std::unordered_map<NodeId, std::uint32_t> local;
    for (EdgeId e : pool) {
        local.try_emplace(g.edge(e).src, static_cast<std::uint32_t>(local.size()));
        local.try_emplace(g.edge(e).dst, static_cast<std::uint32_t>(local.size()));
    }
    detail::Dsu tree_dsu(local.size());
    std::vector<EdgeId> tree;
    for (EdgeId e : pool)
        if (tree_dsu.unite(local[g.edge(e).src], local[g.edge(e).dst])) tree.push_back(e);

    // Prune non-terminal leaves until every leaf is a terminal.
    std::unordered_set<NodeId> terminal_set(t.begin(), t.end());
    std::unordered_map<NodeId, std::vector<EdgeId>> adj;
    for (EdgeId e : tree) {
        adj[g.edge(e).src].push_back(e);
        adj[g.edge(e).dst].push_back(e);
    }
    std::unordered_set<EdgeId> removed;
    std::vector<NodeId> frontier;
    for (const auto& [v, inc] : adj)
        if (inc.size() == 1 && !terminal_set.count(v)) frontier.push_back(v);
    std::sort(frontier.begin(), frontier.end());
    auto live_degree = [&](NodeId v, EdgeId* last) {
        std::size_t deg = 0;
        for (EdgeId e : adj[v])
            if (!removed.count(e)) {
                ++deg;
                *last = e;
            }
        return deg;
    };
    while (!frontier.empty()) {
        NodeId v = frontier.back();
        frontier.pop_back();
        EdgeId last = kNoEdge;
        if (live_degree(v, &last) != 1) continue;
        removed.insert(last);
        NodeId w = g.other_endpoint(last, v);
        EdgeId ignore = kNoEdge;
        if (!terminal_set.count(w) && live_degree(w, &ignore) == 1) frontier.push_back(w);
    }

    SummarySubgraph out;
    out.method = SummaryMethod::SteinerTree;
    out.params.algo = "kmb";
    out.terminals = t;
    std::set<NodeId> node_set;
    for (EdgeId e : tree) {
        if (removed.count(e)) continue;
        out.edges.push_back({g.edge(e).src, g.edge(e).dst, e, weights.weight[e]});
        out.cost += cost[e];
        node_set.insert(g.edge(e).src);
        node_set.insert(g.edge(e).dst);
    }
    std::sort(out.edges.begin(), out.edges.end(),
              [](const SummaryEdge& x, const SummaryEdge& y) { return x.id < y.id; });
    out.nodes.assign(node_set.begin(), node_set.end());
    out.params.lambda = weights.lambda;
    return out;
}

}  // namespace kgsum
