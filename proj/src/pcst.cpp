#include "kgsum/pcst.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <tuple>
#include <unordered_map>

#include "dsu.hpp"
#include "kgsum/steiner.hpp"

namespace kgsum {

PrizeAssignment assign_prizes(const KnowledgeGraph& g, const WorkingWeights* weights,
                              std::span<const NodeId> terminals, PrizeMode mode, double rho,
                              double epsilon) {
    PrizeAssignment pz;
    pz.mode = mode;
    pz.rho = rho;
    pz.terminals.assign(terminals.begin(), terminals.end());
    std::sort(pz.terminals.begin(), pz.terminals.end());
    pz.terminals.erase(std::unique(pz.terminals.begin(), pz.terminals.end()),
                       pz.terminals.end());
    for (NodeId v : pz.terminals)
        if (v >= g.node_count())
            fail(ErrorCode::UnknownNode, "terminal id " + std::to_string(v) + " out of range");

    if (mode == PrizeMode::Weighted) {
        if (!weights || weights->weight.size() != g.edge_count())
            fail(ErrorCode::InvalidConfig, "weighted prizes need working weights for this graph");
        if (g.edge_count() == 0) fail(ErrorCode::NoEdges, "graph has no edges");
        double lo = weights->weight[0], hi = weights->weight[0];
        for (double w : weights->weight) {
            lo = std::min(lo, w);
            hi = std::max(hi, w);
        }
        pz.alpha = hi;
        pz.beta = lo;
        pz.prize.assign(g.node_count(), pz.beta);
        for (NodeId v : pz.terminals) pz.prize[v] = pz.alpha;
        pz.edge_cost.reserve(g.edge_count());
        for (EdgeId e = 0; e < g.edge_count(); ++e)
            pz.edge_cost.push_back(edge_cost(weights->weight[e], weights->max_weight, epsilon));
    } else {
        if (rho <= 0) fail(ErrorCode::InvalidConfig, "rho must be positive");
        pz.prize.assign(g.node_count(), 0.0);
        for (NodeId v : pz.terminals) pz.prize[v] = rho;
        pz.edge_cost.assign(g.edge_count(), 1.0);
    }
    return pz;
}

double pcst_cost(const SummarySubgraph& s, const PrizeAssignment& prizes) {
    double c = 0.0;
    for (const SummaryEdge& e : s.edges) c += prizes.edge_cost[e.id];
    for (NodeId v : s.nodes) c -= prizes.prize[v];
    return c;
}

namespace {

// ---------------------------------------------------------------------------
// Goemans-Williamson moat growing.
//
// Every node starts as its own cluster; clusters with remaining prize
// potential are "active" and their dual (moat) grows at unit rate. An edge
// becomes tight when the moats of its two sides add up to its cost — the two
// clusters then merge and the edge joins the forest. A cluster deactivates
// when its accumulated dual equals its total prize. When the last cluster
// goes quiet, the forest is strong-pruned and the best tree kept.
//
// The merge history forms a binary tree over clusters; the moat mass seen by
// a node is the sum of finalized duals along its leaf-to-root chain plus the
// live growth of its current root. Chains are walked with weighted path
// compression, and events are processed lazily: each popped event is
// revalidated against current state and rescheduled if premature. The only
// transition that can make an edge tight *earlier* than scheduled is an
// inactive cluster getting absorbed into an active one, so exactly then the
// absorbed side's incident edges are rescheduled.
// ---------------------------------------------------------------------------
class MoatGrowth {
  public:
    MoatGrowth(const KnowledgeGraph& g, const PrizeAssignment& pz) : g_(g), pz_(pz) {
        const std::size_t n = g.node_count();
        clusters_.reserve(2 * n);
        for (NodeId v = 0; v < n; ++v) {
            Cluster c;
            c.active = pz.prize[v] > 0;
            c.deact_time = pz.prize[v];
            c.members.push_back(v);
            c.min_node = v;
            clusters_.push_back(std::move(c));
            cur_parent_.push_back(static_cast<int>(v));
            if (clusters_[v].active) push_event(pz.prize[v], kDeactivate, v);
        }
        for (EdgeId e = 0; e < g.edge_count(); ++e) schedule_edge(e, 0.0);
    }

    // Runs the clustering to quiescence; returns the forest edges.
    std::vector<EdgeId> run() {
        while (!events_.empty()) {
            Event ev = events_.top();
            events_.pop();
            if (ev.kind == kEdge)
                handle_edge(ev.id, ev.t);
            else
                handle_deactivate(ev.id);
        }
        return forest_;
    }

    // Final component roots and their node sets.
    int root_of(NodeId v) { return find(static_cast<int>(v)); }
    const std::vector<NodeId>& members(int root) const { return clusters_[root].members; }

  private:
    static constexpr int kEdge = 0;
    static constexpr int kDeactivate = 1;

    struct Cluster {
        int merge_parent = -1;  // merge-tree parent, fixed forever once set
        double start = 0.0;     // creation time
        double y = 0.0;         // finalized dual (valid once inactive or merged)
        double deact_time = 0.0;
        bool active = false;
        // weighted path compression over merged (non-root) ancestors:
        int wparent = -1;       // lazily initialized to self on first merge
        double wsum = 0.0;      // sum of y over [this, wparent)
        std::vector<NodeId> members;  // maintained for roots only
        NodeId min_node = 0;
    };

    struct Event {
        double t;
        int kind;
        std::uint32_t id;
        bool operator>(const Event& o) const {
            return std::tie(t, kind, id) > std::tie(o.t, o.kind, o.id);
        }
    };

    void push_event(double t, int kind, std::uint32_t id) { events_.push({t, kind, id}); }

    int find(int c) {
        while (cur_parent_[c] != c) c = cur_parent_[c] = cur_parent_[cur_parent_[c]];
        return c;
    }

    // Total moat mass accumulated around node v by time t.
    double phi(NodeId v, double t) {
        double sum = 0.0;
        int c = static_cast<int>(v);
        while (clusters_[c].merge_parent != -1) {
            // c is merged, its y is final; climb the compressed chain.
            Cluster& cc = clusters_[c];
            if (cc.wparent == -1) cc.wparent = c;
            while (cc.wparent != c) {
                Cluster& p = clusters_[cc.wparent];
                if (p.wparent == -1 || p.wparent == cc.wparent) break;
                cc.wsum += p.wsum;
                cc.wparent = p.wparent;
            }
            int top = clusters_[c].wparent;
            sum += clusters_[c].wsum + clusters_[top].y;
            int up = clusters_[top].merge_parent;
            if (up == -1) {
                c = top;  // should not happen (top is merged), defensive
                break;
            }
            if (clusters_[up].merge_parent == -1) {
                c = up;  // reached the current root
                break;
            }
            // The old top has been merged meanwhile; extend the chain.
            clusters_[top].wparent = up;
            clusters_[top].wsum = clusters_[top].y;
            sum -= clusters_[top].y;  // will be re-added via the extended chain
            c = top;
        }
        const Cluster& root = clusters_[c];
        if (root.merge_parent == -1) sum += root.active ? (t - root.start) : root.y;
        return sum;
    }

    void schedule_edge(EdgeId e, double t) {
        const auto& ed = g_.edge(e);
        int ru = find(static_cast<int>(ed.src));
        int rv = find(static_cast<int>(ed.dst));
        if (ru == rv) return;
        int rate = (clusters_[ru].active ? 1 : 0) + (clusters_[rv].active ? 1 : 0);
        if (rate == 0) return;  // rescheduled when one side activates by merge
        double slack = pz_.edge_cost[e] - phi(ed.src, t) - phi(ed.dst, t);
        if (slack < 0) slack = 0;
        push_event(t + slack / rate, kEdge, e);
    }

    void handle_edge(EdgeId e, double t) {
        const auto& ed = g_.edge(e);
        int ru = find(static_cast<int>(ed.src));
        int rv = find(static_cast<int>(ed.dst));
        if (ru == rv) return;
        double slack = pz_.edge_cost[e] - phi(ed.src, t) - phi(ed.dst, t);
        if (slack <= 1e-9 * (1.0 + pz_.edge_cost[e])) {
            merge(ru, rv, e, t);
            return;
        }
        int rate = (clusters_[ru].active ? 1 : 0) + (clusters_[rv].active ? 1 : 0);
        if (rate > 0) push_event(t + slack / rate, kEdge, e);
    }

    void handle_deactivate(std::uint32_t c) {
        Cluster& cl = clusters_[c];
        if (cl.merge_parent != -1 || !cl.active) return;  // stale
        cl.y = cl.deact_time - cl.start;
        cl.active = false;
    }

    void merge(int ru, int rv, EdgeId e, double t) {
        forest_.push_back(e);
        bool u_active = clusters_[ru].active;
        bool v_active = clusters_[rv].active;
        double remaining = (u_active ? clusters_[ru].deact_time - t : 0.0) +
                           (v_active ? clusters_[rv].deact_time - t : 0.0);
        if (remaining < 0) remaining = 0;

        // Finalize the constituents.
        for (int r : {ru, rv}) {
            Cluster& cl = clusters_[r];
            if (cl.active) {
                cl.y = t - cl.start;
                cl.active = false;
            }
        }

        int c = static_cast<int>(clusters_.size());
        clusters_.emplace_back();
        Cluster& nc = clusters_.back();
        nc.start = t;
        nc.active = remaining > 0;
        nc.deact_time = t + remaining;
        nc.min_node = std::min(clusters_[ru].min_node, clusters_[rv].min_node);
        clusters_[ru].merge_parent = c;
        clusters_[rv].merge_parent = c;
        cur_parent_.push_back(c);
        cur_parent_[ru] = c;
        cur_parent_[rv] = c;

        // A previously inactive side that just joined an active cluster makes
        // its boundary edges tighten faster than scheduled; rescan them.
        if (nc.active) {
            for (int r : {ru, rv}) {
                if (r == ru ? u_active : v_active) continue;
                for (NodeId v : clusters_[r].members)
                    for (EdgeId f : g_.incident_edges(v)) schedule_edge(f, t);
            }
        }

        auto& big = clusters_[ru].members.size() >= clusters_[rv].members.size()
                        ? clusters_[ru].members
                        : clusters_[rv].members;
        auto& small = clusters_[ru].members.size() >= clusters_[rv].members.size()
                          ? clusters_[rv].members
                          : clusters_[ru].members;
        nc.members = std::move(big);
        nc.members.insert(nc.members.end(), small.begin(), small.end());
        small.clear();
        small.shrink_to_fit();

        if (nc.active) push_event(nc.deact_time, kDeactivate, c);
    }

    const KnowledgeGraph& g_;
    const PrizeAssignment& pz_;
    std::vector<Cluster> clusters_;
    std::vector<int> cur_parent_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
    std::vector<EdgeId> forest_;
};

// Strong pruning of one forest component via rerooting: down[v] is the best
// pruned subtree rooted at v looking away from the parent, f[v] the best
// pruned tree containing v over the whole component.
struct PrunedTree {
    double net = 0.0;
    NodeId best_root = kNoNode;
    std::vector<NodeId> nodes;
    std::vector<EdgeId> edges;
};

PrunedTree strong_prune(const KnowledgeGraph& g, const PrizeAssignment& pz,
                        const std::vector<NodeId>& comp_nodes,
                        const std::vector<EdgeId>& comp_edges) {
    std::unordered_map<NodeId, std::vector<std::pair<NodeId, EdgeId>>> adj;
    for (NodeId v : comp_nodes) adj[v];
    for (EdgeId e : comp_edges) {
        adj[g.edge(e).src].emplace_back(g.edge(e).dst, e);
        adj[g.edge(e).dst].emplace_back(g.edge(e).src, e);
    }
    for (auto& [v, nb] : adj) std::sort(nb.begin(), nb.end());

    std::vector<NodeId> order;  // BFS from the smallest node id
    std::unordered_map<NodeId, std::pair<NodeId, EdgeId>> parent;
    NodeId start = *std::min_element(comp_nodes.begin(), comp_nodes.end());
    order.push_back(start);
    parent[start] = {kNoNode, kNoEdge};
    for (std::size_t i = 0; i < order.size(); ++i) {
        NodeId u = order[i];
        for (auto [v, e] : adj[u])
            if (!parent.count(v)) {
                parent[v] = {u, e};
                order.push_back(v);
            }
    }

    std::unordered_map<NodeId, double> down, f;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        NodeId v = *it;
        double d = pz.prize[v];
        for (auto [w, e] : adj[v]) {
            if (w == parent[v].first) continue;
            d += std::max(0.0, down[w] - pz.edge_cost[e]);
        }
        down[v] = d;
    }
    for (NodeId v : order) {
        auto [p, pe] = parent[v];
        if (p == kNoNode) {
            f[v] = down[v];
        } else {
            double rest = f[p] - std::max(0.0, down[v] - pz.edge_cost[pe]);
            f[v] = down[v] + std::max(0.0, rest - pz.edge_cost[pe]);
        }
    }

    PrunedTree out;
    out.best_root = start;
    for (NodeId v : order)
        if (f[v] > f[out.best_root] ||
            (f[v] == f[out.best_root] && v < out.best_root))
            out.best_root = v;
    out.net = f[out.best_root];

    // Re-walk from the best root keeping only strictly improving branches.
    // Seen from `cur`, the branch value of neighbor n is down[n] when n is a
    // child of cur in the BFS orientation, and f[n] minus cur's own
    // contribution when n is cur's BFS parent.
    std::vector<std::pair<NodeId, NodeId>> stack{{out.best_root, kNoNode}};
    while (!stack.empty()) {
        auto [cur, from] = stack.back();
        stack.pop_back();
        out.nodes.push_back(cur);
        for (auto [n, e] : adj[cur]) {
            if (n == from) continue;
            double branch;
            if (parent[n].first == cur)
                branch = down[n];
            else
                branch = f[n] - std::max(0.0, down[cur] - pz.edge_cost[e]);
            if (branch - pz.edge_cost[e] > 0) {
                out.edges.push_back(e);
                stack.emplace_back(n, cur);
            }
        }
    }
    std::sort(out.nodes.begin(), out.nodes.end());
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

SummarySubgraph finish_summary(const KnowledgeGraph& g, const PrizeAssignment& pz,
                               std::vector<NodeId> nodes, std::vector<EdgeId> edges,
                               const char* algo) {
    SummarySubgraph out;
    out.method = SummaryMethod::Pcst;
    out.params.algo = algo;
    out.terminals = pz.terminals;
    out.nodes = std::move(nodes);
    std::sort(edges.begin(), edges.end());
    for (EdgeId e : edges)
        out.edges.push_back({g.edge(e).src, g.edge(e).dst, e, g.edge(e).base_weight});
    std::set<NodeId> kept(out.nodes.begin(), out.nodes.end());
    for (NodeId v : pz.terminals)
        if (!kept.count(v)) out.dropped_terminals.push_back(v);
    out.cost = pcst_cost(out, pz);
    return out;
}

SummarySubgraph pcst_gw(const KnowledgeGraph& g, const PrizeAssignment& pz) {
    MoatGrowth growth(g, pz);
    std::vector<EdgeId> forest = growth.run();

    // Group forest edges and nodes into final components.
    std::unordered_map<int, std::vector<EdgeId>> comp_edges;
    std::unordered_map<int, std::vector<NodeId>> comp_nodes;
    for (EdgeId e : forest) comp_edges[growth.root_of(g.edge(e).src)].push_back(e);
    for (NodeId v = 0; v < g.node_count(); ++v)
        comp_nodes[growth.root_of(v)].push_back(v);

    std::vector<int> roots;
    for (const auto& kv : comp_nodes) roots.push_back(kv.first);
    std::sort(roots.begin(), roots.end());

    PrunedTree best;  // empty: net 0
    bool have_best = false;
    for (int r : roots) {
        const auto& nodes = comp_nodes[r];
        if (nodes.size() == 1 && pz.prize[nodes[0]] <= 0) continue;
        PrunedTree cand = strong_prune(g, pz, nodes, comp_edges[r]);
        if (cand.net <= 0) continue;
        if (!have_best || cand.net > best.net ||
            (cand.net == best.net && cand.best_root < best.best_root)) {
            best = std::move(cand);
            have_best = true;
        }
    }

    if (!have_best) return finish_summary(g, pz, {}, {}, "gw");
    return finish_summary(g, pz, std::move(best.nodes), std::move(best.edges), "gw");
}

SummarySubgraph pcst_paper_prim(const KnowledgeGraph& g, const PrizeAssignment& pz) {
    const std::size_t n = g.node_count();
    std::vector<double> key(n);
    for (NodeId v = 0; v < n; ++v) key[v] = -pz.prize[v];
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (NodeId v = 0; v < n; ++v) heap.push({key[v], v});

    detail::Dsu dsu(n);
    std::vector<bool> extracted(n, false);
    std::vector<EdgeId> es;
    while (!heap.empty()) {
        auto [val, u] = heap.top();
        heap.pop();
        if (extracted[u] || val != key[u]) continue;
        extracted[u] = true;
        for (EdgeId e : g.incident_edges(u)) {
            NodeId v = g.other_endpoint(e, u);
            if (extracted[v]) continue;  // v no longer queued
            double w = pz.edge_cost[e];
            if (w < key[v] && dsu.find(u) != dsu.find(v)) {
                key[v] = w;
                heap.push({w, v});
                dsu.unite(u, v);
                es.push_back(e);
            }
        }
    }

    // Keep only components that contain a positive-prize node.
    detail::Dsu comp(n);
    for (EdgeId e : es) comp.unite(g.edge(e).src, g.edge(e).dst);
    std::vector<bool> keep_root(n, false);
    for (NodeId v = 0; v < n; ++v)
        if (pz.prize[v] > 0) keep_root[comp.find(v)] = true;
    // A kept component contributes all of its nodes; isolated zero-prize
    // nodes sit in singleton components that were not marked.
    std::vector<NodeId> nodes;
    for (NodeId v = 0; v < n; ++v)
        if (keep_root[comp.find(v)]) nodes.push_back(v);
    std::vector<EdgeId> edges;
    for (EdgeId e : es)
        if (keep_root[comp.find(g.edge(e).src)]) edges.push_back(e);
    return finish_summary(g, pz, std::move(nodes), std::move(edges), "paper-prim");
}

}  // namespace

SummarySubgraph pcst_summary(const KnowledgeGraph& g, const PrizeAssignment& pz,
                             PcstAlgo algo) {
    if (pz.prize.size() != g.node_count() || pz.edge_cost.size() != g.edge_count())
        fail(ErrorCode::InvalidConfig, "prize assignment does not match the graph");
    for (double c : pz.edge_cost)
        if (!(c > 0)) fail(ErrorCode::InvalidConfig, "edge costs must be strictly positive");
    return algo == PcstAlgo::GoemansWilliamson ? pcst_gw(g, pz) : pcst_paper_prim(g, pz);
}

}  // namespace kgsum
