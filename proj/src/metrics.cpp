#include "kgsum/metrics.hpp"

#include <algorithm>
#include <chrono>

#include "kgsum/error.hpp"
#include "kgsum/memtrack.hpp"

namespace kgsum {

namespace {

void require_nonempty(const Explanation& x) {
    if (x.edges.empty())
        fail(ErrorCode::EmptyExplanation, "metric undefined on an empty explanation");
}

std::vector<NodeId> support(std::vector<NodeId> occurrences) {
    std::sort(occurrences.begin(), occurrences.end());
    occurrences.erase(std::unique(occurrences.begin(), occurrences.end()),
                      occurrences.end());
    return occurrences;
}

// Highest base weight wins; edges_between returns ascending ids, so the first
// maximum is also the smallest id.
EdgeId resolve_step(const KnowledgeGraph& g, NodeId a, NodeId b) {
    std::vector<EdgeId> ids = g.edges_between(a, b);
    if (ids.empty())
        fail(ErrorCode::UnknownEdge,
             "no edge between '" + g.label(a) + "' and '" + g.label(b) + "'");
    EdgeId best = ids[0];
    for (EdgeId e : ids)
        if (g.edge(e).base_weight > g.edge(best).base_weight) best = e;
    return best;
}

double count_kind(const Explanation& x, const KnowledgeGraph& g, NodeKind kind) {
    std::size_t hits = 0;
    for (NodeId v : x.unique_nodes)
        if (g.kind(v) == kind) ++hits;
    return static_cast<double>(hits);
}

}  // namespace

Explanation Explanation::from_paths(const KnowledgeGraph& g,
                                    const std::vector<ExplanationPath>& paths) {
    Explanation x;
    x.form = ExplanationForm::PathSet;
    for (const ExplanationPath& p : paths) {
        for (NodeId v : p.nodes) x.node_occurrences.push_back(v);
        for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
            NodeId a = p.nodes[i];
            NodeId b = p.nodes[i + 1];
            x.edges.emplace_back(a, b);
            x.edge_ids.push_back(resolve_step(g, a, b));
        }
    }
    x.unique_nodes = support(x.node_occurrences);
    return x;
}

Explanation Explanation::from_subgraph(const SummarySubgraph& s) {
    Explanation x;
    x.form = ExplanationForm::Subgraph;
    for (const SummaryEdge& e : s.edges) {
        x.edges.emplace_back(e.src, e.dst);
        x.edge_ids.push_back(e.id);
        x.node_occurrences.push_back(e.src);
        x.node_occurrences.push_back(e.dst);
    }
    x.unique_nodes = support(x.node_occurrences);
    return x;
}

double comprehensibility(const Explanation& x) {
    require_nonempty(x);
    return 1.0 / static_cast<double>(x.edges.size());
}

double actionability(const Explanation& x, const KnowledgeGraph& g) {
    require_nonempty(x);
    return count_kind(x, g, NodeKind::Item) / static_cast<double>(x.unique_nodes.size());
}

double diversity(const Explanation& x) {
    require_nonempty(x);
    const std::size_t m = x.edges.size();
    if (m == 1) return 1.0;  // no pair to compare; documented convention
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const auto& [a1, a2] = x.edges[i];
            const auto& [b1, b2] = x.edges[j];
            int shared = (a1 == b1) + (a1 == b2) + (a2 == b1) + (a2 == b2);
            sum += 1.0 - static_cast<double>(shared) / (4.0 - shared);
        }
    }
    return sum / (0.5 * static_cast<double>(m) * static_cast<double>(m - 1));
}

double redundancy(const Explanation& x, RedundancyMode mode) {
    require_nonempty(x);
    std::vector<NodeId> occ = x.node_occurrences;
    std::sort(occ.begin(), occ.end());
    if (mode == RedundancyMode::Incidence) {
        double total = static_cast<double>(occ.size());
        double uniq = static_cast<double>(x.unique_nodes.size());
        return (total - uniq) / total;
    }
    // MultiNode: share of distinct nodes that occur more than once.
    std::size_t repeated = 0;
    for (std::size_t i = 0; i < occ.size();) {
        std::size_t j = i;
        while (j < occ.size() && occ[j] == occ[i]) ++j;
        if (j - i > 1) ++repeated;
        i = j;
    }
    return static_cast<double>(repeated) / static_cast<double>(x.unique_nodes.size());
}

double relevance(const Explanation& x, const KnowledgeGraph& g) {
    require_nonempty(x);
    double sum = 0.0;
    for (EdgeId e : x.edge_ids) {
        if (e >= g.edge_count())
            fail(ErrorCode::UnknownEdge, "edge id " + std::to_string(e) + " out of range");
        sum += g.edge(e).base_weight;
    }
    return sum;
}

double privacy(const Explanation& x, const KnowledgeGraph& g) {
    require_nonempty(x);
    return 1.0 - count_kind(x, g, NodeKind::User) / static_cast<double>(x.unique_nodes.size());
}

double consistency(const std::vector<std::vector<NodeId>>& series) {
    if (series.size() < 2)
        fail(ErrorCode::SeriesTooShort,
             "consistency needs a series of at least two summaries, got " +
                 std::to_string(series.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        const auto& a = series[i];
        const auto& b = series[i + 1];
        if (a.empty() && b.empty()) {
            sum += 1.0;  // two empty summaries are identical
            continue;
        }
        std::vector<NodeId> inter;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                              std::back_inserter(inter));
        double uni = static_cast<double>(a.size() + b.size() - inter.size());
        sum += static_cast<double>(inter.size()) / uni;
    }
    return sum / static_cast<double>(series.size() - 1);
}

MetricsReport point_metrics(const Explanation& x, const KnowledgeGraph& g,
                            RedundancyMode mode) {
    MetricsReport r;
    r.comprehensibility = comprehensibility(x);
    r.actionability = actionability(x, g);
    r.diversity = diversity(x);
    r.redundancy = redundancy(x, mode);
    r.relevance = relevance(x, g);
    r.privacy = privacy(x, g);
    return r;
}

Measured measure(const std::function<void()>& fn) {
    memtrack::reset_peak();
    const std::size_t floor = memtrack::current_bytes();
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    Measured m;
    m.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    const std::size_t peak = memtrack::peak_bytes();
    m.peak_bytes = peak > floor ? peak - floor : 0;
    return m;
}

}  // namespace kgsum
