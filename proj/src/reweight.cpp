#include "kgsum/reweight.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace kgsum {

namespace {

double max_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

}  // namespace

WorkingWeights WorkingWeights::from_base(const KnowledgeGraph& g, double delta) {
    WorkingWeights w;
    w.weight.reserve(g.edge_count());
    for (const auto& e : g.edges()) w.weight.push_back(e.base_weight + delta);
    w.base = w.weight;
    w.lambda = 0.0;
    w.max_weight = max_of(w.weight);
    w.scenario_id = "base";
    return w;
}

WorkingWeights adjust_weights(const KnowledgeGraph& g, const ScenarioSpec& spec,
                              const ReweightParams& params) {
    if (params.lambda < 0) fail(ErrorCode::InvalidConfig, "lambda must be non-negative");
    if (params.delta < 0) fail(ErrorCode::InvalidConfig, "delta must be non-negative");
    if (g.edge_count() == 0) fail(ErrorCode::NoEdges, "graph has no edges");

    // Coverage counts per edge. A path step (a,b) covers every stored edge
    // between a and b, whichever way it points.
    std::unordered_map<EdgeId, double> coverage;
    const bool by_user =
        spec.kind == ScenarioKind::UserCentric || spec.kind == ScenarioKind::UserGroup;
    if (params.count == CoverageCount::PerTarget) {
        // One vote per target, no matter how many of its paths share an edge.
        std::unordered_map<NodeId, std::unordered_set<EdgeId>> per_target;
        for (const ExplanationPath& p : spec.path_subset) {
            NodeId target = by_user ? p.item : p.user;
            auto& edges = per_target[target];
            for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
                for (EdgeId e : g.edges_between(p.nodes[i], p.nodes[i + 1])) edges.insert(e);
        }
        for (const auto& [target, edges] : per_target)
            for (EdgeId e : edges) coverage[e] += 1.0;
    } else {
        for (const ExplanationPath& p : spec.path_subset)
            for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
                for (EdgeId e : g.edges_between(p.nodes[i], p.nodes[i + 1])) coverage[e] += 1.0;
    }

    WorkingWeights w = WorkingWeights::from_base(g, params.delta);
    w.lambda = params.lambda;
    w.scenario_id = std::string(to_string(spec.kind)) + ":k" + std::to_string(spec.k);
    const double n_targets = static_cast<double>(spec.targets.size());
    for (const auto& [e, c] : coverage)
        w.weight[e] = w.base[e] * (1.0 + params.lambda * c / n_targets);
    w.max_weight = max_of(w.weight);
    return w;
}

}  // namespace kgsum
