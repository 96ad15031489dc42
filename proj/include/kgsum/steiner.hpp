#pragma once

#include <span>

#include "kgsum/reweight.hpp"
#include "kgsum/summary.hpp"

namespace kgsum {

struct SteinerParams {
    // Offset keeping transformed costs strictly positive, so Dijkstra stays
    // valid and edge count acts as a tie-breaking pressure toward small trees.
    double epsilon = 1e-3;
};

// Cost transform mapping "heavy edges are good" onto a shortest-path metric:
// cost(e) = (w_max + epsilon) - w(e), with w(e) <= w_max. Maximizing total
// weight at minimal edge count becomes minimizing total cost.
double edge_cost(double w, double w_max, double epsilon);

// Steiner-tree summarizer (metric closure + MST, the classic 2-approximation):
// shortest paths between terminals under the transformed costs, MST of that
// closure, expansion back to graph edges, then an MST over the expanded
// subgraph and pruning of non-terminal leaves. All ties (equal distances,
// equal MST costs, equal-cost parallel edges) break toward smaller node/edge
// ids, so results are deterministic.
//
// Terminals must be >= 2, distinct, and mutually reachable in the undirected
// sense (DisconnectedTerminals lists the offending subset otherwise).
SummarySubgraph steiner_summary(const KnowledgeGraph& g, const WorkingWeights& weights,
                                std::span<const NodeId> terminals,
                                const SteinerParams& params = {});

}  // namespace kgsum
