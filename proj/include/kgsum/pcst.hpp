#pragma once

#include <span>

#include "kgsum/reweight.hpp"
#include "kgsum/summary.hpp"

namespace kgsum {

enum class PrizeMode { Weighted, Unit };

// Node prizes and edge costs for one prize-collecting run.
struct PrizeAssignment {
    PrizeMode mode = PrizeMode::Unit;
    double alpha = 0.0;  // Weighted: terminal prize (max working weight)
    double beta = 0.0;   // Weighted: non-terminal prize (min working weight)
    double rho = 1.0;    // Unit: terminal prize multiplier
    std::vector<double> prize;      // per node id
    std::vector<double> edge_cost;  // per edge id, strictly positive
    std::vector<NodeId> terminals;  // sorted ascending
};

// Weighted mode: prizes alpha/beta from the extreme working weights, edge
// costs via the ST cost transform (epsilon as there). Unit mode: prize rho on
// terminals, 0 elsewhere, every edge cost 1 (weights may be null).
PrizeAssignment assign_prizes(const KnowledgeGraph& g, const WorkingWeights* weights,
                              std::span<const NodeId> terminals, PrizeMode mode, double rho = 1.0,
                              double epsilon = 1e-3);

// C(S) = sum of edge costs over S minus sum of prizes over S's nodes.
double pcst_cost(const SummarySubgraph& s, const PrizeAssignment& prizes);

enum class PcstAlgo {
    // Normative: Goemans-Williamson moat growing with strong pruning; returns
    // the best-net-worth tree (possibly a single node, or empty when no node
    // has positive prize). C(S) <= 0 always.
    GoemansWilliamson,
    // Comparison variant: the prize-seeded Prim-style sweep, executed
    // literally (it visits every node), with the output pruned to components
    // containing positive-prize nodes. May return a forest.
    PaperPrim,
};

SummarySubgraph pcst_summary(const KnowledgeGraph& g, const PrizeAssignment& prizes,
                             PcstAlgo algo = PcstAlgo::GoemansWilliamson);

}  // namespace kgsum
