#pragma once

#include <vector>

#include "kgsum/graph.hpp"

namespace kgsum {

// Exhaustive reference solvers. Both are exponential in the node count and
// exist purely as ground truth for the approximation algorithms; they refuse
// anything that is not toy-sized.

struct OracleTree {
    double cost = 0.0;
    std::vector<EdgeId> edges;  // ascending id
    std::vector<NodeId> nodes;  // ascending id
};

// Minimum-cost connected subgraph spanning all `terminals` under the given
// per-edge costs. Enumerates subsets of optional intermediate nodes and takes
// the induced MST of each candidate node set, which is exact for this
// problem. Throws OracleTooLarge above 16 nodes, DisconnectedTerminals when
// no subset connects the terminals.
OracleTree brute_force_steiner(const KnowledgeGraph& g,
                               const std::vector<double>& edge_cost,
                               const std::vector<NodeId>& terminals);

struct OraclePcst {
    // Objective value cost(edges) - prize(nodes); the empty selection scores
    // 0, so the optimum is always <= 0.
    double net_cost = 0.0;
    std::vector<EdgeId> edges;
    std::vector<NodeId> nodes;  // empty means "select nothing"
};

// Minimizes cost(S) - prize(S) over connected node subsets S plus the empty
// set. First subset found wins ties (subsets enumerated in ascending mask
// order). Throws OracleTooLarge above 12 nodes.
OraclePcst brute_force_pcst(const KnowledgeGraph& g,
                            const std::vector<double>& prize,
                            const std::vector<double>& edge_cost);

}  // namespace kgsum
