#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "kgsum/graph.hpp"
#include "kgsum/paths.hpp"
#include "kgsum/summary.hpp"

namespace kgsum {

// Both summaries and baseline path sets are scored through one abstraction so
// every metric has a single definition.
//
// The node-occurrence basis differs by form, deliberately:
//   PathSet  — every node of every path, duplicates kept across paths.
//   Subgraph — both endpoints of every edge (incidence multiset), so a tree
//              has nonzero redundancy through its internal nodes.
enum class ExplanationForm { PathSet, Subgraph };

struct Explanation {
    ExplanationForm form = ExplanationForm::Subgraph;
    std::vector<std::pair<NodeId, NodeId>> edges;  // endpoint pairs; PathSet keeps duplicates
    std::vector<EdgeId> edge_ids;                  // aligned with `edges`
    std::vector<NodeId> node_occurrences;          // multiset, basis depends on form
    std::vector<NodeId> unique_nodes;              // sorted support of node_occurrences

    bool empty() const { return edges.empty(); }

    // Path steps resolve to the highest-base-weight edge between the
    // endpoints (smallest id on ties), mirroring summary deserialization.
    static Explanation from_paths(const KnowledgeGraph& g,
                                  const std::vector<ExplanationPath>& paths);
    static Explanation from_subgraph(const SummarySubgraph& s);
};

// R(S) numerator choice. Incidence is the primary definition: duplicated
// occurrences over the occurrence basis. MultiNode is the alternative
// counter (share of distinct nodes appearing more than once).
enum class RedundancyMode { Incidence, MultiNode };

double comprehensibility(const Explanation& x);
double actionability(const Explanation& x, const KnowledgeGraph& g);
double diversity(const Explanation& x);
double redundancy(const Explanation& x, RedundancyMode mode = RedundancyMode::Incidence);
double relevance(const Explanation& x, const KnowledgeGraph& g);
double privacy(const Explanation& x, const KnowledgeGraph& g);

// Average node-set Jaccard over consecutive series entries; entries must be
// sorted unique node-id sets. Two empty sets count as identical (J = 1).
// Throws SeriesTooShort for fewer than two entries.
double consistency(const std::vector<std::vector<NodeId>>& series);

struct MetricsReport {
    double comprehensibility = 0.0;
    double actionability = 0.0;
    double diversity = 0.0;
    double redundancy = 0.0;
    double relevance = 0.0;
    double privacy = 0.0;
    std::optional<double> consistency;  // series-level, filled by the caller
    double wall_time_ms = 0.0;
    std::size_t peak_memory_bytes = 0;
};

// All six point metrics in one pass; consistency and the measurement fields
// are left for the caller.
MetricsReport point_metrics(const Explanation& x, const KnowledgeGraph& g,
                            RedundancyMode mode = RedundancyMode::Incidence);

struct Measured {
    double wall_ms = 0.0;
    std::size_t peak_bytes = 0;
};

// Runs fn once and reports wall time plus the high-water heap growth over the
// call (allocation-counter based, approximate). Not reentrant.
Measured measure(const std::function<void()>& fn);

}  // namespace kgsum
