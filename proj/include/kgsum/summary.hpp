#pragma once

#include <string>
#include <vector>

#include "kgsum/graph.hpp"

namespace kgsum {

enum class SummaryMethod { SteinerTree, Pcst };

std::string_view to_string(SummaryMethod method);

struct SummaryEdge {
    NodeId src;     // as stored in the graph (direction preserved)
    NodeId dst;
    EdgeId id;
    double weight;  // working weight (ST) or base weight (PCST)
};

// Run parameters echoed into the summary for provenance and file naming.
struct SummaryParams {
    int k = 0;
    double lambda = 0.0;
    std::string scenario;  // "user", "item", "user-group", "item-group"
    std::string subject;   // subject label, or group name for group scenarios
    std::string algo;      // "kmb", "gw", "paper-prim", "oracle"
};

// A compact connected explanation subgraph produced by one summarizer run.
//
// ST output and GW PCST output are trees (PCST possibly a single node); the
// paper-prim PCST comparison variant may return a forest. dropped_terminals
// is always empty for ST; PCST reports terminals pruned away by the prize
// trade-off.
struct SummarySubgraph {
    SummaryMethod method = SummaryMethod::SteinerTree;
    std::vector<NodeId> nodes;              // sorted ascending
    std::vector<SummaryEdge> edges;         // sorted by edge id
    std::vector<NodeId> terminals;          // sorted ascending
    std::vector<NodeId> dropped_terminals;  // sorted ascending
    // Objective value: total transformed edge cost for ST (not serialized),
    // C(S) = sum of edge costs minus sum of prizes for PCST.
    double cost = 0.0;
    SummaryParams params;
};

// nodes.size() == edges.size() + 1 and the edges connect all nodes.
bool is_tree(const SummarySubgraph& s);

// Serialization. Node references use string labels so summaries are portable
// across processes; key order and float formatting are deterministic, and
// reruns with identical inputs produce byte-identical text.
std::string to_json(const SummarySubgraph& s, const KnowledgeGraph& g);
SummarySubgraph summary_from_json(const std::string& text, const KnowledgeGraph& g);
SummarySubgraph load_summary(const std::string& path, const KnowledgeGraph& g);

}  // namespace kgsum
