#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgsum/error.hpp"

namespace kgsum {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);
inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

enum class NodeKind : std::uint8_t { User, Item, External };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view text);

// One rating event: user rated item with value r at unix time t.
struct RatingRecord {
    NodeId user = kNoNode;
    NodeId item = kNoNode;
    double rating = 0.0;
    std::int64_t timestamp = 0;
};

// One attribute triple, already resolved to node ids. The relation is an
// index into the graph's relation-name table (-1 for none).
struct TripleRecord {
    NodeId head = kNoNode;
    NodeId tail = kNoNode;
    std::int32_t relation = -1;
};

// Parameters of the rating-edge weight w = beta1 * r + beta2 * recency(t),
// with recency(t) = exp(-gamma * (t0 - t)).
struct WeightParams {
    double beta1 = 1.0;
    double beta2 = 0.0;
    double gamma = 0.0;
    std::int64_t t0 = 0;

    // Throws InvalidConfig unless beta1, beta2, gamma >= 0 and beta1 + beta2 > 0.
    void validate() const;
};

// Base weights of attribute edges: a flat default plus optional per-relation
// overrides (keyed by relation name).
struct AttributeWeights {
    double default_weight = 0.0;
    std::unordered_map<std::string, double> per_relation;
};

// exp(-gamma * (t0 - t)). Throws FutureTimestamp when t > t0.
double recency(std::int64_t t, const WeightParams& params);

// Node table: dense ids in insertion order, kinds, and external string labels.
class NodeTable {
  public:
    NodeId add(std::string label, NodeKind kind);
    std::optional<NodeId> find(std::string_view label) const;

    std::size_t size() const { return kinds_.size(); }
    NodeKind kind(NodeId v) const { return kinds_[v]; }
    const std::string& label(NodeId v) const { return labels_[v]; }

  private:
    std::vector<NodeKind> kinds_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    friend class KnowledgeGraph;
};

// Immutable knowledge graph over users, items, and external attribute nodes.
//
// Edges are stored directed as given (ratings user->item, triples head->tail)
// but every traversal in this library treats them as undirected; use
// incident_edges() for that view. Node and edge ids are dense and assigned in
// input order, so identical inputs build identical graphs.
class KnowledgeGraph {
  public:
    struct Edge {
        NodeId src;
        NodeId dst;
        double base_weight;     // w_M for ratings, w_A for attribute edges
        std::int32_t relation;  // index into relation_names(), -1 for ratings
    };

    static KnowledgeGraph build(NodeTable nodes,
                                const std::vector<RatingRecord>& ratings,
                                const std::vector<TripleRecord>& triples,
                                std::vector<std::string> relation_names,
                                const WeightParams& params,
                                const AttributeWeights& attr = {});

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    std::size_t rating_edge_count() const { return rating_edges_; }

    NodeKind kind(NodeId v) const { return nodes_.kind(v); }
    const std::string& label(NodeId v) const { return nodes_.label(v); }
    std::optional<NodeId> find(std::string_view label) const { return nodes_.find(label); }
    std::size_t count_of(NodeKind kind) const { return kind_counts_[static_cast<int>(kind)]; }

    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::string>& relation_names() const { return relation_names_; }

    std::span<const EdgeId> out_edges(NodeId v) const { return csr_span(out_, v); }
    std::span<const EdgeId> in_edges(NodeId v) const { return csr_span(in_, v); }
    // Undirected view: all edges touching v, ascending edge id.
    std::span<const EdgeId> incident_edges(NodeId v) const { return csr_span(inc_, v); }

    NodeId other_endpoint(EdgeId e, NodeId v) const {
        const Edge& ed = edges_[e];
        return ed.src == v ? ed.dst : ed.src;
    }

    // Edges between a and b in either direction, ascending edge id.
    // Small by construction (parallel edges are rare), hence a plain vector.
    std::vector<EdgeId> edges_between(NodeId a, NodeId b) const;
    bool adjacent(NodeId a, NodeId b) const;

    const WeightParams& weight_params() const { return params_; }

  private:
    struct Csr {
        std::vector<std::uint32_t> offsets;
        std::vector<EdgeId> list;
    };

    static std::span<const EdgeId> csr_span(const Csr& csr, NodeId v) {
        return {csr.list.data() + csr.offsets[v], csr.list.data() + csr.offsets[v + 1]};
    }

    static std::uint64_t pair_key(NodeId a, NodeId b) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | b;
    }

    NodeTable nodes_;
    std::vector<Edge> edges_;
    std::vector<std::string> relation_names_;
    std::size_t rating_edges_ = 0;
    std::size_t kind_counts_[3] = {0, 0, 0};
    Csr out_, in_, inc_;
    // First edge id for each unordered node pair; parallel edges are chained
    // through next_same_pair_.
    std::unordered_map<std::uint64_t, EdgeId> pair_index_;
    std::vector<EdgeId> next_same_pair_;
    WeightParams params_;
};

}  // namespace kgsum
