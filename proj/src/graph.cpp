#include "kgsum/graph.hpp"

#include <cmath>
#include <unordered_set>

namespace kgsum {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::InvalidRecord: return "InvalidRecord";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::UnknownEdge: return "UnknownEdge";
        case ErrorCode::DuplicateRating: return "DuplicateRating";
        case ErrorCode::FutureTimestamp: return "FutureTimestamp";
        case ErrorCode::InvalidPath: return "InvalidPath";
        case ErrorCode::EmptyScenario: return "EmptyScenario";
        case ErrorCode::DegenerateTerminals: return "DegenerateTerminals";
        case ErrorCode::DisconnectedTerminals: return "DisconnectedTerminals";
        case ErrorCode::NoEdges: return "NoEdges";
        case ErrorCode::OracleTooLarge: return "OracleTooLarge";
        case ErrorCode::EmptyExplanation: return "EmptyExplanation";
        case ErrorCode::SeriesTooShort: return "SeriesTooShort";
        case ErrorCode::InfeasibleSpec: return "InfeasibleSpec";
        case ErrorCode::IsolatedUser: return "IsolatedUser";
        case ErrorCode::InsufficientPopulation: return "InsufficientPopulation";
    }
    return "UnknownError";
}

std::string Error::format(ErrorCode code, const std::string& message, long line) {
    std::string out{to_string(code)};
    if (line >= 0) {
        out += " (line ";
        out += std::to_string(line);
        out += ")";
    }
    out += ": ";
    out += message;
    return out;
}

std::string_view to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::User: return "user";
        case NodeKind::Item: return "item";
        case NodeKind::External: return "external";
    }
    return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view text) {
    if (text == "user") return NodeKind::User;
    if (text == "item") return NodeKind::Item;
    if (text == "external") return NodeKind::External;
    return std::nullopt;
}

void WeightParams::validate() const {
    if (beta1 < 0 || beta2 < 0 || gamma < 0)
        fail(ErrorCode::InvalidConfig, "beta1, beta2, gamma must be non-negative");
    if (beta1 + beta2 <= 0)
        fail(ErrorCode::InvalidConfig, "beta1 + beta2 must be positive");
}

double recency(std::int64_t t, const WeightParams& params) {
    if (t > params.t0)
        fail(ErrorCode::FutureTimestamp,
             "timestamp " + std::to_string(t) + " is after t0 " + std::to_string(params.t0));
    return std::exp(-params.gamma * static_cast<double>(params.t0 - t));
}

NodeId NodeTable::add(std::string label, NodeKind kind) {
    auto [it, inserted] = index_.try_emplace(label, static_cast<NodeId>(kinds_.size()));
    if (!inserted)
        fail(ErrorCode::InvalidRecord, "duplicate node id '" + label + "'");
    kinds_.push_back(kind);
    labels_.push_back(std::move(label));
    return it->second;
}

std::optional<NodeId> NodeTable::find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

namespace {

void fill_csr(std::vector<std::uint32_t>& offsets, std::vector<EdgeId>& list,
              std::size_t nodes, std::size_t entries) {
    // offsets currently holds per-node counts at [1..nodes]; turn into prefix
    // sums so offsets[v]..offsets[v+1] delimits v's slice.
    offsets.resize(nodes + 1);
    for (std::size_t v = 0; v < nodes; ++v) offsets[v + 1] += offsets[v];
    list.resize(entries);
}

}  // namespace

KnowledgeGraph KnowledgeGraph::build(NodeTable nodes,
                                     const std::vector<RatingRecord>& ratings,
                                     const std::vector<TripleRecord>& triples,
                                     std::vector<std::string> relation_names,
                                     const WeightParams& params,
                                     const AttributeWeights& attr) {
    params.validate();

    KnowledgeGraph g;
    g.nodes_ = std::move(nodes);
    g.relation_names_ = std::move(relation_names);
    g.params_ = params;

    const std::size_t n = g.nodes_.size();
    for (NodeId v = 0; v < n; ++v) ++g.kind_counts_[static_cast<int>(g.nodes_.kind(v))];

    auto check_node = [&](NodeId v, const char* role) {
        if (v >= n)
            fail(ErrorCode::UnknownNode,
                 std::string(role) + " node id " + std::to_string(v) + " not declared");
    };

    g.edges_.reserve(ratings.size() + triples.size());

    std::unordered_set<std::uint64_t> seen_pairs;
    seen_pairs.reserve(ratings.size() * 2);
    for (const RatingRecord& r : ratings) {
        check_node(r.user, "rating user");
        check_node(r.item, "rating item");
        if (g.nodes_.kind(r.user) != NodeKind::User || g.nodes_.kind(r.item) != NodeKind::Item)
            fail(ErrorCode::InvalidRecord,
                 "rating edge " + g.nodes_.label(r.user) + " -> " + g.nodes_.label(r.item) +
                     " must go user -> item");
        if (r.rating <= 0)
            fail(ErrorCode::InvalidRecord, "non-positive rating for " + g.nodes_.label(r.user));
        if (!seen_pairs.insert(pair_key(r.user, r.item)).second)
            fail(ErrorCode::DuplicateRating,
                 "duplicate rating " + g.nodes_.label(r.user) + " -> " + g.nodes_.label(r.item));
        double w = params.beta1 * r.rating +
                   (params.beta2 > 0 ? params.beta2 * recency(r.timestamp, params) : 0.0);
        g.edges_.push_back({r.user, r.item, w, -1});
    }
    g.rating_edges_ = g.edges_.size();

    for (const TripleRecord& t : triples) {
        check_node(t.head, "triple head");
        check_node(t.tail, "triple tail");
        if (t.head == t.tail)
            fail(ErrorCode::InvalidRecord, "self-loop triple at " + g.nodes_.label(t.head));
        double w = attr.default_weight;
        if (t.relation >= 0) {
            auto it = attr.per_relation.find(g.relation_names_[t.relation]);
            if (it != attr.per_relation.end()) w = it->second;
        }
        g.edges_.push_back({t.head, t.tail, w, t.relation});
    }

    const std::size_t m = g.edges_.size();
    g.out_.offsets.assign(n + 1, 0);
    g.in_.offsets.assign(n + 1, 0);
    g.inc_.offsets.assign(n + 1, 0);
    for (const Edge& e : g.edges_) {
        ++g.out_.offsets[e.src + 1];
        ++g.in_.offsets[e.dst + 1];
        ++g.inc_.offsets[e.src + 1];
        ++g.inc_.offsets[e.dst + 1];
    }
    fill_csr(g.out_.offsets, g.out_.list, n, m);
    fill_csr(g.in_.offsets, g.in_.list, n, m);
    fill_csr(g.inc_.offsets, g.inc_.list, n, 2 * m);

    std::vector<std::uint32_t> out_pos(g.out_.offsets.begin(), g.out_.offsets.end() - 1);
    std::vector<std::uint32_t> in_pos(g.in_.offsets.begin(), g.in_.offsets.end() - 1);
    std::vector<std::uint32_t> inc_pos(g.inc_.offsets.begin(), g.inc_.offsets.end() - 1);
    g.next_same_pair_.assign(m, kNoEdge);
    g.pair_index_.reserve(m * 2);
    for (EdgeId e = 0; e < m; ++e) {
        const Edge& ed = g.edges_[e];
        g.out_.list[out_pos[ed.src]++] = e;
        g.in_.list[in_pos[ed.dst]++] = e;
        g.inc_.list[inc_pos[ed.src]++] = e;
        g.inc_.list[inc_pos[ed.dst]++] = e;
        // Chain parallel edges newest-first; edges_between re-sorts ascending.
        auto [it, inserted] = g.pair_index_.try_emplace(pair_key(ed.src, ed.dst), e);
        if (!inserted) {
            g.next_same_pair_[e] = it->second;
            it->second = e;
        }
    }
    return g;
}

std::vector<EdgeId> KnowledgeGraph::edges_between(NodeId a, NodeId b) const {
    std::vector<EdgeId> out;
    auto it = pair_index_.find(pair_key(a, b));
    for (EdgeId e = (it == pair_index_.end() ? kNoEdge : it->second); e != kNoEdge;
         e = next_same_pair_[e])
        out.push_back(e);
    // Chain is newest-first; callers want ascending edge id.
    for (std::size_t i = 0, j = out.size(); i + 1 < j; ++i, --j) std::swap(out[i], out[j - 1]);
    return out;
}

bool KnowledgeGraph::adjacent(NodeId a, NodeId b) const {
    return pair_index_.count(pair_key(a, b)) != 0;
}

}  // namespace kgsum
