#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "kgsum/graph.hpp"

namespace kgsum {

// One explanation path (u, v1, ..., i): why item i was recommended to user u,
// at position `rank` of u's recommendation list.
struct ExplanationPath {
    NodeId user = kNoNode;
    NodeId item = kNoNode;
    std::vector<NodeId> nodes;  // full sequence, nodes.front()==user, nodes.back()==item
    int rank = 0;               // 1-based

    std::size_t length() const { return nodes.size() - 1; }  // edge count
};

struct PathReject {
    long line;
    std::string reason;
};

// All parsed paths plus K = max rank present (0 when empty).
struct ExplanationPathSet {
    std::vector<ExplanationPath> paths;
    int K = 0;
};

// Parses JSONL explanation paths:
//   {"user":"u1","item":"i9","nodes":["u1","x","i9"],"rank":1}
//
// Malformed JSON or structurally invalid records (missing fields, rank < 1,
// fewer than 2 nodes, endpoints not matching user/item fields, endpoint kinds
// not user/item) throw ParseError / InvalidPath with the line number. Paths
// that are well-formed but do not exist in this graph (an unknown node id, or
// a consecutive pair with no edge in either direction) are skipped
// individually and reported through `rejected`, as are duplicate
// (user, item, rank) triples.
ExplanationPathSet parse_paths(std::istream& in, const KnowledgeGraph& g,
                               std::vector<PathReject>* rejected = nullptr);
ExplanationPathSet parse_paths(const std::string& path, const KnowledgeGraph& g,
                               std::vector<PathReject>* rejected = nullptr);

enum class ScenarioKind { UserCentric, ItemCentric, UserGroup, ItemGroup };

std::string_view to_string(ScenarioKind kind);

// A concrete evaluation scenario at cutoff k: the subjects (one user/item or
// a group), the paths retained (rank <= k, subject endpoint in subjects), and
// the induced targets (opposite endpoints of the retained paths).
struct ScenarioSpec {
    ScenarioKind kind = ScenarioKind::UserCentric;
    int k = 0;
    std::vector<NodeId> subjects;          // sorted
    std::vector<NodeId> targets;           // sorted, R_u / C_i / R_D / C_F
    std::vector<ExplanationPath> path_subset;
};

// Filters `set` down to the scenario. Subjects are matched against the user
// endpoint for user scenarios and the item endpoint for item scenarios; group
// targets are the union over the group. Throws EmptyScenario when no path
// survives, InvalidConfig when k < 1.
ScenarioSpec derive_scenario(const ExplanationPathSet& set, ScenarioKind kind,
                             std::span<const NodeId> subjects, int k);

// T = subjects  U  targets, sorted ascending. Throws DegenerateTerminals when
// |T| < 2.
std::vector<NodeId> terminal_set(const ScenarioSpec& spec);

}  // namespace kgsum
