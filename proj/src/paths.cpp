#include "kgsum/paths.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace kgsum {

namespace {

using nlohmann::json;

// Returns empty string on success, otherwise the rejection reason.
std::string resolve_path(const json& rec, const KnowledgeGraph& g, long lineno,
                         ExplanationPath& out) {
    if (!rec.is_object() || !rec.contains("user") || !rec.contains("item") ||
        !rec.contains("nodes") || !rec.contains("rank"))
        fail(ErrorCode::InvalidPath, "record must have user, item, nodes, rank", lineno);
    if (!rec["user"].is_string() || !rec["item"].is_string() || !rec["nodes"].is_array() ||
        !rec["rank"].is_number_integer())
        fail(ErrorCode::InvalidPath, "wrong field types", lineno);

    out.rank = rec["rank"].get<int>();
    if (out.rank < 1) fail(ErrorCode::InvalidPath, "rank must be >= 1", lineno);

    const auto& nodes = rec["nodes"];
    if (nodes.size() < 2) fail(ErrorCode::InvalidPath, "path needs at least one edge", lineno);
    if (!nodes.front().is_string() || nodes.front().get<std::string>() != rec["user"] ||
        !nodes.back().is_string() || nodes.back().get<std::string>() != rec["item"])
        fail(ErrorCode::InvalidPath, "nodes must start at user and end at item", lineno);

    out.nodes.clear();
    out.nodes.reserve(nodes.size());
    for (const auto& n : nodes) {
        if (!n.is_string()) fail(ErrorCode::InvalidPath, "node ids must be strings", lineno);
        auto label = n.get<std::string>();
        auto id = g.find(label);
        if (!id) return "unknown node '" + label + "'";
        out.nodes.push_back(*id);
    }
    out.user = out.nodes.front();
    out.item = out.nodes.back();
    if (g.kind(out.user) != NodeKind::User)
        fail(ErrorCode::InvalidPath, "path must start at a user node", lineno);
    if (g.kind(out.item) != NodeKind::Item)
        fail(ErrorCode::InvalidPath, "path must end at an item node", lineno);

    for (std::size_t i = 0; i + 1 < out.nodes.size(); ++i)
        if (!g.adjacent(out.nodes[i], out.nodes[i + 1]))
            return "no edge between '" + g.label(out.nodes[i]) + "' and '" +
                   g.label(out.nodes[i + 1]) + "'";
    return {};
}

}  // namespace

ExplanationPathSet parse_paths(std::istream& in, const KnowledgeGraph& g,
                               std::vector<PathReject>* rejected) {
    ExplanationPathSet set;
    std::set<std::tuple<NodeId, NodeId, int>> seen;
    std::string line;
    long lineno = 0;
    auto reject = [&](long ln, std::string reason) {
        if (rejected) rejected->push_back({ln, std::move(reason)});
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json rec = json::parse(line, nullptr, false);
        if (rec.is_discarded()) fail(ErrorCode::ParseError, "malformed JSON", lineno);

        ExplanationPath path;
        std::string reason = resolve_path(rec, g, lineno, path);
        if (!reason.empty()) {
            reject(lineno, reason);
            continue;
        }
        if (!seen.insert({path.user, path.item, path.rank}).second) {
            reject(lineno, "duplicate (user, item, rank) triple");
            continue;
        }
        set.K = std::max(set.K, path.rank);
        set.paths.push_back(std::move(path));
    }
    return set;
}

ExplanationPathSet parse_paths(const std::string& path, const KnowledgeGraph& g,
                               std::vector<PathReject>* rejected) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    return parse_paths(in, g, rejected);
}

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::UserCentric: return "user";
        case ScenarioKind::ItemCentric: return "item";
        case ScenarioKind::UserGroup: return "user-group";
        case ScenarioKind::ItemGroup: return "item-group";
    }
    return "?";
}

ScenarioSpec derive_scenario(const ExplanationPathSet& set, ScenarioKind kind,
                             std::span<const NodeId> subjects, int k) {
    if (k < 1) fail(ErrorCode::InvalidConfig, "scenario cutoff k must be >= 1");
    ScenarioSpec spec;
    spec.kind = kind;
    spec.k = k;
    spec.subjects.assign(subjects.begin(), subjects.end());
    std::sort(spec.subjects.begin(), spec.subjects.end());
    spec.subjects.erase(std::unique(spec.subjects.begin(), spec.subjects.end()),
                        spec.subjects.end());

    const bool by_user =
        kind == ScenarioKind::UserCentric || kind == ScenarioKind::UserGroup;
    std::unordered_set<NodeId> subject_set(spec.subjects.begin(), spec.subjects.end());
    std::set<NodeId> targets;
    for (const ExplanationPath& p : set.paths) {
        if (p.rank > k) continue;
        NodeId anchor = by_user ? p.user : p.item;
        if (!subject_set.count(anchor)) continue;
        targets.insert(by_user ? p.item : p.user);
        spec.path_subset.push_back(p);
    }
    if (spec.path_subset.empty())
        fail(ErrorCode::EmptyScenario,
             "no paths with rank <= " + std::to_string(k) + " match the subjects");
    spec.targets.assign(targets.begin(), targets.end());
    return spec;
}

std::vector<NodeId> terminal_set(const ScenarioSpec& spec) {
    std::set<NodeId> t(spec.subjects.begin(), spec.subjects.end());
    t.insert(spec.targets.begin(), spec.targets.end());
    if (t.size() < 2)
        fail(ErrorCode::DegenerateTerminals,
             "need at least two distinct terminals, got " + std::to_string(t.size()));
    return {t.begin(), t.end()};
}

}  // namespace kgsum
