#include "kgsum/summary.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace kgsum {

std::string_view to_string(SummaryMethod method) {
    return method == SummaryMethod::SteinerTree ? "st" : "pcst";
}

bool is_tree(const SummarySubgraph& s) {
    if (s.nodes.empty()) return false;
    if (s.edges.size() + 1 != s.nodes.size()) return false;
    std::unordered_map<NodeId, std::size_t> index;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) index[s.nodes[i]] = i;
    std::vector<std::size_t> parent(s.nodes.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const SummaryEdge& e : s.edges) {
        auto a = index.find(e.src), b = index.find(e.dst);
        if (a == index.end() || b == index.end()) return false;
        std::size_t ra = find(a->second), rb = find(b->second);
        if (ra == rb) return false;  // cycle
        parent[ra] = rb;
    }
    return true;  // n-1 acyclic edges over n nodes => connected tree
}

namespace {

using ordered_json = nlohmann::ordered_json;

std::string label_of(const KnowledgeGraph& g, NodeId v) { return g.label(v); }

std::vector<std::string> sorted_labels(const KnowledgeGraph& g, const std::vector<NodeId>& ids) {
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (NodeId v : ids) out.push_back(label_of(g, v));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

std::string to_json(const SummarySubgraph& s, const KnowledgeGraph& g) {
    ordered_json j;
    j["method"] = std::string(to_string(s.method));
    j["algo"] = s.params.algo;
    j["scenario"] = s.params.scenario;
    j["subject"] = s.params.subject;
    j["k"] = s.params.k;
    j["lambda"] = s.params.lambda;
    j["terminals"] = sorted_labels(g, s.terminals);
    j["dropped_terminals"] = sorted_labels(g, s.dropped_terminals);
    j["nodes"] = sorted_labels(g, s.nodes);

    std::vector<std::tuple<std::string, std::string, double>> edges;
    edges.reserve(s.edges.size());
    for (const SummaryEdge& e : s.edges)
        edges.emplace_back(label_of(g, e.src), label_of(g, e.dst), e.weight);
    std::sort(edges.begin(), edges.end());
    ordered_json jedges = ordered_json::array();
    for (const auto& [src, dst, w] : edges) jedges.push_back({src, dst, w});
    j["edges"] = std::move(jedges);

    if (s.method == SummaryMethod::Pcst) j["cost"] = s.cost;
    return j.dump(2) + "\n";
}

SummarySubgraph summary_from_json(const std::string& text, const KnowledgeGraph& g) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded()) fail(ErrorCode::ParseError, "malformed summary JSON");

    auto resolve = [&](const std::string& label) {
        auto id = g.find(label);
        if (!id) fail(ErrorCode::UnknownNode, "summary references unknown node '" + label + "'");
        return *id;
    };
    auto resolve_list = [&](const ordered_json& arr) {
        std::vector<NodeId> out;
        for (const auto& v : arr) out.push_back(resolve(v.get<std::string>()));
        std::sort(out.begin(), out.end());
        return out;
    };

    SummarySubgraph s;
    const std::string method = j.value("method", "st");
    s.method = method == "pcst" ? SummaryMethod::Pcst : SummaryMethod::SteinerTree;
    s.params.algo = j.value("algo", "");
    s.params.scenario = j.value("scenario", "");
    s.params.subject = j.value("subject", "");
    s.params.k = j.value("k", 0);
    s.params.lambda = j.value("lambda", 0.0);
    s.cost = j.value("cost", 0.0);
    s.terminals = resolve_list(j.at("terminals"));
    s.dropped_terminals = resolve_list(j.at("dropped_terminals"));
    s.nodes = resolve_list(j.at("nodes"));
    for (const auto& e : j.at("edges")) {
        NodeId src = resolve(e.at(0).get<std::string>());
        NodeId dst = resolve(e.at(1).get<std::string>());
        // The concrete edge id is not serialized; rebind to the stored edge
        // with the largest base weight (smallest id on ties).
        EdgeId best = kNoEdge;
        for (EdgeId cand : g.edges_between(src, dst)) {
            if (best == kNoEdge || g.edge(cand).base_weight > g.edge(best).base_weight)
                best = cand;
        }
        if (best == kNoEdge)
            fail(ErrorCode::UnknownEdge,
                 "summary edge " + g.label(src) + " -- " + g.label(dst) + " not in graph");
        s.edges.push_back({src, dst, best, e.at(2).get<double>()});
    }
    std::sort(s.edges.begin(), s.edges.end(),
              [](const SummaryEdge& a, const SummaryEdge& b) { return a.id < b.id; });
    return s;
}

SummarySubgraph load_summary(const std::string& path, const KnowledgeGraph& g) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    return summary_from_json(buf.str(), g);
}

}  // namespace kgsum
