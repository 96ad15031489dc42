#include "kgsum/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "kgsum/error.hpp"

namespace kgsum {

namespace {

// Published edges-per-node density of the reference graph family.
constexpr double kEdgesPerNode = 55.9734;

std::uint64_t pack_pair(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

}  // namespace

std::size_t SynthSpec::user_count() const {
    return static_cast<std::size_t>(user_fraction * static_cast<double>(total_nodes));
}

std::size_t SynthSpec::item_count() const {
    return static_cast<std::size_t>(item_fraction * static_cast<double>(total_nodes));
}

std::size_t SynthSpec::external_count() const {
    return static_cast<std::size_t>(external_fraction * static_cast<double>(total_nodes));
}

std::int64_t SynthSpec::edge_target() const {
    if (target_total_edges >= 0) return target_total_edges;
    return std::llround(kEdgesPerNode * static_cast<double>(total_nodes));
}

void SynthSpec::validate() const {
    auto bad = [](const std::string& what) {
        fail(ErrorCode::InfeasibleSpec, what);
    };
    if (total_nodes < 3) bad("need at least 3 nodes");
    for (double f : {user_fraction, item_fraction, external_fraction})
        if (!(f > 0.0 && f < 1.0)) bad("class fractions must lie in (0,1)");
    // The defaults overshoot 1 by ~4.5% on purpose (see header); anything far
    // outside that is a mistake rather than a calibration choice.
    double sum = user_fraction + item_fraction + external_fraction;
    if (sum < 0.9 || sum > 1.1) bad("class fractions must sum to roughly 1");
    if (user_count() == 0 || item_count() == 0 || external_count() == 0)
        bad("every node class must be non-empty after rounding");
    if (!(mean_user_ratings > 0.0) || !(mean_item_attributes > 0.0))
        bad("mean degrees must be positive");
    if (t_min > t_max) bad("timestamp window is inverted");
    if (edge_target() < 0) bad("edge target must be non-negative");
    const auto nu = static_cast<unsigned long long>(user_count());
    const auto ni = static_cast<unsigned long long>(item_count());
    const auto nx = static_cast<unsigned long long>(external_count());
    if (static_cast<unsigned long long>(edge_target()) > nu * ni + ni * nx)
        bad("edge target exceeds the number of distinct node pairs");
}

SynthData generate_synthetic_data(const SynthSpec& spec) {
    spec.validate();
    const std::size_t nu = spec.user_count();
    const std::size_t ni = spec.item_count();
    const std::size_t nx = spec.external_count();

    SynthData d;
    for (std::size_t i = 0; i < nu; ++i)
        d.nodes.add("u" + std::to_string(i + 1), NodeKind::User);
    for (std::size_t i = 0; i < ni; ++i)
        d.nodes.add("i" + std::to_string(i + 1), NodeKind::Item);
    for (std::size_t i = 0; i < nx; ++i)
        d.nodes.add("x" + std::to_string(i + 1), NodeKind::External);

    // Split the edge budget between rating and attribute edges in proportion
    // to the class-mean degree targets, then clamp to pair capacities.
    const std::int64_t target = spec.edge_target();
    const double w_ui = static_cast<double>(nu) * spec.mean_user_ratings;
    const double w_ie = static_cast<double>(ni) * spec.mean_item_attributes;
    const std::int64_t cap_ui = static_cast<std::int64_t>(nu) * static_cast<std::int64_t>(ni);
    const std::int64_t cap_ie = static_cast<std::int64_t>(ni) * static_cast<std::int64_t>(nx);
    std::int64_t e_ui = std::llround(static_cast<double>(target) * (w_ui / (w_ui + w_ie)));
    e_ui = std::clamp<std::int64_t>(e_ui, std::max<std::int64_t>(0, target - cap_ie), cap_ui);
    const std::int64_t e_ie = target - e_ui;

    std::mt19937_64 rng(spec.seed);
    // Explicit modulo draws keep output identical across standard libraries;
    // the modulo bias is irrelevant at these ranges.
    auto draw = [&rng](std::uint64_t n) { return rng() % n; };

    const std::int64_t span = spec.t_max - spec.t_min;
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(e_ui) * 2);
    d.ratings.reserve(static_cast<std::size_t>(e_ui));
    std::int64_t attempts_left = 60 * target + 1000;
    while (d.ratings.size() < static_cast<std::size_t>(e_ui)) {
        if (--attempts_left < 0)
            fail(ErrorCode::InfeasibleSpec, "rating-edge rejection sampling stalled");
        auto u = static_cast<std::uint32_t>(draw(nu));
        auto i = static_cast<std::uint32_t>(draw(ni));
        if (!seen.insert(pack_pair(u, i)).second) continue;
        RatingRecord r;
        r.user = u;
        r.item = static_cast<NodeId>(nu + i);
        r.rating = static_cast<double>(1 + draw(5));
        r.timestamp = spec.t_min + (span > 0 ? static_cast<std::int64_t>(draw(span + 1)) : 0);
        d.ratings.push_back(r);
    }

    d.triples.relation_names.push_back("related");
    seen.clear();
    seen.reserve(static_cast<std::size_t>(e_ie) * 2);
    d.triples.triples.reserve(static_cast<std::size_t>(e_ie));
    while (d.triples.triples.size() < static_cast<std::size_t>(e_ie)) {
        if (--attempts_left < 0)
            fail(ErrorCode::InfeasibleSpec, "attribute-edge rejection sampling stalled");
        auto i = static_cast<std::uint32_t>(draw(ni));
        auto x = static_cast<std::uint32_t>(draw(nx));
        if (!seen.insert(pack_pair(i, x)).second) continue;
        TripleRecord t;
        t.head = static_cast<NodeId>(nu + i);
        t.tail = static_cast<NodeId>(nu + ni + x);
        t.relation = 0;
        d.triples.triples.push_back(t);
    }
    return d;
}

KnowledgeGraph generate_synthetic(const SynthSpec& spec, const WeightParams& params,
                                  const AttributeWeights& attr) {
    SynthData d = generate_synthetic_data(spec);
    return KnowledgeGraph::build(std::move(d.nodes), d.ratings, d.triples.triples,
                                 std::move(d.triples.relation_names), params, attr);
}

ExplanationPathSet generate_random_paths(const KnowledgeGraph& g,
                                         const std::vector<NodeId>& users, int k,
                                         int length, std::uint64_t seed) {
    if (k < 1) fail(ErrorCode::InvalidConfig, "k must be at least 1");
    if (length < 1) fail(ErrorCode::InvalidConfig, "path length must be at least 1");
    std::mt19937_64 rng(seed);
    ExplanationPathSet out;
    for (NodeId u : users) {
        if (u >= g.node_count())
            fail(ErrorCode::UnknownNode, "node id " + std::to_string(u) + " out of range");
        if (g.incident_edges(u).empty())
            fail(ErrorCode::IsolatedUser, "user '" + g.label(u) + "' has no edges");
        std::unordered_set<NodeId> used_items;
        std::vector<NodeId> walk;
        std::unordered_set<NodeId> visited;
        int made = 0;
        // Plenty for graphs where k distinct items are reachable; when they
        // are not, the user simply keeps the paths found so far.
        int attempts = 200 * k;
        while (made < k && attempts-- > 0) {
            walk.assign(1, u);
            visited.clear();
            visited.insert(u);
            bool stuck = false;
            for (int step = 0; step < length; ++step) {
                NodeId cur = walk.back();
                auto inc = g.incident_edges(cur);
                NodeId next = kNoNode;
                for (int probe = 0; probe < 8; ++probe) {
                    EdgeId e = inc[rng() % inc.size()];
                    NodeId cand = g.other_endpoint(e, cur);
                    if (!visited.count(cand)) {
                        next = cand;
                        break;
                    }
                }
                if (next == kNoNode) {  // dead end; restart this walk
                    stuck = true;
                    break;
                }
                walk.push_back(next);
                visited.insert(next);
            }
            if (stuck) continue;
            NodeId end = walk.back();
            if (g.kind(end) != NodeKind::Item || used_items.count(end)) continue;
            used_items.insert(end);
            ++made;
            ExplanationPath p;
            p.user = u;
            p.item = end;
            p.nodes = walk;
            p.rank = made;
            out.paths.push_back(std::move(p));
            out.K = std::max(out.K, made);
        }
    }
    return out;
}

std::vector<StratumSample> sample_users(
    const KnowledgeGraph& g,
    const std::vector<std::pair<std::string, std::string>>& attributes,
    std::size_t n_per_stratum, const std::vector<std::string>& strata,
    std::uint64_t seed) {
    (void)seed;  // selection is quantile-based and already deterministic
    std::unordered_map<std::string, std::string> attr;
    for (const auto& [node, stratum] : attributes) attr.emplace(node, stratum);

    auto rating_count = [&g](NodeId v) {
        std::size_t c = 0;
        for (EdgeId e : g.out_edges(v))
            if (g.edge(e).relation < 0) ++c;
        return c;
    };

    std::vector<StratumSample> out;
    for (const std::string& stratum : strata) {
        std::vector<NodeId> members;
        for (NodeId v = 0; v < g.node_count(); ++v) {
            if (g.kind(v) != NodeKind::User) continue;
            auto it = attr.find(g.label(v));
            if (it != attr.end() && it->second == stratum) members.push_back(v);
        }
        if (members.size() < n_per_stratum)
            fail(ErrorCode::InsufficientPopulation,
                 "stratum '" + stratum + "' has " + std::to_string(members.size()) +
                     " users, need " + std::to_string(n_per_stratum));
        std::sort(members.begin(), members.end(), [&](NodeId a, NodeId b) {
            std::size_t da = rating_count(a);
            std::size_t db = rating_count(b);
            if (da != db) return da < db;
            return a < b;
        });
        // Evenly spaced quantiles of the degree-sorted list track the
        // stratum's rating-count distribution.
        StratumSample sample;
        sample.label = stratum;
        const std::size_t m = members.size();
        const std::size_t n = n_per_stratum;
        if (n == 1) {
            sample.users.push_back(members[(m - 1) / 2]);
        } else {
            for (std::size_t j = 0; j < n; ++j)
                sample.users.push_back(members[j * (m - 1) / (n - 1)]);
        }
        std::sort(sample.users.begin(), sample.users.end());
        out.push_back(std::move(sample));
    }
    return out;
}

ItemSample sample_items_by_popularity(const KnowledgeGraph& g, std::size_t n_top,
                                      std::size_t n_bottom, std::uint64_t seed) {
    (void)seed;  // ranking-based and already deterministic
    std::vector<NodeId> items;
    for (NodeId v = 0; v < g.node_count(); ++v)
        if (g.kind(v) == NodeKind::Item) items.push_back(v);
    if (n_top + n_bottom > items.size())
        fail(ErrorCode::InsufficientPopulation,
             "need " + std::to_string(n_top + n_bottom) + " items, graph has " +
                 std::to_string(items.size()));

    auto popularity = [&g](NodeId v) {
        std::size_t c = 0;
        for (EdgeId e : g.in_edges(v))
            if (g.edge(e).relation < 0) ++c;
        return c;
    };
    std::vector<std::pair<std::size_t, NodeId>> ranked;
    ranked.reserve(items.size());
    for (NodeId v : items) ranked.emplace_back(popularity(v), v);
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });

    ItemSample out;
    for (std::size_t j = 0; j < n_top; ++j) out.popular.push_back(ranked[j].second);
    // Taking the bottom slice from the same ranking keeps the two sets
    // disjoint even when everything is tied.
    std::vector<std::pair<std::size_t, NodeId>> tail(ranked.end() - n_bottom, ranked.end());
    std::sort(tail.begin(), tail.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    for (const auto& [pop, v] : tail) {
        (void)pop;
        out.unpopular.push_back(v);
    }
    return out;
}

}  // namespace kgsum
