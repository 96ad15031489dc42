#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kgsum/graph.hpp"
#include "kgsum/io.hpp"
#include "kgsum/paths.hpp"

namespace kgsum {

// Synthetic graph recipe. The default class fractions are the published
// per-class node shares of the ML1M-derived graph; note they intentionally
// sum to slightly more than 1 (the published per-class counts themselves
// exceed the nominal total), so class counts are derived independently as
// floor(fraction * total_nodes) rather than by normalizing.
struct SynthSpec {
    std::size_t total_nodes = 10000;
    double user_fraction = 6040.0 / 19844.0;
    double item_fraction = 3883.0 / 19844.0;
    double external_fraction = 10820.0 / 19844.0;

    // Negative means "derive": edges = round(55.9734 * total_nodes), split
    // between rating and attribute edges in proportion to the class-mean
    // degree targets below.
    std::int64_t target_total_edges = -1;
    double mean_user_ratings = 154.35;     // ratings per user
    double mean_item_attributes = 45.96;   // attribute links per item

    std::int64_t t_min = 0;  // rating timestamp window, inclusive
    std::int64_t t_max = 0;
    std::uint64_t seed = 1;

    void validate() const;  // throws InfeasibleSpec

    std::size_t user_count() const;
    std::size_t item_count() const;
    std::size_t external_count() const;
    std::int64_t edge_target() const;
};

// Raw synthetic records, ready for the standard writers or for graph
// assembly. Node ids are dense: users, then items, then external nodes.
struct SynthData {
    NodeTable nodes;
    std::vector<RatingRecord> ratings;
    TripleData triples;
};

SynthData generate_synthetic_data(const SynthSpec& spec);

KnowledgeGraph generate_synthetic(const SynthSpec& spec, const WeightParams& params = {},
                                  const AttributeWeights& attr = {});

// k self-avoiding random walks of exactly `length` edges per user, each
// ending at a distinct item for that user. Walks that dead-end or finish on
// a non-item restart; a user whose reachable items are exhausted keeps the
// paths found so far. Throws IsolatedUser for a user with no edges at all.
ExplanationPathSet generate_random_paths(const KnowledgeGraph& g,
                                         const std::vector<NodeId>& users, int k,
                                         int length, std::uint64_t seed);

struct StratumSample {
    std::string label;
    std::vector<NodeId> users;
};

// Stratified user sample: for each requested stratum label, n_per_stratum
// users chosen at evenly spaced quantiles of the per-user rating-count
// distribution (so the sample tracks the stratum's degree profile). Fully
// deterministic; the seed parameter is accepted for interface symmetry.
std::vector<StratumSample> sample_users(
    const KnowledgeGraph& g,
    const std::vector<std::pair<std::string, std::string>>& attributes,
    std::size_t n_per_stratum, const std::vector<std::string>& strata,
    std::uint64_t seed);

struct ItemSample {
    std::vector<NodeId> popular;    // highest rating in-degree
    std::vector<NodeId> unpopular;  // lowest rating in-degree
};

// Top/bottom items by number of ratings received. Ties break by node id;
// the two slices are taken from opposite ends of one ranking, so they never
// overlap. Deterministic; seed accepted for interface symmetry.
ItemSample sample_items_by_popularity(const KnowledgeGraph& g, std::size_t n_top,
                                      std::size_t n_bottom, std::uint64_t seed);

}  // namespace kgsum
