#pragma once

#include <string>
#include <vector>

#include "kgsum/graph.hpp"
#include "kgsum/paths.hpp"

namespace kgsum {

// How the coverage count c(e) is accumulated:
//  - PerTarget (default): c(e) = number of targets with at least one retained
//    path through e; c(e)/|targets| is a true coverage fraction in [0,1].
//  - PerPath: c(e) = number of retained paths through e (can exceed |targets|
//    when several paths of one target share an edge).
enum class CoverageCount { PerTarget, PerPath };

struct ReweightParams {
    double lambda = 1.0;
    // Additive floor applied to every base weight before scaling, so that
    // zero-weight attribute edges covered by paths become distinguishable
    // from uncovered ones under the multiplicative boost.
    double delta = 1e-6;
    CoverageCount count = CoverageCount::PerTarget;
};

// Working edge weights for one scenario:
//   w(e) = (w_M(e) + delta) * (1 + lambda * c(e) / |targets|)
// Base weights are never decreased; in PerTarget mode
//   base(e) <= w(e) <= base(e) * (1 + lambda).
struct WorkingWeights {
    std::vector<double> weight;  // adjusted, per edge id
    std::vector<double> base;    // floored base (w_M + delta), per edge id
    double lambda = 0.0;
    double max_weight = 0.0;     // max over weight, cached for the ST cost transform
    std::string scenario_id;     // provenance tag, e.g. "user:k10"

    // Neutral weights (no coverage boost), used when summarizing without a
    // scenario or for lambda = 0 behaviour.
    static WorkingWeights from_base(const KnowledgeGraph& g, double delta = 1e-6);
};

// Applies the coverage-boost reweighting for `spec` (requires a non-empty
// target set, which derive_scenario guarantees). Throws NoEdges on an
// edgeless graph and InvalidConfig for lambda < 0 or delta < 0.
WorkingWeights adjust_weights(const KnowledgeGraph& g, const ScenarioSpec& spec,
                              const ReweightParams& params);

}  // namespace kgsum
