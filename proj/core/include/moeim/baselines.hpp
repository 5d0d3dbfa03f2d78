#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "moeim/analysis.hpp"
#include "moeim/graph.hpp"
#include "moeim/propagation.hpp"

namespace moeim {

struct GreedyTrace {
    std::vector<int> ordered_seeds;
    std::vector<double> marginal_gain;  // CELF only
    long evaluations_used = 0;          // CELF spread-estimate call count
};

// Degree-discount variant: score(v) = d_out - 2 t_v - (d_out - t_v) t_v p,
// with t_v the count of already-selected in-neighbors and p = 1/avg_in_degree.
// Deterministic; ties broken by lower id.
GreedyTrace gdd(const Graph& g, int k);

// Mean-influence estimates keyed by sorted seed set; shared between CELF and
// the exhaustive-greedy oracle so both see identical values.
struct SpreadCache {
    std::map<std::vector<int>, double> values;
    long calls = 0;

    double spread(const Graph& g, const PropagationModel& model, std::vector<int> seed,
                  int tau, int n_sims, std::uint64_t rng_seed, int workers);
};

// Lazy greedy over marginal spread gains. Equivalent in output to exhaustive
// greedy under identical cached estimates.
GreedyTrace celf(const Graph& g, const PropagationModel& model, int k, int tau, int n_sims,
                 std::uint64_t rng_seed, int workers = 1, SpreadCache* cache = nullptr);

// Evaluates every prefix of the trace and keeps the non-dominated subset on
// ctx.active.
ParetoFront prefix_sweep(const Graph& g, const CommunityAssignment* assignment,
                         const PropagationModel& model, const GreedyTrace& trace,
                         const NormalizationContext& ctx, int n_sims,
                         std::uint64_t rng_seed, int workers = 1);

}  // namespace moeim
