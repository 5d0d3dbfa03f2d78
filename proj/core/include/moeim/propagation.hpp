#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "moeim/community.hpp"
#include "moeim/graph.hpp"

namespace moeim {

inline constexpr int kUnboundedTau = std::numeric_limits<int>::max();

enum class ModelKind { IC, WC, LT };

struct PropagationModel {
    ModelKind kind = ModelKind::WC;
    double ic_probability = 0.0;   // IC only
    double lt_threshold_low = 0.0; // LT only
    double lt_threshold_high = 0.0;

    static PropagationModel ic(double p);
    static PropagationModel wc();
    static PropagationModel lt(double low, double high);
};

struct SpreadSample {
    std::vector<int> activated;  // sorted dense ids, superset of the seed set
    int hops = 0;
};

struct SpreadEstimate {
    double mean_influence = 0.0;
    double mean_hops = 0.0;
    // Mean count of activated-non-seed nodes per community; empty when no
    // assignment was supplied.
    std::vector<double> mean_community_hits;
    int samples = 0;
};

// One breadth-synchronous cascade. All edge coin flips and LT thresholds are
// derived by hashing (sim_seed, edge/node), so two runs with the same
// sim_seed are coupled: a larger seed set activates a superset of nodes.
// hops counts loop iterations that activated at least one new node.
SpreadSample simulate_once(const Graph& g, const PropagationModel& model,
                           std::span<const int> seed, int tau, std::uint64_t sim_seed);

// Averages over n_sims independent simulations with per-simulation seeds
// derived as rng_seed xor simulation index; results are identical for any
// worker count.
SpreadEstimate monte_carlo(const Graph& g, const PropagationModel& model,
                           std::span<const int> seed, int tau, int n_sims,
                           std::uint64_t rng_seed,
                           const CommunityAssignment* communities = nullptr,
                           int workers = 1);

// Per-node solo spread, sorted descending; ties broken by higher out-degree,
// then lower id.
std::vector<std::pair<int, double>> solo_spread_ranking(const Graph& g,
                                                        const PropagationModel& model,
                                                        int tau, int n_sims,
                                                        std::uint64_t rng_seed,
                                                        int workers = 1);

}  // namespace moeim
