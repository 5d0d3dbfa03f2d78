#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "moeim/community.hpp"
#include "moeim/graph.hpp"
#include "moeim/propagation.hpp"

namespace moeim {

enum class Objective : int {
    influence = 0,
    seed_size = 1,
    communities = 2,
    fairness = 3,
    budget = 4,
    time = 5,
};

inline constexpr int kObjectiveCount = 6;
inline constexpr std::array<char, kObjectiveCount> kObjectiveLetters = {'I', 'S', 'C',
                                                                       'F', 'B', 'T'};

// Subset of the six objectives, in fixed I,S,C,F,B,T order.
struct ObjectiveMask {
    std::array<bool, kObjectiveCount> active{};

    static ObjectiveMask all();
    static ObjectiveMask influence_seed();
    // Accepts "all" or a subset of the letters ISCFBT (e.g. "ISC").
    static ObjectiveMask parse(const std::string& text);

    bool has(Objective o) const { return active[static_cast<int>(o)]; }
    void set(Objective o, bool on = true) { active[static_cast<int>(o)] = on; }
    int count() const;
    std::string to_string() const;
    bool operator==(const ObjectiveMask&) const = default;
};

// Raw values of the six objectives. communities_score and fairness_score are
// stored as 1 - normalized JSD so that every objective's preferred direction
// maps to "bigger is better" after normalization.
struct ObjectiveVector {
    double influence = 0.0;
    int seed_size = 0;
    double communities_score = 0.0;
    double fairness_score = 0.0;
    int budget = 0;
    double time = 0.0;
};

struct NormalizationContext {
    int node_count = 0;
    int max_seed_size = 0;  // k
    int budget_cap = 0;     // sum of the k largest out-degrees
    int tau = kUnboundedTau;
    ObjectiveMask active;
};

// Jensen-Shannon divergence with base-2 logs; result in [0,1].
double jsd(std::span<const double> p, std::span<const double> q);

// jsd(p, uniform(c)) / jsd(one_hot, uniform(c)); requires c >= 2.
double jsd_normalized(std::span<const double> p, int c);

// 1 - normalized JSD of the mean activated-non-seed counts across
// communities; 0 when nothing beyond the seed set was activated.
double communities_objective(const SpreadEstimate& estimate,
                             const CommunityAssignment& assignment);

// 1 - normalized JSD of the seed set's per-community distribution;
// 0 for an empty seed set.
double fairness_objective(std::span<const int> seed, const CommunityAssignment& assignment);

int budget(const Graph& g, std::span<const int> seed);
int budget_cap(const Graph& g, int k);

// Evaluates all six objectives for a seed set. Scores requiring communities
// are 0 when `assignment` is null.
ObjectiveVector evaluate(const Graph& g, const CommunityAssignment* assignment,
                         const PropagationModel& model, std::span<const int> seed, int tau,
                         int n_sims, std::uint64_t rng_seed, int workers = 1);

// Active objectives mapped into [0,1] maximize-space, in I,S,C,F,B,T order
// with inactive coordinates omitted. Budget is clamped at the cap.
std::vector<double> to_maximize_space(const ObjectiveVector& v,
                                      const NormalizationContext& ctx);

// All six normalized coordinates regardless of ctx.active; the time
// coordinate requires a finite tau.
std::array<double, kObjectiveCount> to_maximize_all(const ObjectiveVector& v,
                                                    const NormalizationContext& ctx);

}  // namespace moeim
