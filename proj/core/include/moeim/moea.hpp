#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "moeim/analysis.hpp"
#include "moeim/objectives.hpp"

namespace moeim {

// Variable-length duplicate-free seed set, sorted ascending.
struct Individual {
    std::vector<int> nodes;
    std::optional<ObjectiveVector> objectives;
    int rank = 0;
    double crowding = 0.0;
};

struct MoeaConfig {
    int population_size = 100;
    int offspring_size = 100;
    int elites = 2;
    int tournament_size = 5;
    int generations = 100;
    int k = 0;
    double lambda = 0.33;     // smart-initialized fraction of the population
    double theta = 0.0;       // out-degree filter for the smart pool
    ObjectiveMask active = ObjectiveMask::influence_seed();
    double crossover_rate = 1.0;
    double mutation_rate = 1.0;

    void validate(const Graph& g) const;
};

struct EvalSettings {
    int tau = kUnboundedTau;
    int n_sims = 100;
    int workers = 1;
};

struct GenerationSnapshot {
    std::vector<std::vector<int>> front_seeds;
    std::vector<ObjectiveVector> front_objectives;
    double seconds = 0.0;
};

struct RunHistory {
    std::vector<GenerationSnapshot> generations;
    ParetoFront archive;  // non-dominated subset of every evaluated individual
    std::uint64_t rng_seed = 0;
};

// Smart + random initialization. ceil(lambda * population_size) individuals
// are filled by out-degree-proportional roulette over the top-k solo
// spreaders (tau=3) with out-degree >= theta; the rest are uniform random
// distinct-node sets, all with sizes uniform in [1, k].
std::vector<Individual> smart_initialize(const Graph& g, const PropagationModel& model,
                                         const MoeaConfig& cfg, int n_sims,
                                         std::mt19937_64& rng, int workers = 1);

// One-point crossover on sorted sets: per-parent cut points, concatenated
// halves deduplicated, truncated at random to k, empty children repaired.
std::pair<Individual, Individual> one_point_crossover(const Individual& a,
                                                      const Individual& b, int k,
                                                      std::mt19937_64& rng);

// Applies one of the five mutation operators chosen uniformly; infeasible
// operators degrade to identity.
Individual mutate(const Individual& ind, const Graph& g, int k, std::mt19937_64& rng);

// Fronts of mutually non-dominated indices (maximize-space).
std::vector<std::vector<int>> fast_nondominated_sort(
    const std::vector<std::vector<double>>& points);

std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front);

// Monte Carlo spread estimates within a run are cached per sorted seed set.
using EvaluationCache = std::map<std::vector<int>, ObjectiveVector>;

RunHistory run_nsga2(const Graph& g, const CommunityAssignment* assignment,
                     const PropagationModel& model, const MoeaConfig& cfg,
                     const EvalSettings& eval, std::uint64_t rng_seed);

}  // namespace moeim
