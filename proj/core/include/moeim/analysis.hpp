#pragma once

#include <string>
#include <utility>
#include <vector>

#include "moeim/objectives.hpp"

namespace moeim {

// Maximize-space domination: a dominates b iff a >= b everywhere and a > b
// somewhere.
bool dominates(std::span<const double> a, std::span<const double> b);

// Indices of the mutually non-dominated points.
std::vector<std::size_t> nondominated_indices(const std::vector<std::vector<double>>& points);

struct ParetoEntry {
    std::vector<int> seed_nodes;  // dense ids
    ObjectiveVector objectives;
    std::vector<double> point;  // maximize-space coordinates on ctx.active
};

// Mutually non-dominated (seed set, objectives) pairs plus the normalization
// context the points were produced under.
struct ParetoFront {
    std::vector<ParetoEntry> entries;
    NormalizationContext ctx;

    // Inserts the entry unless dominated; evicts entries it dominates.
    // Exact duplicates (same point and seed set) are kept once.
    void insert(ParetoEntry entry);
};

// Hypervolume of the union of boxes [0, p] in [0,1]^m, m in 2..6, with the
// reference point at the maximize-space origin. WFG-style recursive slicing.
double hypervolume(const std::vector<std::vector<double>>& points, int m);

// Projects onto the given objectives (which must be computed in the front),
// re-extracts the non-dominated subset, and computes its hypervolume.
double subset_hypervolume(const ParetoFront& front, const ObjectiveMask& dims);

// Sample Pearson correlation; NaN (flagged) when either variance is zero.
double pearson(std::span<const double> x, std::span<const double> y);

// Pools every entry's full 6-d normalized vector across fronts; Pearson per
// objective pair, unit diagonal. Fronts must carry all six objectives.
std::vector<std::vector<double>> correlation_matrix(const std::vector<ParetoFront>& fronts);

struct HolmDecision {
    std::string label;
    double p_value = 1.0;
    bool rejected = false;
};

// Holm-Bonferroni step-down procedure at level alpha.
std::vector<HolmDecision> holm_bonferroni(
    const std::vector<std::pair<std::string, double>>& p_values, double alpha);

}  // namespace moeim
