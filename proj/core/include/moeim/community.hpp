#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "moeim/graph.hpp"

namespace moeim {

// Node -> community labeling. Community ids are dense: no empty community.
struct CommunityAssignment {
    std::vector<int> labels;
    int community_count = 0;
    std::vector<int> sizes;

    // Re-indexes arbitrary labels densely and recomputes sizes.
    static CommunityAssignment from_labels(std::vector<int> raw_labels);
};

// Greedy modularity optimization (Louvain-style local moves plus graph
// aggregation, repeated to a fixed point). Deterministic for a fixed seed.
// Directed graphs are symmetrized for detection only.
CommunityAssignment detect_communities(const Graph& g, std::uint64_t rng_seed);

// Newman-Girvan modularity on the symmetrized graph.
double modularity(const Graph& g, const CommunityAssignment& a);

// File format: "node_label community_id" per line, '#' comments allowed.
CommunityAssignment load_assignment(const std::filesystem::path& path, const Graph& g);
void save_assignment(const CommunityAssignment& a, const Graph& g,
                     const std::filesystem::path& path);

// Dense ids of all nodes whose community has fewer than min_size members.
std::vector<int> nodes_in_small_communities(const CommunityAssignment& a, int min_size);

}  // namespace moeim
