#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace moeim {

struct DegreeStats {
    double avg_out = 0.0;
    double std_out = 0.0;
    int max_out = 0;
    int min_out = 0;
};

struct LoadDiagnostics {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_edges_dropped = 0;
};

// Immutable graph in compressed adjacency form. Node ids are dense in
// [0, node_count); original file ids are kept in labels(). Undirected
// graphs store each edge in both directions, so in/out degrees coincide.
class Graph {
public:
    Graph() = default;

    // Edges are (source, target) pairs over dense ids. Self-loops and
    // duplicates must already be removed; undirected edges are given once.
    static Graph from_edges(int node_count, bool directed,
                            std::vector<std::pair<int, int>> edges,
                            std::vector<std::int64_t> labels = {});

    int node_count() const { return node_count_; }
    bool directed() const { return directed_; }

    // Number of arcs for directed graphs, distinct edges for undirected.
    std::size_t edge_count() const {
        return directed_ ? targets_.size() : targets_.size() / 2;
    }

    std::span<const int> out_neighbors(int v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }
    int out_degree(int v) const { return static_cast<int>(offsets_[v + 1] - offsets_[v]); }
    int in_degree(int v) const { return in_degree_[v]; }
    const std::vector<int>& out_degrees() const { return out_degree_; }
    const std::vector<int>& in_degrees() const { return in_degree_; }

    bool has_edge(int u, int v) const;

    std::int64_t label(int v) const { return labels_[v]; }
    const std::vector<std::int64_t>& labels() const { return labels_; }
    // Dense id for an original file id, or -1.
    int node_by_label(std::int64_t label) const;

    double avg_out_degree() const;
    double avg_in_degree() const;

private:
    int node_count_ = 0;
    bool directed_ = true;
    std::vector<std::size_t> offsets_;
    std::vector<int> targets_;
    std::vector<int> in_degree_;
    std::vector<int> out_degree_;
    std::vector<std::int64_t> labels_;
};

// Parses a whitespace-separated edge list. Lines starting with '#' or '%'
// are comments. Ids are compacted to [0, n) in first-seen order; self-loops
// and duplicate edges are dropped and counted in `diag`.
Graph load_edge_list(const std::filesystem::path& path, bool directed,
                     LoadDiagnostics* diag = nullptr);

void write_edge_list(const Graph& g, const std::filesystem::path& path);

// Induced subgraph on the largest component under direction-ignoring
// connectivity; ties broken by the component holding the smallest original id.
Graph largest_weakly_connected_component(const Graph& g);

// Induced subgraph on the complement of `nodes` (dense ids), relabeled.
Graph remove_nodes(const Graph& g, const std::vector<int>& nodes);

DegreeStats degree_summary(const Graph& g);

}  // namespace moeim
