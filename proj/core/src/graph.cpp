#include "moeim/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace moeim {

Graph Graph::from_edges(int node_count, bool directed,
                        std::vector<std::pair<int, int>> edges,
                        std::vector<std::int64_t> labels) {
    if (node_count <= 0) throw std::invalid_argument("graph: empty graph");
    Graph g;
    g.node_count_ = node_count;
    g.directed_ = directed;
    if (labels.empty()) {
        labels.resize(node_count);
        std::iota(labels.begin(), labels.end(), std::int64_t{0});
    }
    if (static_cast<int>(labels.size()) != node_count)
        throw std::invalid_argument("graph: label count mismatch");
    g.labels_ = std::move(labels);

    if (!directed) {
        auto arcs = edges;
        for (auto [u, v] : edges) arcs.emplace_back(v, u);
        edges = std::move(arcs);
    }
    g.out_degree_.assign(node_count, 0);
    g.in_degree_.assign(node_count, 0);
    for (auto [u, v] : edges) {
        if (u < 0 || u >= node_count || v < 0 || v >= node_count)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (u == v) throw std::invalid_argument("graph: self-loop");
        ++g.out_degree_[u];
        ++g.in_degree_[v];
    }
    g.offsets_.assign(node_count + 1, 0);
    for (int v = 0; v < node_count; ++v)
        g.offsets_[v + 1] = g.offsets_[v] + static_cast<std::size_t>(g.out_degree_[v]);
    g.targets_.resize(edges.size());
    std::vector<std::size_t> cursor(g.offsets_.begin(), g.offsets_.end() - 1);
    for (auto [u, v] : edges) g.targets_[cursor[u]++] = v;
    for (int v = 0; v < node_count; ++v) {
        auto begin = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]);
        auto end = g.targets_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]);
        std::sort(begin, end);
        if (std::adjacent_find(begin, end) != end)
            throw std::invalid_argument("graph: duplicate edge");
    }
    return g;
}

bool Graph::has_edge(int u, int v) const {
    auto nb = out_neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

int Graph::node_by_label(std::int64_t label) const {
    for (int v = 0; v < node_count_; ++v)
        if (labels_[v] == label) return v;
    return -1;
}

double Graph::avg_out_degree() const {
    return static_cast<double>(targets_.size()) / node_count_;
}

double Graph::avg_in_degree() const {
    // Every arc contributes to exactly one in-degree.
    return static_cast<double>(targets_.size()) / node_count_;
}

Graph load_edge_list(const std::filesystem::path& path, bool directed,
                     LoadDiagnostics* diag) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path.string());

    std::unordered_map<std::int64_t, int> id_of;
    std::vector<std::int64_t> labels;
    auto intern = [&](std::int64_t raw) {
        auto [it, inserted] = id_of.try_emplace(raw, static_cast<int>(labels.size()));
        if (inserted) labels.push_back(raw);
        return it->second;
    };

    LoadDiagnostics local;
    std::vector<std::pair<int, int>> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos) continue;
        if (line[pos] == '#' || line[pos] == '%') continue;
        std::int64_t a, b;
        char extra;
        int got = std::sscanf(line.c_str(), " %ld %ld %c", &a, &b, &extra);
        if (got < 2)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": malformed edge line");
        int u = intern(a), v = intern(b);
        if (u == v) {
            ++local.self_loops_dropped;
            continue;
        }
        edges.emplace_back(u, v);
    }
    if (labels.empty()) throw std::runtime_error("empty graph: " + path.string());

    // Dedup; for undirected graphs a reciprocal pair is one edge.
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(edges.size() * 2);
    std::vector<std::pair<int, int>> unique_edges;
    unique_edges.reserve(edges.size());
    for (auto [u, v] : edges) {
        int a = u, b = v;
        if (!directed && a > b) std::swap(a, b);
        std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
        if (!seen.insert(key).second) {
            ++local.duplicate_edges_dropped;
            continue;
        }
        unique_edges.emplace_back(u, v);
    }
    if (diag) *diag = local;
    int n = static_cast<int>(labels.size());
    return Graph::from_edges(n, directed, std::move(unique_edges), std::move(labels));
}

void write_edge_list(const Graph& g, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write edge list: " + path.string());
    for (int u = 0; u < g.node_count(); ++u) {
        for (int v : g.out_neighbors(u)) {
            if (!g.directed() && v < u) continue;  // each undirected edge once
            out << g.label(u) << ' ' << g.label(v) << '\n';
        }
    }
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

// Union-find over dense ids.
struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

Graph induced_subgraph(const Graph& g, const std::vector<char>& keep) {
    std::vector<int> new_id(g.node_count(), -1);
    std::vector<std::int64_t> labels;
    for (int v = 0; v < g.node_count(); ++v) {
        if (!keep[v]) continue;
        new_id[v] = static_cast<int>(labels.size());
        labels.push_back(g.label(v));
    }
    if (labels.empty()) throw std::invalid_argument("induced subgraph is empty");
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < g.node_count(); ++u) {
        if (!keep[u]) continue;
        for (int v : g.out_neighbors(u)) {
            if (!keep[v]) continue;
            if (!g.directed() && v < u) continue;
            edges.emplace_back(new_id[u], new_id[v]);
        }
    }
    int n = static_cast<int>(labels.size());
    return Graph::from_edges(n, g.directed(), std::move(edges), std::move(labels));
}

}  // namespace

Graph largest_weakly_connected_component(const Graph& g) {
    DisjointSets ds(g.node_count());
    for (int u = 0; u < g.node_count(); ++u)
        for (int v : g.out_neighbors(u)) ds.unite(u, v);

    std::vector<int> size(g.node_count(), 0);
    std::vector<std::int64_t> min_label(g.node_count(), std::numeric_limits<std::int64_t>::max());
    for (int v = 0; v < g.node_count(); ++v) {
        int r = ds.find(v);
        ++size[r];
        min_label[r] = std::min(min_label[r], g.label(v));
    }
    // Size ties broken by the component with the smallest original id.
    int best = ds.find(0);
    for (int r = 0; r < g.node_count(); ++r) {
        if (size[r] == 0) continue;
        if (size[r] > size[best] ||
            (size[r] == size[best] && min_label[r] < min_label[best]))
            best = r;
    }

    std::vector<char> keep(g.node_count(), 0);
    for (int v = 0; v < g.node_count(); ++v) keep[v] = (ds.find(v) == best);
    return induced_subgraph(g, keep);
}

Graph remove_nodes(const Graph& g, const std::vector<int>& nodes) {
    std::vector<char> keep(g.node_count(), 1);
    for (int v : nodes) {
        if (v < 0 || v >= g.node_count())
            throw std::invalid_argument("remove_nodes: id out of range");
        keep[v] = 0;
    }
    if (std::count(keep.begin(), keep.end(), char{1}) == 0)
        throw std::invalid_argument("remove_nodes: all nodes removed");
    return induced_subgraph(g, keep);
}

DegreeStats degree_summary(const Graph& g) {
    DegreeStats s;
    const auto& deg = g.out_degrees();
    s.max_out = *std::max_element(deg.begin(), deg.end());
    s.min_out = *std::min_element(deg.begin(), deg.end());
    double sum = std::accumulate(deg.begin(), deg.end(), 0.0);
    s.avg_out = sum / g.node_count();
    double ss = 0.0;
    for (int d : deg) ss += (d - s.avg_out) * (d - s.avg_out);
    s.std_out = std::sqrt(ss / g.node_count());
    return s;
}

}  // namespace moeim
