#include "moeim/community.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace moeim {

CommunityAssignment CommunityAssignment::from_labels(std::vector<int> raw_labels) {
    CommunityAssignment a;
    std::unordered_map<int, int> dense;
    a.labels.reserve(raw_labels.size());
    for (int raw : raw_labels) {
        auto [it, inserted] = dense.try_emplace(raw, static_cast<int>(dense.size()));
        a.labels.push_back(it->second);
    }
    a.community_count = static_cast<int>(dense.size());
    a.sizes.assign(a.community_count, 0);
    for (int c : a.labels) ++a.sizes[c];
    return a;
}

namespace {

// Symmetrized weighted adjacency: arc u->v adds weight 1 to (u,v) and (v,u).
// Undirected graphs already store both directions, weight 1 each.
struct WeightedGraph {
    std::vector<std::vector<std::pair<int, double>>> adj;
    std::vector<double> strength;  // weighted degree
    double total = 0.0;            // 2m

    static WeightedGraph symmetrize(const Graph& g) {
        WeightedGraph w;
        w.adj.resize(g.node_count());
        for (int u = 0; u < g.node_count(); ++u)
            for (int v : g.out_neighbors(u)) {
                w.add(u, v, 1.0);
                if (g.directed()) w.add(v, u, 1.0);
            }
        w.finish();
        return w;
    }

    void add(int u, int v, double weight) { adj[u].emplace_back(v, weight); }

    void finish() {
        strength.assign(adj.size(), 0.0);
        for (std::size_t u = 0; u < adj.size(); ++u) {
            // merge parallel entries
            auto& nb = adj[u];
            std::sort(nb.begin(), nb.end());
            std::vector<std::pair<int, double>> merged;
            for (auto [v, wt] : nb) {
                if (!merged.empty() && merged.back().first == v)
                    merged.back().second += wt;
                else
                    merged.emplace_back(v, wt);
            }
            nb = std::move(merged);
            for (auto [v, wt] : nb) strength[u] += wt;
            total += strength[u];
        }
    }
};

// One Louvain level: local moves until no gain. Returns node -> community.
std::vector<int> local_moves(const WeightedGraph& w, std::mt19937_64& rng) {
    int n = static_cast<int>(w.adj.size());
    std::vector<int> comm(n);
    std::iota(comm.begin(), comm.end(), 0);
    std::vector<double> comm_strength(w.strength);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> weight_to(n, 0.0);
    bool improved = true;
    while (improved) {
        improved = false;
        for (int u : order) {
            int cur = comm[u];
            std::vector<int> touched;
            double self_weight = 0.0;
            for (auto [v, wt] : w.adj[u]) {
                if (v == u) {
                    self_weight += wt;
                    continue;
                }
                int c = comm[v];
                if (weight_to[c] == 0.0) touched.push_back(c);
                weight_to[c] += wt;
            }
            comm_strength[cur] -= w.strength[u];
            int best = cur;
            double best_gain = weight_to[cur] - comm_strength[cur] * w.strength[u] / w.total;
            for (int c : touched) {
                if (c == cur) continue;
                double gain = weight_to[c] - comm_strength[c] * w.strength[u] / w.total;
                if (gain > best_gain + 1e-12) {
                    best = c;
                    best_gain = gain;
                }
            }
            comm_strength[best] += w.strength[u];
            if (best != cur) {
                comm[u] = best;
                improved = true;
            }
            for (int c : touched) weight_to[c] = 0.0;
            weight_to[cur] = 0.0;
        }
    }
    return comm;
}

WeightedGraph aggregate(const WeightedGraph& w, const std::vector<int>& dense_comm,
                        int community_count) {
    WeightedGraph agg;
    agg.adj.resize(community_count);
    for (std::size_t u = 0; u < w.adj.size(); ++u)
        for (auto [v, wt] : w.adj[u]) agg.add(dense_comm[u], dense_comm[v], wt);
    agg.finish();
    return agg;
}

}  // namespace

CommunityAssignment detect_communities(const Graph& g, std::uint64_t rng_seed) {
    WeightedGraph level = WeightedGraph::symmetrize(g);
    std::mt19937_64 rng(rng_seed);

    std::vector<int> node_comm(g.node_count());
    std::iota(node_comm.begin(), node_comm.end(), 0);

    while (true) {
        auto comm = local_moves(level, rng);
        auto dense = CommunityAssignment::from_labels(comm);
        if (dense.community_count == static_cast<int>(level.adj.size())) break;
        for (auto& c : node_comm) c = dense.labels[c];
        level = aggregate(level, dense.labels, dense.community_count);
    }
    return CommunityAssignment::from_labels(node_comm);
}

double modularity(const Graph& g, const CommunityAssignment& a) {
    if (static_cast<int>(a.labels.size()) != g.node_count())
        throw std::invalid_argument("modularity: labels do not cover the graph");
    WeightedGraph w = WeightedGraph::symmetrize(g);
    std::vector<double> intra(a.community_count, 0.0);
    std::vector<double> tot(a.community_count, 0.0);
    for (int u = 0; u < g.node_count(); ++u) {
        tot[a.labels[u]] += w.strength[u];
        for (auto [v, wt] : w.adj[u])
            if (a.labels[u] == a.labels[v]) intra[a.labels[u]] += wt;
    }
    double q = 0.0;
    for (int c = 0; c < a.community_count; ++c)
        q += intra[c] / w.total - (tot[c] / w.total) * (tot[c] / w.total);
    return q;
}

CommunityAssignment load_assignment(const std::filesystem::path& path, const Graph& g) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open assignment: " + path.string());

    std::unordered_map<std::int64_t, int> node_of_label;
    for (int v = 0; v < g.node_count(); ++v) node_of_label[g.label(v)] = v;

    std::vector<int> raw(g.node_count(), -1);
    std::vector<char> seen(g.node_count(), 0);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t pos = line.find_first_not_of(" \t");
        if (pos == std::string::npos || line[pos] == '#') continue;
        std::istringstream ss(line);
        std::int64_t label;
        int community;
        if (!(ss >> label >> community))
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": malformed assignment line");
        auto it = node_of_label.find(label);
        if (it == node_of_label.end())
            throw std::runtime_error("assignment: unknown node " + std::to_string(label));
        if (seen[it->second])
            throw std::runtime_error("assignment: duplicate node " + std::to_string(label));
        seen[it->second] = 1;
        raw[it->second] = community;
    }
    for (int v = 0; v < g.node_count(); ++v)
        if (!seen[v])
            throw std::runtime_error("assignment: node " + std::to_string(g.label(v)) +
                                     " unassigned");
    return CommunityAssignment::from_labels(std::move(raw));
}

void save_assignment(const CommunityAssignment& a, const Graph& g,
                     const std::filesystem::path& path) {
    if (static_cast<int>(a.labels.size()) != g.node_count())
        throw std::invalid_argument("save_assignment: labels do not cover the graph");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write assignment: " + path.string());
    for (int v = 0; v < g.node_count(); ++v)
        out << g.label(v) << ' ' << a.labels[v] << '\n';
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<int> nodes_in_small_communities(const CommunityAssignment& a, int min_size) {
    std::vector<int> out;
    for (std::size_t v = 0; v < a.labels.size(); ++v)
        if (a.sizes[a.labels[v]] < min_size) out.push_back(static_cast<int>(v));
    return out;
}

}  // namespace moeim
