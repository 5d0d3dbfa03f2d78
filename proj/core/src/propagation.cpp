#include "moeim/propagation.hpp"

#include <algorithm>
#include <stdexcept>

#include "moeim/util.hpp"

namespace moeim {

PropagationModel PropagationModel::ic(double p) {
    if (p <= 0.0 || p > 1.0) throw std::invalid_argument("IC probability must be in (0,1]");
    return {ModelKind::IC, p, 0.0, 0.0};
}

PropagationModel PropagationModel::wc() { return {ModelKind::WC, 0.0, 0.0, 0.0}; }

PropagationModel PropagationModel::lt(double low, double high) {
    if (low < 0.0 || high > 1.0 || low > high)
        throw std::invalid_argument("LT thresholds must satisfy 0 <= low <= high <= 1");
    return {ModelKind::LT, 0.0, low, high};
}

namespace {

constexpr std::uint64_t kThresholdTag = 0xa0761d6478bd642fULL;

inline double edge_coin(std::uint64_t sim_seed, int u, int v) {
    std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
                        static_cast<std::uint32_t>(v);
    return u01(mix64(sim_seed ^ mix64(key)));
}

inline double node_threshold(std::uint64_t sim_seed, int v, double low, double high) {
    double r = u01(mix64(sim_seed ^ kThresholdTag ^ mix64(static_cast<std::uint64_t>(v))));
    return low + (high - low) * r;
}

// Reusable per-thread buffers; stamp arrays avoid O(n) clears per simulation.
struct SimScratch {
    std::vector<std::uint32_t> active_stamp;
    std::vector<std::uint32_t> acc_stamp;
    std::vector<double> acc;
    std::vector<int> frontier, next, activated;
    std::uint32_t epoch = 0;

    void prepare(int n) {
        if (static_cast<int>(active_stamp.size()) != n) {
            active_stamp.assign(n, 0);
            acc_stamp.assign(n, 0);
            acc.assign(n, 0.0);
            epoch = 0;
        }
        ++epoch;
        if (epoch == 0) {  // stamp wrap
            std::fill(active_stamp.begin(), active_stamp.end(), 0u);
            std::fill(acc_stamp.begin(), acc_stamp.end(), 0u);
            epoch = 1;
        }
        frontier.clear();
        next.clear();
        activated.clear();
    }

    bool active(int v) const { return active_stamp[v] == epoch; }
    void activate(int v) {
        active_stamp[v] = epoch;
        activated.push_back(v);
    }
    double& accumulator(int v) {
        if (acc_stamp[v] != epoch) {
            acc_stamp[v] = epoch;
            acc[v] = 0.0;
        }
        return acc[v];
    }
};

int run_cascade(const Graph& g, const PropagationModel& model, std::span<const int> seed,
                int tau, std::uint64_t sim_seed, SimScratch& s) {
    s.prepare(g.node_count());
    for (int v : seed) {
        if (v < 0 || v >= g.node_count())
            throw std::invalid_argument("simulate: seed node out of range");
        if (!s.active(v)) {
            s.activate(v);
            s.frontier.push_back(v);
        }
    }
    int hops = 0;
    int t = 0;
    while (!s.frontier.empty() && t < tau) {
        s.next.clear();
        for (int u : s.frontier) {
            for (int v : g.out_neighbors(u)) {
                if (s.active(v)) continue;
                bool fires = false;
                switch (model.kind) {
                    case ModelKind::IC:
                        fires = edge_coin(sim_seed, u, v) < model.ic_probability;
                        break;
                    case ModelKind::WC:
                        fires = edge_coin(sim_seed, u, v) < 1.0 / g.in_degree(v);
                        break;
                    case ModelKind::LT: {
                        double& w = s.accumulator(v);
                        w += 1.0 / g.in_degree(v);
                        fires = w >= node_threshold(sim_seed, v, model.lt_threshold_low,
                                                    model.lt_threshold_high);
                        break;
                    }
                }
                if (fires) {
                    s.activate(v);
                    s.next.push_back(v);
                }
            }
        }
        std::swap(s.frontier, s.next);
        ++t;
        if (!s.frontier.empty()) ++hops;
    }
    return hops;
}

}  // namespace

SpreadSample simulate_once(const Graph& g, const PropagationModel& model,
                           std::span<const int> seed, int tau, std::uint64_t sim_seed) {
    SimScratch s;
    SpreadSample out;
    out.hops = run_cascade(g, model, seed, tau, sim_seed, s);
    out.activated = s.activated;
    std::sort(out.activated.begin(), out.activated.end());
    return out;
}

SpreadEstimate monte_carlo(const Graph& g, const PropagationModel& model,
                           std::span<const int> seed, int tau, int n_sims,
                           std::uint64_t rng_seed, const CommunityAssignment* communities,
                           int workers) {
    if (n_sims < 1) throw std::invalid_argument("monte_carlo: n_sims must be >= 1");

    std::vector<char> is_seed(g.node_count(), 0);
    for (int v : seed) is_seed[v] = 1;
    int c = communities ? communities->community_count : 0;

    struct Partial {
        std::uint64_t influence = 0, hops = 0;
        std::vector<std::uint64_t> hits;
    };
    int nthreads = std::max(1, std::min(workers, n_sims));
    std::vector<Partial> partials(nthreads);
    for (auto& p : partials) p.hits.assign(c, 0);

    parallel_for(static_cast<std::size_t>(nthreads), nthreads, [&](std::size_t t) {
        SimScratch scratch;
        Partial& p = partials[t];
        for (int i = static_cast<int>(t); i < n_sims; i += nthreads) {
            std::uint64_t sim_seed = mix64(rng_seed ^ static_cast<std::uint64_t>(i));
            p.hops += static_cast<std::uint64_t>(
                run_cascade(g, model, seed, tau, sim_seed, scratch));
            p.influence += scratch.activated.size();
            if (communities)
                for (int v : scratch.activated)
                    if (!is_seed[v]) ++p.hits[communities->labels[v]];
        }
    });

    SpreadEstimate e;
    e.samples = n_sims;
    std::uint64_t influence = 0, hops = 0;
    std::vector<std::uint64_t> hits(c, 0);
    for (const auto& p : partials) {
        influence += p.influence;
        hops += p.hops;
        for (int j = 0; j < c; ++j) hits[j] += p.hits[j];
    }
    e.mean_influence = static_cast<double>(influence) / n_sims;
    e.mean_hops = static_cast<double>(hops) / n_sims;
    if (communities) {
        e.mean_community_hits.resize(c);
        for (int j = 0; j < c; ++j)
            e.mean_community_hits[j] = static_cast<double>(hits[j]) / n_sims;
    }
    return e;
}

std::vector<std::pair<int, double>> solo_spread_ranking(const Graph& g,
                                                        const PropagationModel& model,
                                                        int tau, int n_sims,
                                                        std::uint64_t rng_seed,
                                                        int workers) {
    std::vector<std::pair<int, double>> out(g.node_count());
    parallel_for(static_cast<std::size_t>(g.node_count()), workers, [&](std::size_t v) {
        int node = static_cast<int>(v);
        auto est = monte_carlo(g, model, std::span<const int>(&node, 1), tau, n_sims,
                               rng_seed, nullptr, 1);
        out[v] = {node, est.mean_influence};
    });
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        if (g.out_degree(a.first) != g.out_degree(b.first))
            return g.out_degree(a.first) > g.out_degree(b.first);
        return a.first < b.first;
    });
    return out;
}

}  // namespace moeim
