#include "moeim/baselines.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

#include "moeim/objectives.hpp"
#include "moeim/util.hpp"

namespace moeim {

GreedyTrace gdd(const Graph& g, int k) {
    if (k < 1 || k > g.node_count()) throw std::invalid_argument("gdd: k out of range");
    double p = 1.0 / g.avg_in_degree();

    std::vector<int> selected_in_neighbors(g.node_count(), 0);
    std::vector<char> selected(g.node_count(), 0);
    GreedyTrace trace;
    for (int step = 0; step < k; ++step) {
        int best = -1;
        double best_score = 0.0;
        for (int v = 0; v < g.node_count(); ++v) {
            if (selected[v]) continue;
            double d = g.out_degree(v);
            double t = selected_in_neighbors[v];
            double score = d - 2.0 * t - (d - t) * t * p;
            if (best < 0 || score > best_score) {
                best = v;
                best_score = score;
            }
        }
        selected[best] = 1;
        trace.ordered_seeds.push_back(best);
        for (int w : g.out_neighbors(best))
            if (!selected[w]) ++selected_in_neighbors[w];
    }
    return trace;
}

double SpreadCache::spread(const Graph& g, const PropagationModel& model,
                           std::vector<int> seed, int tau, int n_sims,
                           std::uint64_t rng_seed, int workers) {
    if (seed.empty()) return 0.0;
    std::sort(seed.begin(), seed.end());
    auto it = values.find(seed);
    if (it != values.end()) return it->second;
    double v = monte_carlo(g, model, seed, tau, n_sims, rng_seed, nullptr, workers)
                   .mean_influence;
    ++calls;
    values.emplace(std::move(seed), v);
    return v;
}

GreedyTrace celf(const Graph& g, const PropagationModel& model, int k, int tau, int n_sims,
                 std::uint64_t rng_seed, int workers, SpreadCache* cache) {
    if (k < 1 || k > g.node_count()) throw std::invalid_argument("celf: k out of range");
    SpreadCache local;
    SpreadCache& sc = cache ? *cache : local;

    // First pass: exhaustive solo evaluations, parallel since independent.
    std::vector<double> solo(g.node_count());
    {
        std::vector<char> cached(g.node_count(), 0);
        for (int v = 0; v < g.node_count(); ++v) {
            auto it = sc.values.find(std::vector<int>{v});
            if (it != sc.values.end()) {
                solo[v] = it->second;
                cached[v] = 1;
            }
        }
        parallel_for(static_cast<std::size_t>(g.node_count()), workers, [&](std::size_t vi) {
            if (cached[vi]) return;
            int node = static_cast<int>(vi);
            solo[vi] = monte_carlo(g, model, std::span<const int>(&node, 1), tau, n_sims,
                                   rng_seed, nullptr, 1)
                           .mean_influence;
        });
        for (int v = 0; v < g.node_count(); ++v) {
            if (cached[v]) continue;
            sc.values.emplace(std::vector<int>{v}, solo[v]);
            ++sc.calls;
        }
    }

    struct Candidate {
        double gain;
        int node;
        int round;  // |S| at the time the gain was computed
    };
    auto worse = [](const Candidate& a, const Candidate& b) {
        if (a.gain != b.gain) return a.gain < b.gain;
        return a.node > b.node;
    };
    std::priority_queue<Candidate, std::vector<Candidate>, decltype(worse)> queue(worse);
    for (int v = 0; v < g.node_count(); ++v) queue.push({solo[v], v, 0});

    GreedyTrace trace;
    std::vector<int> seeds;
    double base = 0.0;
    while (static_cast<int>(seeds.size()) < k && !queue.empty()) {
        Candidate top = queue.top();
        queue.pop();
        if (top.round == static_cast<int>(seeds.size())) {
            seeds.push_back(top.node);
            trace.ordered_seeds.push_back(top.node);
            trace.marginal_gain.push_back(top.gain);
            base = sc.spread(g, model, seeds, tau, n_sims, rng_seed, workers);
        } else {
            std::vector<int> with = seeds;
            with.push_back(top.node);
            double gain = sc.spread(g, model, std::move(with), tau, n_sims, rng_seed,
                                    workers) -
                          base;
            queue.push({gain, top.node, static_cast<int>(seeds.size())});
        }
    }
    trace.evaluations_used = sc.calls;
    return trace;
}

ParetoFront prefix_sweep(const Graph& g, const CommunityAssignment* assignment,
                         const PropagationModel& model, const GreedyTrace& trace,
                         const NormalizationContext& ctx, int n_sims,
                         std::uint64_t rng_seed, int workers) {
    ParetoFront front;
    front.ctx = ctx;
    std::vector<ObjectiveVector> values(trace.ordered_seeds.size());
    parallel_for(trace.ordered_seeds.size(), workers, [&](std::size_t i) {
        std::span<const int> prefix(trace.ordered_seeds.data(), i + 1);
        values[i] = evaluate(g, assignment, model, prefix, ctx.tau, n_sims, rng_seed, 1);
    });
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::vector<int> prefix(trace.ordered_seeds.begin(),
                                trace.ordered_seeds.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        std::sort(prefix.begin(), prefix.end());
        front.insert({std::move(prefix), values[i], to_maximize_space(values[i], ctx)});
    }
    return front;
}

}  // namespace moeim
