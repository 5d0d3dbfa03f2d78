#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "moeim/analysis.hpp"
#include "moeim/community.hpp"
#include "moeim/propagation.hpp"

using namespace moeim;

namespace {

Graph random_digraph(int n, int arcs, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<std::pair<int, int>> edges;
    edges.reserve(arcs);
    for (int i = 0; i < arcs; ++i) {
        int u = pick(rng), v = pick(rng);
        if (u != v) edges.emplace_back(u, v);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph::from_edges(n, true, std::move(edges));
}

void bm_monte_carlo(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    Graph g = random_digraph(n, 10 * n, 1);
    std::vector<int> seed = {0, 1, 2, 3, 4};
    auto model = PropagationModel::wc();
    for (auto _ : state) {
        auto est = monte_carlo(g, model, seed, 5, 100, 7, nullptr,
                               static_cast<int>(state.range(1)));
        benchmark::DoNotOptimize(est.mean_influence);
    }
    state.SetItemsProcessed(state.iterations() * 100);
}

void bm_hypervolume(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    int m = static_cast<int>(state.range(1));
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<std::vector<double>> pts(n, std::vector<double>(m));
    for (auto& p : pts)
        for (auto& x : p) x = u(rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hypervolume(pts, m));
    }
}

void bm_detect_communities(benchmark::State& state) {
    int n = static_cast<int>(state.range(0));
    Graph g = random_digraph(n, 8 * n, 5);
    for (auto _ : state) {
        auto a = detect_communities(g, 1);
        benchmark::DoNotOptimize(a.community_count);
    }
}

}  // namespace

BENCHMARK(bm_monte_carlo)->Args({1000, 1})->Args({1000, 4})->Args({10000, 4});
BENCHMARK(bm_hypervolume)->Args({50, 2})->Args({50, 4})->Args({100, 6});
BENCHMARK(bm_detect_communities)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
