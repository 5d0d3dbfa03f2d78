#include "moeim/moea.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "moeim/util.hpp"

namespace moeim {

void MoeaConfig::validate(const Graph& g) const {
    if (population_size < 1) throw std::invalid_argument("moea: population_size must be >= 1");
    if (offspring_size < 1) throw std::invalid_argument("moea: offspring_size must be >= 1");
    if (elites < 0 || elites >= population_size)
        throw std::invalid_argument("moea: elites must be in [0, population_size)");
    if (tournament_size < 1 || tournament_size > population_size)
        throw std::invalid_argument("moea: tournament_size out of range");
    if (generations < 0) throw std::invalid_argument("moea: generations must be >= 0");
    if (k < 1 || k > g.node_count()) throw std::invalid_argument("moea: k out of range");
    if (lambda < 0.0 || lambda > 1.0) throw std::invalid_argument("moea: lambda outside [0,1]");
    if (crossover_rate < 0.0 || crossover_rate > 1.0 || mutation_rate < 0.0 ||
        mutation_rate > 1.0)
        throw std::invalid_argument("moea: variation rates outside [0,1]");
    if (active.count() < 2)
        throw std::invalid_argument("moea: at least 2 active objectives required");
}

namespace {

std::vector<int> random_distinct_nodes(int n, int count, std::mt19937_64& rng,
                                       const std::vector<int>& exclude = {}) {
    std::unordered_set<int> taken(exclude.begin(), exclude.end());
    std::vector<int> out;
    std::uniform_int_distribution<int> pick(0, n - 1);
    while (static_cast<int>(out.size()) < count) {
        int v = pick(rng);
        if (taken.insert(v).second) out.push_back(v);
    }
    return out;
}

int weighted_pick(const std::vector<double>& weights, std::mt19937_64& rng) {
    double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (total <= 0.0) {
        std::uniform_int_distribution<std::size_t> pick(0, weights.size() - 1);
        return static_cast<int>(pick(rng));
    }
    std::uniform_real_distribution<double> u(0.0, total);
    double r = u(rng), acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (r < acc) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size()) - 1;
}

Individual make_individual(std::vector<int> nodes) {
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    return Individual{std::move(nodes), std::nullopt, 0, 0.0};
}

}  // namespace

std::vector<Individual> smart_initialize(const Graph& g, const PropagationModel& model,
                                         const MoeaConfig& cfg, int n_sims,
                                         std::mt19937_64& rng, int workers) {
    int n_smart = static_cast<int>(std::ceil(cfg.lambda * cfg.population_size));
    std::vector<Individual> pop;
    pop.reserve(cfg.population_size);

    if (n_smart > 0) {
        std::uint64_t ranking_seed = rng();
        auto ranking = solo_spread_ranking(g, model, 3, n_sims, ranking_seed, workers);
        std::vector<int> pool;
        for (int i = 0; i < cfg.k && i < static_cast<int>(ranking.size()); ++i)
            if (g.out_degree(ranking[i].first) >= cfg.theta) pool.push_back(ranking[i].first);
        if (pool.empty()) {
            std::cerr << "warning: degree filter emptied the smart pool; "
                         "falling back to the unfiltered top-k\n";
            for (int i = 0; i < cfg.k && i < static_cast<int>(ranking.size()); ++i)
                pool.push_back(ranking[i].first);
        }

        std::uniform_int_distribution<int> size_dist(1, cfg.k);
        for (int i = 0; i < n_smart; ++i) {
            int size = size_dist(rng);
            std::vector<int> candidates = pool;
            std::vector<double> weights;
            weights.reserve(pool.size());
            for (int v : candidates) weights.push_back(static_cast<double>(g.out_degree(v)));
            std::vector<int> nodes;
            while (static_cast<int>(nodes.size()) < size && !candidates.empty()) {
                int idx = weighted_pick(weights, rng);
                nodes.push_back(candidates[idx]);
                candidates.erase(candidates.begin() + idx);
                weights.erase(weights.begin() + idx);
            }
            if (static_cast<int>(nodes.size()) < size) {
                auto pad = random_distinct_nodes(
                    g.node_count(), size - static_cast<int>(nodes.size()), rng, nodes);
                nodes.insert(nodes.end(), pad.begin(), pad.end());
            }
            pop.push_back(make_individual(std::move(nodes)));
        }
    }

    std::uniform_int_distribution<int> size_dist(1, cfg.k);
    while (static_cast<int>(pop.size()) < cfg.population_size) {
        int size = size_dist(rng);
        pop.push_back(make_individual(random_distinct_nodes(g.node_count(), size, rng)));
    }
    return pop;
}

std::pair<Individual, Individual> one_point_crossover(const Individual& a,
                                                      const Individual& b, int k,
                                                      std::mt19937_64& rng) {
    auto cut = [&](const Individual& p) {
        std::uniform_int_distribution<int> d(0, static_cast<int>(p.nodes.size()));
        return d(rng);
    };
    int ca = cut(a), cb = cut(b);

    auto splice = [&](const Individual& head, int ch, const Individual& tail, int ct) {
        std::vector<int> nodes(head.nodes.begin(), head.nodes.begin() + ch);
        for (auto it = tail.nodes.begin() + ct; it != tail.nodes.end(); ++it)
            if (std::find(nodes.begin(), nodes.end(), *it) == nodes.end())
                nodes.push_back(*it);
        while (static_cast<int>(nodes.size()) > k) {
            std::uniform_int_distribution<std::size_t> d(0, nodes.size() - 1);
            nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(d(rng)));
        }
        if (nodes.empty()) {
            const auto& donor =
                std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? a.nodes : b.nodes;
            std::uniform_int_distribution<std::size_t> d(0, donor.size() - 1);
            nodes.push_back(donor[d(rng)]);
        }
        return make_individual(std::move(nodes));
    };
    Individual c1 = splice(a, ca, b, cb);
    Individual c2 = splice(b, cb, a, ca);
    return {std::move(c1), std::move(c2)};
}

Individual mutate(const Individual& ind, const Graph& g, int k, std::mt19937_64& rng) {
    std::vector<int> nodes = ind.nodes;
    std::unordered_set<int> members(nodes.begin(), nodes.end());
    std::uniform_int_distribution<int> op_dist(0, 4);
    std::uniform_int_distribution<std::size_t> member_dist(0, nodes.size() - 1);

    switch (op_dist(rng)) {
        case 0: {  // global random insert
            if (static_cast<int>(nodes.size()) < k && static_cast<int>(nodes.size()) < g.node_count()) {
                std::uniform_int_distribution<int> pick(0, g.node_count() - 1);
                int v;
                do v = pick(rng);
                while (members.count(v));
                nodes.push_back(v);
            }
            break;
        }
        case 1: {  // global random removal
            if (nodes.size() > 1) nodes.erase(nodes.begin() + static_cast<std::ptrdiff_t>(member_dist(rng)));
            break;
        }
        case 2: {  // local neighbor
            std::size_t i = member_dist(rng);
            std::vector<int> candidates;
            for (int v : g.out_neighbors(nodes[i]))
                if (!members.count(v)) candidates.push_back(v);
            if (!candidates.empty()) {
                std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
                nodes[i] = candidates[pick(rng)];
            }
            break;
        }
        case 3: {  // local neighbor, second degree, out-degree-proportional
            std::size_t i = member_dist(rng);
            std::vector<int> candidates;
            std::unordered_set<int> seen;
            for (int w : g.out_neighbors(nodes[i]))
                for (int v : g.out_neighbors(w))
                    if (!members.count(v) && seen.insert(v).second) candidates.push_back(v);
            if (!candidates.empty()) {
                std::vector<double> weights;
                weights.reserve(candidates.size());
                for (int v : candidates) weights.push_back(static_cast<double>(g.out_degree(v)));
                nodes[i] = candidates[weighted_pick(weights, rng)];
            }
            break;
        }
        case 4: {  // global low degree, weight 1/(d_out+1)
            std::size_t i = member_dist(rng);
            std::vector<int> candidates;
            std::vector<double> weights;
            candidates.reserve(g.node_count());
            for (int v = 0; v < g.node_count(); ++v) {
                if (members.count(v)) continue;
                candidates.push_back(v);
                weights.push_back(1.0 / (g.out_degree(v) + 1.0));
            }
            if (!candidates.empty()) nodes[i] = candidates[weighted_pick(weights, rng)];
            break;
        }
    }
    return make_individual(std::move(nodes));
}

std::vector<std::vector<int>> fast_nondominated_sort(
    const std::vector<std::vector<double>>& points) {
    std::size_t n = points.size();
    std::vector<int> domination_count(n, 0);
    std::vector<std::vector<int>> dominated_by(n);
    std::vector<std::vector<int>> fronts(1);

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (dominates(points[i], points[j]))
                dominated_by[i].push_back(static_cast<int>(j));
            else if (dominates(points[j], points[i]))
                ++domination_count[i];
        }
        if (domination_count[i] == 0) fronts[0].push_back(static_cast<int>(i));
    }
    std::size_t assigned = fronts[0].size();
    while (assigned < n) {
        std::vector<int> next;
        for (int i : fronts.back())
            for (int j : dominated_by[i])
                if (--domination_count[j] == 0) next.push_back(j);
        std::sort(next.begin(), next.end());
        assigned += next.size();
        fronts.push_back(std::move(next));
    }
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<std::vector<double>>& front) {
    if (front.empty()) throw std::invalid_argument("crowding_distance: empty front");
    std::size_t n = front.size();
    std::size_t m = front[0].size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    std::vector<std::size_t> order(n);
    for (std::size_t obj = 0; obj < m; ++obj) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return front[a][obj] < front[b][obj]; });
        double range = front[order.back()][obj] - front[order.front()][obj];
        dist[order.front()] = dist[order.back()] = inf;
        if (range <= 0.0) continue;
        for (std::size_t i = 1; i + 1 < n; ++i)
            dist[order[i]] += (front[order[i + 1]][obj] - front[order[i - 1]][obj]) / range;
    }
    return dist;
}

namespace {

// Lower rank wins; ties by larger crowding.
bool crowded_less(const Individual& a, const Individual& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return a.crowding > b.crowding;
}

struct Evaluator {
    const Graph& g;
    const CommunityAssignment* assignment;
    const PropagationModel& model;
    EvalSettings eval;
    std::uint64_t eval_seed;
    EvaluationCache cache;

    void evaluate_batch(std::vector<Individual>& batch) {
        std::vector<Individual*> missing;
        for (auto& ind : batch) {
            if (ind.objectives) continue;
            auto it = cache.find(ind.nodes);
            if (it != cache.end()) {
                ind.objectives = it->second;
                continue;
            }
            missing.push_back(&ind);
        }
        // Deduplicate identical uncached sets within the batch.
        std::vector<Individual*> unique;
        std::map<std::vector<int>, std::size_t> pos;
        for (auto* ind : missing)
            if (pos.try_emplace(ind->nodes, unique.size()).second) unique.push_back(ind);

        std::vector<ObjectiveVector> results(unique.size());
        parallel_for(unique.size(), eval.workers, [&](std::size_t i) {
            results[i] = evaluate(g, assignment, model, unique[i]->nodes, eval.tau,
                                  eval.n_sims, eval_seed, 1);
        });
        for (std::size_t i = 0; i < unique.size(); ++i)
            cache.emplace(unique[i]->nodes, results[i]);
        for (auto* ind : missing) ind->objectives = cache.at(ind->nodes);
    }
};

// Assigns rank and crowding to every individual in place.
void assign_rank_and_crowding(std::vector<Individual>& pop,
                              const std::vector<std::vector<double>>& points) {
    auto fronts = fast_nondominated_sort(points);
    for (std::size_t r = 0; r < fronts.size(); ++r) {
        std::vector<std::vector<double>> fp;
        fp.reserve(fronts[r].size());
        for (int i : fronts[r]) fp.push_back(points[i]);
        auto crowd = crowding_distance(fp);
        for (std::size_t j = 0; j < fronts[r].size(); ++j) {
            pop[fronts[r][j]].rank = static_cast<int>(r);
            pop[fronts[r][j]].crowding = crowd[j];
        }
    }
}

const Individual& tournament(const std::vector<Individual>& pop, int size,
                             std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const Individual* best = &pop[pick(rng)];
    for (int i = 1; i < size; ++i) {
        const Individual* challenger = &pop[pick(rng)];
        if (crowded_less(*challenger, *best)) best = challenger;
    }
    return *best;
}

}  // namespace

RunHistory run_nsga2(const Graph& g, const CommunityAssignment* assignment,
                     const PropagationModel& model, const MoeaConfig& cfg,
                     const EvalSettings& eval, std::uint64_t rng_seed) {
    cfg.validate(g);
    if ((cfg.active.has(Objective::communities) || cfg.active.has(Objective::fairness)) &&
        assignment == nullptr)
        throw std::invalid_argument("moea: communities/fairness objectives need an assignment");
    if (cfg.active.has(Objective::time) && eval.tau == kUnboundedTau)
        throw std::invalid_argument("moea: time objective needs a finite tau");

    NormalizationContext ctx{g.node_count(), cfg.k, budget_cap(g, cfg.k), eval.tau,
                             cfg.active};
    std::mt19937_64 rng(rng_seed);
    Evaluator evaluator{g, assignment, model, eval, rng_seed, {}};

    RunHistory history;
    history.rng_seed = rng_seed;
    history.archive.ctx = ctx;

    auto points_of = [&](const std::vector<Individual>& pop) {
        std::vector<std::vector<double>> pts;
        pts.reserve(pop.size());
        for (const auto& ind : pop) pts.push_back(to_maximize_space(*ind.objectives, ctx));
        return pts;
    };

    auto record = [&](const std::vector<Individual>& pop,
                      const std::vector<std::vector<double>>& points, double seconds) {
        GenerationSnapshot snap;
        snap.seconds = seconds;
        for (auto i : nondominated_indices(points)) {
            snap.front_seeds.push_back(pop[i].nodes);
            snap.front_objectives.push_back(*pop[i].objectives);
            history.archive.insert({pop[i].nodes, *pop[i].objectives, points[i]});
        }
        history.generations.push_back(std::move(snap));
    };

    auto t0 = std::chrono::steady_clock::now();
    auto pop = smart_initialize(g, model, cfg, eval.n_sims, rng, eval.workers);
    evaluator.evaluate_batch(pop);
    auto points = points_of(pop);
    assign_rank_and_crowding(pop, points);
    record(pop, points,
           std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());

    for (int gen = 0; gen < cfg.generations; ++gen) {
        t0 = std::chrono::steady_clock::now();
        std::vector<Individual> offspring;
        offspring.reserve(cfg.offspring_size + cfg.elites);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        while (static_cast<int>(offspring.size()) < cfg.offspring_size) {
            const Individual& p1 = tournament(pop, cfg.tournament_size, rng);
            const Individual& p2 = tournament(pop, cfg.tournament_size, rng);
            Individual c1, c2;
            if (u(rng) < cfg.crossover_rate) {
                std::tie(c1, c2) = one_point_crossover(p1, p2, cfg.k, rng);
            } else {
                c1 = Individual{p1.nodes, p1.objectives, 0, 0.0};
                c2 = Individual{p2.nodes, p2.objectives, 0, 0.0};
            }
            for (Individual* c : {&c1, &c2}) {
                if (u(rng) < cfg.mutation_rate) *c = mutate(*c, g, cfg.k, rng);
                if (static_cast<int>(offspring.size()) < cfg.offspring_size)
                    offspring.push_back(std::move(*c));
            }
        }
        // Elites survive unconditionally via the offspring pool.
        std::vector<const Individual*> by_quality;
        for (const auto& ind : pop) by_quality.push_back(&ind);
        std::sort(by_quality.begin(), by_quality.end(),
                  [](const Individual* a, const Individual* b) { return crowded_less(*a, *b); });
        for (int e = 0; e < cfg.elites; ++e) offspring.push_back(*by_quality[e]);

        evaluator.evaluate_batch(offspring);

        std::vector<Individual> combined = std::move(pop);
        for (auto& ind : offspring) combined.push_back(std::move(ind));
        auto combined_points = points_of(combined);
        auto fronts = fast_nondominated_sort(combined_points);

        pop.clear();
        std::vector<std::vector<double>> new_points;
        for (const auto& front : fronts) {
            if (static_cast<int>(pop.size()) + static_cast<int>(front.size()) <=
                cfg.population_size) {
                for (int i : front) {
                    pop.push_back(combined[i]);
                    new_points.push_back(combined_points[i]);
                }
            } else {
                std::vector<std::vector<double>> fp;
                for (int i : front) fp.push_back(combined_points[i]);
                auto crowd = crowding_distance(fp);
                std::vector<std::size_t> order(front.size());
                std::iota(order.begin(), order.end(), std::size_t{0});
                std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                    return crowd[a] > crowd[b];
                });
                for (std::size_t j = 0;
                     static_cast<int>(pop.size()) < cfg.population_size; ++j) {
                    pop.push_back(combined[front[order[j]]]);
                    new_points.push_back(combined_points[front[order[j]]]);
                }
                break;
            }
            if (static_cast<int>(pop.size()) == cfg.population_size) break;
        }
        assign_rank_and_crowding(pop, new_points);

        // The archive sees the whole combined pool, so discarded but
        // globally non-dominated points are never lost.
        for (auto i : nondominated_indices(combined_points))
            history.archive.insert({combined[i].nodes, *combined[i].objectives,
                                    combined_points[i]});
        GenerationSnapshot snap;
        snap.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (auto i : nondominated_indices(new_points)) {
            snap.front_seeds.push_back(pop[i].nodes);
            snap.front_objectives.push_back(*pop[i].objectives);
        }
        history.generations.push_back(std::move(snap));
    }
    return history;
}

}  // namespace moeim
