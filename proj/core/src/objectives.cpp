#include "moeim/objectives.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

namespace moeim {

ObjectiveMask ObjectiveMask::all() {
    ObjectiveMask m;
    m.active.fill(true);
    return m;
}

ObjectiveMask ObjectiveMask::influence_seed() {
    ObjectiveMask m;
    m.set(Objective::influence);
    m.set(Objective::seed_size);
    return m;
}

ObjectiveMask ObjectiveMask::parse(const std::string& text) {
    if (text == "all") return all();
    ObjectiveMask m;
    for (char ch : text) {
        auto it = std::find(kObjectiveLetters.begin(), kObjectiveLetters.end(),
                            static_cast<char>(std::toupper(ch)));
        if (it == kObjectiveLetters.end())
            throw std::invalid_argument("unknown objective letter: " + std::string(1, ch));
        int idx = static_cast<int>(it - kObjectiveLetters.begin());
        if (m.active[idx])
            throw std::invalid_argument("duplicate objective letter: " + std::string(1, ch));
        m.active[idx] = true;
    }
    if (m.count() == 0) throw std::invalid_argument("empty objective mask");
    return m;
}

int ObjectiveMask::count() const {
    return static_cast<int>(std::count(active.begin(), active.end(), true));
}

std::string ObjectiveMask::to_string() const {
    std::string s;
    for (int i = 0; i < kObjectiveCount; ++i)
        if (active[i]) s += kObjectiveLetters[i];
    return s;
}

namespace {

constexpr double kLog2 = 0.6931471805599453;

void check_distribution(std::span<const double> p, const char* name) {
    double sum = 0.0;
    for (double x : p) {
        if (x < 0.0) throw std::invalid_argument(std::string(name) + ": negative entry");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument(std::string(name) + ": does not sum to 1");
}

// KL(p || m) in bits, with 0 * log(0/x) = 0.
double kl_bits(std::span<const double> p, std::span<const double> m) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (p[i] > 0.0) s += p[i] * std::log(p[i] / m[i]) / kLog2;
    return s;
}

}  // namespace

double jsd(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size() || p.empty())
        throw std::invalid_argument("jsd: length mismatch");
    check_distribution(p, "jsd p");
    check_distribution(q, "jsd q");
    std::vector<double> m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
    return 0.5 * kl_bits(p, m) + 0.5 * kl_bits(q, m);
}

double jsd_normalized(std::span<const double> p, int c) {
    if (c < 2) throw std::invalid_argument("jsd_normalized: needs at least 2 communities");
    if (static_cast<int>(p.size()) != c)
        throw std::invalid_argument("jsd_normalized: length mismatch");
    // The endpoints of the normalization are exact by definition; computing
    // them would admit last-ulp drift from summation order (a one-hot away
    // from index 0 visits the same terms in a different order than the
    // reference one-hot in the denominator).
    int ones = 0, zeros = 0;
    for (double x : p) {
        if (x == 1.0) ++ones;
        if (x == 0.0) ++zeros;
    }
    if (ones == 1 && zeros == c - 1) return 1.0;
    if (std::all_of(p.begin(), p.end(), [&](double x) { return x == 1.0 / c; })) return 0.0;

    std::vector<double> uniform(c, 1.0 / c);
    std::vector<double> one_hot(c, 0.0);
    one_hot[0] = 1.0;
    return jsd(p, uniform) / jsd(one_hot, uniform);
}

double communities_objective(const SpreadEstimate& estimate,
                             const CommunityAssignment& assignment) {
    int c = assignment.community_count;
    if (static_cast<int>(estimate.mean_community_hits.size()) != c)
        throw std::invalid_argument("communities_objective: estimate lacks community hits");
    double total = std::accumulate(estimate.mean_community_hits.begin(),
                                   estimate.mean_community_hits.end(), 0.0);
    if (total <= 0.0) return 0.0;
    std::vector<double> p(estimate.mean_community_hits);
    for (double& x : p) x /= total;
    return 1.0 - jsd_normalized(p, c);
}

double fairness_objective(std::span<const int> seed, const CommunityAssignment& assignment) {
    if (seed.empty()) return 0.0;
    std::vector<double> p(assignment.community_count, 0.0);
    for (int v : seed) p[assignment.labels[v]] += 1.0;
    for (double& x : p) x /= static_cast<double>(seed.size());
    return 1.0 - jsd_normalized(p, assignment.community_count);
}

int budget(const Graph& g, std::span<const int> seed) {
    int b = 0;
    for (int v : seed) b += g.out_degree(v);
    return b;
}

int budget_cap(const Graph& g, int k) {
    if (k < 1 || k > g.node_count())
        throw std::invalid_argument("budget_cap: k out of range");
    std::vector<int> deg = g.out_degrees();
    std::nth_element(deg.begin(), deg.begin() + (k - 1), deg.end(), std::greater<int>());
    return std::accumulate(deg.begin(), deg.begin() + k, 0);
}

ObjectiveVector evaluate(const Graph& g, const CommunityAssignment* assignment,
                         const PropagationModel& model, std::span<const int> seed, int tau,
                         int n_sims, std::uint64_t rng_seed, int workers) {
    if (seed.empty()) throw std::invalid_argument("evaluate: empty seed set");
    auto est = monte_carlo(g, model, seed, tau, n_sims, rng_seed, assignment, workers);
    ObjectiveVector v;
    v.influence = est.mean_influence;
    v.seed_size = static_cast<int>(seed.size());
    v.budget = budget(g, seed);
    v.time = est.mean_hops;
    if (assignment) {
        v.communities_score = communities_objective(est, *assignment);
        v.fairness_score = fairness_objective(seed, *assignment);
    }
    return v;
}

std::array<double, kObjectiveCount> to_maximize_all(const ObjectiveVector& v,
                                                    const NormalizationContext& ctx) {
    if (ctx.node_count <= 0 || ctx.max_seed_size <= 0 || ctx.budget_cap <= 0)
        throw std::invalid_argument("normalization: context ranges must be positive");
    std::array<double, kObjectiveCount> f{};
    f[0] = v.influence / ctx.node_count;
    f[1] = 1.0 - static_cast<double>(v.seed_size) / ctx.max_seed_size;
    f[2] = v.communities_score;
    f[3] = v.fairness_score;
    f[4] = 1.0 - static_cast<double>(std::min(v.budget, ctx.budget_cap)) / ctx.budget_cap;
    if (ctx.tau == kUnboundedTau) {
        if (ctx.active.has(Objective::time))
            throw std::invalid_argument("normalization: time objective needs a finite tau");
        f[5] = 0.0;
    } else {
        f[5] = 1.0 - v.time / ctx.tau;
    }
    return f;
}

std::vector<double> to_maximize_space(const ObjectiveVector& v,
                                      const NormalizationContext& ctx) {
    auto f = to_maximize_all(v, ctx);
    std::vector<double> out;
    out.reserve(ctx.active.count());
    for (int i = 0; i < kObjectiveCount; ++i)
        if (ctx.active.active[i]) out.push_back(f[i]);
    return out;
}

}  // namespace moeim
