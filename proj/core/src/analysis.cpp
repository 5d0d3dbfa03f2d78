#include "moeim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace moeim {

bool dominates(std::span<const double> a, std::span<const double> b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] < b[i]) return false;
        if (a[i] > b[i]) strict = true;
    }
    return strict;
}

std::vector<std::size_t> nondominated_indices(const std::vector<std::vector<double>>& points) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
            if (j == i) continue;
            if (dominates(points[j], points[i])) dominated = true;
            // Of equal points keep only the first occurrence.
            if (j < i && points[j] == points[i]) dominated = true;
        }
        if (!dominated) out.push_back(i);
    }
    return out;
}

void ParetoFront::insert(ParetoEntry entry) {
    for (const auto& e : entries) {
        if (dominates(e.point, entry.point)) return;
        if (e.point == entry.point && e.seed_nodes == entry.seed_nodes) return;
    }
    std::erase_if(entries,
                  [&](const ParetoEntry& e) { return dominates(entry.point, e.point); });
    entries.push_back(std::move(entry));
}

namespace {

double inclusive_hv(const std::vector<double>& p) {
    double v = 1.0;
    for (double x : p) v *= x;
    return v;
}

std::vector<std::vector<double>> nds_filter(std::vector<std::vector<double>> ps) {
    auto idx = nondominated_indices(ps);
    std::vector<std::vector<double>> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(std::move(ps[i]));
    return out;
}

double hv2d(std::vector<std::vector<double>> ps) {
    std::sort(ps.begin(), ps.end(),
              [](const auto& a, const auto& b) { return a[0] > b[0]; });
    double volume = 0.0, covered_y = 0.0;
    for (const auto& p : ps) {
        if (p[1] > covered_y) {
            volume += p[0] * (p[1] - covered_y);
            covered_y = p[1];
        }
    }
    return volume;
}

// WFG: hv = sum_i [ inclhv(p_i) - hv(nds(limit(p_i, tail))) ].
double wfg(std::vector<std::vector<double>> ps) {
    if (ps.empty()) return 0.0;
    if (ps[0].size() == 2) return hv2d(std::move(ps));
    std::sort(ps.begin(), ps.end(),
              [](const auto& a, const auto& b) { return a[0] > b[0]; });
    double volume = 0.0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::vector<std::vector<double>> limited;
        limited.reserve(ps.size() - i - 1);
        for (std::size_t j = i + 1; j < ps.size(); ++j) {
            std::vector<double> q(ps[i].size());
            for (std::size_t d = 0; d < q.size(); ++d) q[d] = std::min(ps[i][d], ps[j][d]);
            limited.push_back(std::move(q));
        }
        volume += inclusive_hv(ps[i]) - wfg(nds_filter(std::move(limited)));
    }
    return volume;
}

}  // namespace

double hypervolume(const std::vector<std::vector<double>>& points, int m) {
    if (m < 2 || m > kObjectiveCount)
        throw std::invalid_argument("hypervolume: dimension must be in 2..6");
    for (const auto& p : points) {
        if (static_cast<int>(p.size()) != m)
            throw std::invalid_argument("hypervolume: point dimension mismatch");
        for (double x : p)
            if (x < -1e-12 || x > 1.0 + 1e-12)
                throw std::invalid_argument("hypervolume: coordinate outside [0,1]");
    }
    return wfg(nds_filter(points));
}

double subset_hypervolume(const ParetoFront& front, const ObjectiveMask& dims) {
    int m = dims.count();
    if (dims.has(Objective::time) && front.ctx.tau == kUnboundedTau)
        throw std::invalid_argument("subset_hypervolume: time dimension needs finite tau");
    std::vector<std::vector<double>> projected;
    projected.reserve(front.entries.size());
    for (const auto& e : front.entries) {
        auto full = to_maximize_all(e.objectives, front.ctx);
        std::vector<double> q;
        q.reserve(m);
        for (int i = 0; i < kObjectiveCount; ++i)
            if (dims.active[i]) q.push_back(std::clamp(full[i], 0.0, 1.0));
        projected.push_back(std::move(q));
    }
    return hypervolume(projected, m);
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson: need equal lengths >= 2");
    double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

std::vector<std::vector<double>> correlation_matrix(const std::vector<ParetoFront>& fronts) {
    std::vector<std::array<double, kObjectiveCount>> pool;
    for (const auto& f : fronts) {
        if (!(f.ctx.active == ObjectiveMask::all()))
            throw std::invalid_argument("correlation_matrix: fronts must carry all six objectives");
        for (const auto& e : f.entries) pool.push_back(to_maximize_all(e.objectives, f.ctx));
    }
    if (pool.size() < 2)
        throw std::invalid_argument("correlation_matrix: fewer than 2 pooled entries");

    std::vector<std::vector<double>> matrix(kObjectiveCount,
                                            std::vector<double>(kObjectiveCount, 1.0));
    for (int a = 0; a < kObjectiveCount; ++a) {
        std::vector<double> xa(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) xa[i] = pool[i][a];
        for (int b = a + 1; b < kObjectiveCount; ++b) {
            std::vector<double> xb(pool.size());
            for (std::size_t i = 0; i < pool.size(); ++i) xb[i] = pool[i][b];
            double r = pearson(xa, xb);
            matrix[a][b] = matrix[b][a] = r;
        }
    }
    return matrix;
}

std::vector<HolmDecision> holm_bonferroni(
    const std::vector<std::pair<std::string, double>>& p_values, double alpha) {
    if (alpha <= 0.0 || alpha >= 1.0) throw std::invalid_argument("holm: alpha must be in (0,1)");
    std::vector<std::size_t> order(p_values.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return p_values[a].second < p_values[b].second;
    });

    std::vector<HolmDecision> out(p_values.size());
    std::size_t n = p_values.size();
    bool stopped = false;
    for (std::size_t rank = 0; rank < n; ++rank) {
        auto [label, p] = p_values[order[rank]];
        if (p < 0.0 || p > 1.0) throw std::invalid_argument("holm: p-value outside [0,1]");
        double threshold = alpha / static_cast<double>(n - rank);
        bool reject = !stopped && p <= threshold;
        if (!reject) stopped = true;
        out[order[rank]] = {label, p, reject};
    }
    return out;
}

}  // namespace moeim
