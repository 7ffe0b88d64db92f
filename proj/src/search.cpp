// SPDX-License-Identifier: Apache-2.0
#include "mofsemt/search.hpp"

#include "mofsemt/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace mofs {

auto dominates(const ObjectivePair& a, const ObjectivePair& b) -> bool
{
    return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

auto nd_sort(std::span<const ObjectivePair> points) -> FrontAssignment
{
    const auto n = points.size();
    FrontAssignment out;
    out.front_of.assign(n, 0);
    if (n == 0) {
        return out;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t {0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (points[a][0] != points[b][0]) {
            return points[a][0] < points[b][0];
        }
        if (points[a][1] != points[b][1]) {
            return points[a][1] < points[b][1];
        }
        return a < b;
    });

    // In lexicographic order the most recent member of each front has that
    // front's smallest second objective, and "front k dominates p" is
    // monotone in k, so the front of p is found by binary search.
    std::vector<ObjectivePair> last;
    for (auto idx : order) {
        const auto& p = points[idx];
        auto front_dominates = [&](std::size_t k) {
            const auto& q = last[k];
            return q[1] < p[1] || (q[1] == p[1] && q[0] < p[0]);
        };
        std::size_t lo = 0;
        std::size_t hi = last.size();
        while (lo < hi) {
            auto mid = (lo + hi) / 2;
            if (front_dominates(mid)) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        if (lo == last.size()) {
            last.push_back(p);
        } else {
            last[lo] = p;
        }
        out.front_of[idx] = lo;
    }
    out.n_fronts = last.size();
    return out;
}

auto crowding_distance(std::span<const ObjectivePair> points) -> std::vector<double>
{
    const auto n = points.size();
    constexpr auto inf = std::numeric_limits<double>::infinity();
    std::vector<double> distance(n, 0.0);
    if (n <= 2) {
        std::fill(distance.begin(), distance.end(), inf);
        return distance;
    }
    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < 2; ++m) {
        std::iota(order.begin(), order.end(), std::size_t {0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return points[a][m] < points[b][m] || (points[a][m] == points[b][m] && a < b);
        });
        auto lo = points[order.front()][m];
        auto hi = points[order.back()][m];
        distance[order.front()] = inf;
        distance[order.back()] = inf;
        auto range = hi - lo;
        if (range <= 0.0) {
            continue;
        }
        for (std::size_t r = 1; r + 1 < n; ++r) {
            distance[order[r]] += (points[order[r + 1]][m] - points[order[r - 1]][m]) / range;
        }
    }
    return distance;
}

auto compare(const ObjectiveVector& a, const ObjectiveVector& b, CompareMode mode) -> Winner
{
    switch (mode) {
    case CompareMode::original: {
        ObjectivePair pa {a.error_rate, a.feature_rate};
        ObjectivePair pb {b.error_rate, b.feature_rate};
        if (dominates(pa, pb)) {
            return Winner::first;
        }
        if (dominates(pb, pa)) {
            return Winner::second;
        }
        if (a.error_rate != b.error_rate) {
            return a.error_rate < b.error_rate ? Winner::first : Winner::second;
        }
        if (a.feature_rate != b.feature_rate) {
            return a.feature_rate < b.feature_rate ? Winner::first : Winner::second;
        }
        return Winner::first;
    }
    case CompareMode::auxiliary:
        if (a.error_rate != b.error_rate) {
            return a.error_rate < b.error_rate ? Winner::first : Winner::second;
        }
        if (a.assistant_error != b.assistant_error) {
            return a.assistant_error < b.assistant_error ? Winner::first : Winner::second;
        }
        if (a.feature_rate != b.feature_rate) {
            return a.feature_rate < b.feature_rate ? Winner::first : Winner::second;
        }
        return Winner::first;
    case CompareMode::error_only:
        return b.error_rate < a.error_rate ? Winner::second : Winner::first;
    }
    return Winner::first;
}

auto sort_pair(const ObjectiveVector& v, CompareMode mode) -> ObjectivePair
{
    if (mode == CompareMode::original) {
        return {v.error_rate, v.feature_rate};
    }
    return {v.error_rate, v.assistant_error};
}

void cso_update_loser(Individual& loser, const Individual& winner, std::span<const double> mean, double phi,
    Bounds bounds, const std::function<CsoDraw()>& draw)
{
    auto dim = loser.task_repr.size();
    if (winner.task_repr.size() != dim || mean.size() != dim) {
        fail(ErrorCode::dimension_mismatch, "CSO update dimension mismatch");
    }
    loser.velocity.resize(dim, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
        auto r = draw();
        auto& x = loser.task_repr[j];
        auto& v = loser.velocity[j];
        v = r.r1 * v + r.r2 * (winner.task_repr[j] - x) + phi * r.r3 * (mean[j] - x);
        x = std::clamp(x + v, bounds.lower, bounds.upper);
    }
    loser.objectives.reset();
}

auto cso_step(std::vector<Individual>& pop, CompareMode mode, double phi, Bounds bounds, std::uint64_t seed)
    -> std::vector<std::size_t>
{
    const auto n = pop.size();
    require(n >= 2, "CSO needs at least two individuals");
    auto dim = pop.front().task_repr.size();
    std::vector<double> mean(dim, 0.0);
    for (const auto& ind : pop) {
        require(ind.evaluated(), "CSO needs an evaluated population");
        for (std::size_t j = 0; j < dim; ++j) {
            mean[j] += ind.task_repr[j];
        }
    }
    for (auto& m : mean) {
        m /= static_cast<double>(n);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t {0});
    Rng shuffle_rng(derive_seed(seed, {0}));
    shuffle_rng.shuffle(std::span(order));

    // Winners are read before any loser moves, so every pair only needs the
    // pre-step snapshot and its own stream.
    std::vector<std::size_t> losers;
    for (std::size_t p = 0; p + 1 < n; p += 2) {
        auto a = order[p];
        auto b = order[p + 1];
        auto w = compare(pop[a].obj(), pop[b].obj(), mode);
        auto winner = w == Winner::first ? a : b;
        auto loser = w == Winner::first ? b : a;
        Rng rng(derive_seed(seed, {1, p / 2}));
        cso_update_loser(pop[loser], pop[winner], mean, phi, bounds, [&rng] {
            auto r1 = rng.uniform();
            auto r2 = rng.uniform();
            auto r3 = rng.uniform();
            return CsoDraw {r1, r2, r3};
        });
        losers.push_back(loser);
    }
    std::sort(losers.begin(), losers.end());
    return losers;
}

auto polynomial_mutation(std::span<const double> x, double eta, double p_m, Bounds bounds, Rng& rng)
    -> std::vector<double>
{
    std::vector<double> out(x.begin(), x.end());
    auto range = bounds.upper - bounds.lower;
    if (range <= 0.0) {
        return out;
    }
    auto exponent = 1.0 / (eta + 1.0);
    for (auto& y : out) {
        if (rng.uniform() >= p_m) {
            continue;
        }
        auto delta1 = (y - bounds.lower) / range;
        auto delta2 = (bounds.upper - y) / range;
        auto r = rng.uniform();
        double deltaq;
        if (r < 0.5) {
            auto xy = 1.0 - delta1;
            auto val = 2.0 * r + (1.0 - 2.0 * r) * std::pow(xy, eta + 1.0);
            deltaq = std::pow(val, exponent) - 1.0;
        } else {
            auto xy = 1.0 - delta2;
            auto val = 2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(xy, eta + 1.0);
            deltaq = 1.0 - std::pow(val, exponent);
        }
        y = std::clamp(y + deltaq * range, bounds.lower, bounds.upper);
    }
    return out;
}

auto dedup_by_selection(std::span<const Individual> pool) -> std::vector<Individual>
{
    std::unordered_set<Selection> seen;
    std::vector<Individual> out;
    out.reserve(pool.size());
    for (const auto& ind : pool) {
        if (seen.insert(ind.selection).second) {
            out.push_back(ind);
        }
    }
    return out;
}

namespace {
    // Error, then feature rate, then position.
    auto accuracy_order(std::span<const Individual> pool, std::span<const std::size_t> indices)
        -> std::vector<std::size_t>
    {
        std::vector<std::size_t> order(indices.begin(), indices.end());
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const auto& oa = pool[a].obj();
            const auto& ob = pool[b].obj();
            if (oa.error_rate != ob.error_rate) {
                return oa.error_rate < ob.error_rate;
            }
            if (oa.feature_rate != ob.feature_rate) {
                return oa.feature_rate < ob.feature_rate;
            }
            return a < b;
        });
        return order;
    }
} // namespace

auto update_elite(std::span<const Individual> pool_in, std::size_t capacity, NormDirection direction, Rng& rng)
    -> EliteArchive
{
    require(capacity >= 1, "elite archive capacity must be positive");
    EliteArchive archive;
    archive.capacity = capacity;
    auto pool = dedup_by_selection(pool_in);
    if (pool.empty()) {
        return archive;
    }
    const auto n = pool.size();
    std::vector<ObjectivePair> primary(n), accuracy(n);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < n; ++i) {
        require(pool[i].evaluated(), "elite update needs evaluated individuals");
        const auto& o = pool[i].obj();
        primary[i] = {o.error_rate, o.feature_rate};
        accuracy[i] = {o.error_rate, o.assistant_error};
        lo = std::min(lo, o.error_rate);
        hi = std::max(hi, o.error_rate);
    }
    auto front1 = nd_sort(primary);
    auto front2 = nd_sort(accuracy);

    std::vector<char> next(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (front1.front_of[i] != 0) {
            continue;
        }
        double p = 1.0;
        if (hi > lo) {
            auto normalized = (pool[i].obj().error_rate - lo) / (hi - lo);
            p = direction == NormDirection::inverted ? 1.0 - normalized : normalized;
        }
        if (rng.uniform() < p) {
            next[i] = 1;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (front2.front_of[i] == 0) {
            next[i] = 1;
        }
    }
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t {0});
    next[accuracy_order(pool, all).front()] = 1;

    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < n; ++i) {
        if (next[i]) {
            chosen.push_back(i);
        }
    }
    if (chosen.size() > capacity) {
        chosen = accuracy_order(pool, chosen);
        chosen.resize(capacity);
        std::sort(chosen.begin(), chosen.end());
    }
    archive.members.reserve(chosen.size());
    for (auto i : chosen) {
        archive.members.push_back(std::move(pool[i]));
    }
    return archive;
}

auto environmental_selection(std::vector<Individual> combined, CompareMode mode, std::size_t n)
    -> std::vector<Individual>
{
    if (combined.size() <= n) {
        return combined;
    }
    const auto size = combined.size();
    std::vector<ObjectivePair> pairs(size);
    for (std::size_t i = 0; i < size; ++i) {
        require(combined[i].evaluated(), "environmental selection needs evaluated individuals");
        pairs[i] = sort_pair(combined[i].obj(), mode);
    }
    auto fronts = nd_sort(pairs);
    std::vector<std::vector<std::size_t>> by_front(fronts.n_fronts);
    for (std::size_t i = 0; i < size; ++i) {
        by_front[fronts.front_of[i]].push_back(i);
    }

    std::vector<char> keep(size, 0);
    std::size_t kept = 0;
    for (const auto& front : by_front) {
        if (kept + front.size() <= n) {
            for (auto i : front) {
                keep[i] = 1;
            }
            kept += front.size();
            if (kept == n) {
                break;
            }
            continue;
        }
        std::vector<ObjectivePair> local(front.size());
        for (std::size_t m = 0; m < front.size(); ++m) {
            local[m] = pairs[front[m]];
        }
        auto crowd = crowding_distance(local);
        std::vector<std::size_t> order(front.size());
        std::iota(order.begin(), order.end(), std::size_t {0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (crowd[a] != crowd[b]) {
                return crowd[a] > crowd[b];
            }
            if (local[a][0] != local[b][0]) {
                return local[a][0] < local[b][0];
            }
            return a < b;
        });
        for (std::size_t m = 0; kept < n; ++m) {
            keep[front[order[m]]] = 1;
            ++kept;
        }
        break;
    }
    std::vector<Individual> out;
    out.reserve(n);
    for (std::size_t i = 0; i < size; ++i) {
        if (keep[i]) {
            out.push_back(std::move(combined[i]));
        }
    }
    return out;
}

auto first_front(std::span<const Individual> pool) -> std::vector<Individual>
{
    std::vector<ObjectivePair> pairs(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        pairs[i] = {pool[i].obj().error_rate, pool[i].obj().feature_rate};
    }
    auto fronts = nd_sort(pairs);
    std::vector<Individual> out;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (fronts.front_of[i] == 0) {
            out.push_back(pool[i]);
        }
    }
    return out;
}

} // namespace mofs
