// SPDX-License-Identifier: Apache-2.0
#include "mofsemt/relevance.hpp"

#include "mofsemt/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mofs {

auto discretize_equal_frequency(std::span<const double> values, int n_bins) -> Discretized
{
    require(n_bins >= 2, "discretization needs at least two bins");
    Discretized out;
    out.bins.assign(values.size(), 0);
    if (values.empty()) {
        return out;
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    auto n = sorted.size();
    for (int b = 1; b < n_bins; ++b) {
        // Position of the b-th quantile: ceil(b * n / n_bins) - 1.
        auto pos = (static_cast<std::size_t>(b) * n + static_cast<std::size_t>(n_bins) - 1) / static_cast<std::size_t>(n_bins);
        out.edges.push_back(sorted[pos == 0 ? 0 : pos - 1]);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto it = std::lower_bound(out.edges.begin(), out.edges.end(), values[i]);
        out.bins[i] = static_cast<int>(it - out.edges.begin());
    }
    return out;
}

auto discretize_column(std::span<const double> values, int max_bins) -> Discretized
{
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    auto distinct = static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
    auto n_bins = std::min(max_bins, distinct);
    if (n_bins < 2) {
        return {std::vector<int>(values.size(), 0), {}};
    }
    return discretize_equal_frequency(values, n_bins);
}

namespace {
    // Remaps arbitrary integer symbols to 0..k-1.
    auto densify(std::span<const int> x, std::vector<int>& out) -> int
    {
        out.resize(x.size());
        if (x.empty()) {
            return 0;
        }
        auto [lo, hi] = std::minmax_element(x.begin(), x.end());
        if (*lo >= 0 && *hi < 4096) {
            std::vector<int> map(static_cast<std::size_t>(*hi) + 1, -1);
            int next = 0;
            for (auto v : x) {
                auto& slot = map[static_cast<std::size_t>(v)];
                if (slot < 0) {
                    slot = next++;
                }
            }
            for (std::size_t i = 0; i < x.size(); ++i) {
                out[i] = map[static_cast<std::size_t>(x[i])];
            }
            return next;
        }
        std::vector<int> symbols(x.begin(), x.end());
        std::sort(symbols.begin(), symbols.end());
        symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
        for (std::size_t i = 0; i < x.size(); ++i) {
            out[i] = static_cast<int>(std::lower_bound(symbols.begin(), symbols.end(), x[i]) - symbols.begin());
        }
        return static_cast<int>(symbols.size());
    }

    auto entropy_of_counts(std::span<const std::size_t> counts, double n) -> double
    {
        double h = 0.0;
        for (auto c : counts) {
            if (c > 0) {
                auto p = static_cast<double>(c) / n;
                h -= p * std::log2(p);
            }
        }
        return h;
    }

    struct JointEntropies {
        double hx;
        double hy;
        double hxy;
    };

    auto joint_entropies(std::span<const int> x, std::span<const int> y) -> JointEntropies
    {
        if (x.size() != y.size()) {
            fail(ErrorCode::dimension_mismatch, "symmetric uncertainty needs columns of equal length");
        }
        require(!x.empty(), "symmetric uncertainty needs non-empty columns");
        std::vector<int> dx, dy;
        auto kx = static_cast<std::size_t>(densify(x, dx));
        auto ky = static_cast<std::size_t>(densify(y, dy));
        std::vector<std::size_t> cx(kx, 0), cy(ky, 0), cxy(kx * ky, 0);
        for (std::size_t i = 0; i < dx.size(); ++i) {
            auto a = static_cast<std::size_t>(dx[i]);
            auto b = static_cast<std::size_t>(dy[i]);
            ++cx[a];
            ++cy[b];
            ++cxy[a * ky + b];
        }
        auto n = static_cast<double>(x.size());
        return {entropy_of_counts(cx, n), entropy_of_counts(cy, n), entropy_of_counts(cxy, n)};
    }
} // namespace

auto entropy(std::span<const int> x) -> double
{
    return joint_entropies(x, x).hx;
}

auto mutual_information(std::span<const int> x, std::span<const int> y) -> double
{
    auto e = joint_entropies(x, y);
    return std::max(0.0, e.hx + e.hy - e.hxy);
}

auto symmetric_uncertainty(std::span<const int> x, std::span<const int> y) -> double
{
    auto e = joint_entropies(x, y);
    auto denom = e.hx + e.hy;
    if (denom <= 0.0) {
        return 0.0;
    }
    auto mi = std::max(0.0, e.hx + e.hy - e.hxy);
    return std::clamp(2.0 * mi / denom, 0.0, 1.0);
}

auto su_with_class(const Dataset& data, int max_bins) -> SUScores
{
    SUScores out;
    out.su_with_class.resize(data.n_features);
    out.bin_edges.resize(data.n_features);
    for (std::size_t f = 0; f < data.n_features; ++f) {
        auto column = data.column(f);
        auto d = discretize_column(column, max_bins);
        out.su_with_class[f] = symmetric_uncertainty(d.bins, data.labels);
        out.bin_edges[f] = std::move(d.edges);
    }
    return out;
}

auto rank_descending(std::span<const double> values) -> std::vector<std::size_t>
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t {0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return order;
}

auto removal_threshold(std::span<const double> su, double lambda, LogBase base) -> double
{
    require(su.size() >= 2, "relevance threshold needs at least two features");
    auto d = static_cast<double>(su.size());
    double log_d = 0.0;
    switch (base) {
    case LogBase::natural:
        log_d = std::log(d);
        break;
    case LogBase::two:
        log_d = std::log2(d);
        break;
    case LogBase::ten:
        log_d = std::log10(d);
        break;
    }
    auto rank = static_cast<std::size_t>(std::floor(d / log_d));
    rank = std::clamp<std::size_t>(rank, 1, su.size());
    auto order = rank_descending(su);
    auto su_max = su[order.front()];
    auto su_rank = su[order[rank - 1]];
    return std::min(lambda * su_max, su_rank);
}

auto remove_irrelevant(const Dataset& data, double lambda, int max_bins, LogBase base) -> RelevanceResult
{
    require(data.n_features >= 2, "irrelevance removal needs at least two features");
    RelevanceResult out;
    out.scores = su_with_class(data, max_bins);
    const auto& su = out.scores.su_with_class;
    out.mask.original_dim = data.n_features;
    out.mask.threshold = removal_threshold(su, lambda, base);
    for (std::size_t f = 0; f < su.size(); ++f) {
        if (su[f] > out.mask.threshold) {
            out.mask.kept.push_back(f);
        }
    }
    if (out.mask.kept.size() < 2) {
        auto order = rank_descending(su);
        out.mask.kept = {order[0], order[1]};
        std::sort(out.mask.kept.begin(), out.mask.kept.end());
    }
    return out;
}

auto keep_all(const Dataset& data, int max_bins) -> RelevanceResult
{
    RelevanceResult out;
    out.scores = su_with_class(data, max_bins);
    out.mask.original_dim = data.n_features;
    out.mask.threshold = -1.0;
    out.mask.kept.resize(data.n_features);
    std::iota(out.mask.kept.begin(), out.mask.kept.end(), std::size_t {0});
    return out;
}

} // namespace mofs
