// SPDX-License-Identifier: Apache-2.0
#include "mofsemt/filtering.hpp"

#include "mofsemt/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mofs {

auto TaskMask::indices() const -> std::vector<std::size_t>
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (selected[i]) {
            out.push_back(i);
        }
    }
    return out;
}

auto relieff_scores(const Dataset& data, int n_neighbors) -> FeatureScores
{
    require(n_neighbors >= 1, "ReliefF needs at least one neighbour");
    const auto n = data.n_samples;
    const auto dim = data.n_features;

    FeatureScores out;
    out.method = ScoreMethod::relieff;
    out.scores.assign(dim, 0.0);
    if (n == 0) {
        out.ranking = rank_descending(out.scores);
        return out;
    }

    auto counts = data.class_counts();
    std::size_t smallest = n;
    for (auto c : counts) {
        if (c > 0) {
            smallest = std::min(smallest, c);
        }
    }
    auto k = std::min<std::size_t>(static_cast<std::size_t>(n_neighbors), smallest > 1 ? smallest - 1 : 1);
    k = std::max<std::size_t>(k, 1);

    std::vector<double> prior(data.n_classes, 0.0);
    for (std::size_t c = 0; c < data.n_classes; ++c) {
        prior[c] = static_cast<double>(counts[c]) / static_cast<double>(n);
    }

    std::vector<std::vector<std::size_t>> by_class(data.n_classes);
    for (std::size_t i = 0; i < n; ++i) {
        by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);
    }

    const auto norm = static_cast<double>(n) * static_cast<double>(k);
    std::vector<double> dist(n, 0.0);
    std::vector<double> delta(dim, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        auto xi = data.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            auto xj = data.row(j);
            double d = 0.0;
            for (std::size_t f = 0; f < dim; ++f) {
                d += std::abs(xi[f] - xj[f]);
            }
            dist[j] = d;
        }
        auto closer = [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); };

        std::fill(delta.begin(), delta.end(), 0.0);
        auto own = static_cast<std::size_t>(data.labels[i]);
        for (std::size_t c = 0; c < data.n_classes; ++c) {
            std::vector<std::size_t> pool;
            pool.reserve(by_class[c].size());
            for (auto j : by_class[c]) {
                if (j != i) {
                    pool.push_back(j);
                }
            }
            auto take = std::min(k, pool.size());
            if (take == 0) {
                continue;
            }
            std::partial_sort(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end(), closer);
            double weight = -1.0;
            if (c != own) {
                weight = prior[c] / (1.0 - prior[own]);
            }
            for (std::size_t m = 0; m < take; ++m) {
                auto xj = data.row(pool[m]);
                for (std::size_t f = 0; f < dim; ++f) {
                    delta[f] += weight * std::abs(xi[f] - xj[f]);
                }
            }
        }
        for (std::size_t f = 0; f < dim; ++f) {
            out.scores[f] += delta[f] / norm;
        }
    }
    out.ranking = rank_descending(out.scores);
    return out;
}

auto chi_square_statistic(std::span<const std::size_t> table, std::size_t n_rows, std::size_t n_cols) -> double
{
    require(table.size() == n_rows * n_cols, "contingency table shape mismatch");
    std::vector<double> row_sum(n_rows, 0.0), col_sum(n_cols, 0.0);
    double total = 0.0;
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            auto v = static_cast<double>(table[r * n_cols + c]);
            row_sum[r] += v;
            col_sum[c] += v;
            total += v;
        }
    }
    if (total <= 0.0) {
        return 0.0;
    }
    double chi2 = 0.0;
    for (std::size_t r = 0; r < n_rows; ++r) {
        for (std::size_t c = 0; c < n_cols; ++c) {
            auto expected = row_sum[r] * col_sum[c] / total;
            if (expected > 0.0) {
                auto diff = static_cast<double>(table[r * n_cols + c]) - expected;
                chi2 += diff * diff / expected;
            }
        }
    }
    return chi2;
}

auto chi_square_scores(const Dataset& data, int max_bins) -> FeatureScores
{
    FeatureScores out;
    out.method = ScoreMethod::chi_square;
    out.scores.assign(data.n_features, 0.0);
    for (std::size_t f = 0; f < data.n_features; ++f) {
        auto column = data.column(f);
        auto d = discretize_column(column, max_bins);
        std::size_t n_bins = 1;
        for (auto b : d.bins) {
            n_bins = std::max(n_bins, static_cast<std::size_t>(b) + 1);
        }
        std::vector<std::size_t> table(n_bins * data.n_classes, 0);
        for (std::size_t i = 0; i < data.n_samples; ++i) {
            ++table[static_cast<std::size_t>(d.bins[i]) * data.n_classes + static_cast<std::size_t>(data.labels[i])];
        }
        out.scores[f] = chi_square_statistic(table, n_bins, data.n_classes);
    }
    out.ranking = rank_descending(out.scores);
    return out;
}

auto knee_rank(std::span<const double> sorted_desc) -> std::size_t
{
    auto n = sorted_desc.size();
    if (n == 0) {
        return 0;
    }
    auto first = sorted_desc.front();
    auto last = sorted_desc.back();
    if (first == last) {
        return 0;
    }
    if (n <= 2) {
        return 1;
    }
    // Perpendicular distance is |cross| / |line|; the line length is shared
    // by every point so the argmax only needs the cross product.
    auto dx = static_cast<double>(n - 1);
    auto dy = last - first;
    std::size_t best = 1;
    double best_cross = 0.0;
    for (std::size_t r = 2; r < n; ++r) {
        auto cross = std::abs(dx * (sorted_desc[r - 1] - first) - dy * static_cast<double>(r - 1));
        if (cross > best_cross) {
            best_cross = cross;
            best = r;
        }
    }
    // Rounding noise on a collinear profile is not a knee.
    if (best_cross <= 1e-12 * dx * std::abs(dy)) {
        return 1;
    }
    return best;
}

auto knee_point_mask(const FeatureScores& scores) -> TaskMask
{
    auto n = scores.scores.size();
    require(n >= 1, "knee point needs at least one score");
    std::vector<double> sorted(n);
    for (std::size_t r = 0; r < n; ++r) {
        sorted[r] = scores.scores[scores.ranking[r]];
    }
    auto knee = knee_rank(sorted);
    if (knee == 0) {
        knee = (n + 1) / 2;
    }
    TaskMask mask;
    mask.source = scores.method;
    mask.selected.assign(n, false);
    for (std::size_t r = 0; r < knee; ++r) {
        mask.selected[scores.ranking[r]] = true;
    }
    mask.dim = knee;
    return mask;
}

} // namespace mofs
