// SPDX-License-Identifier: Apache-2.0
#include "mofsemt/clustering.hpp"

#include "mofsemt/error.hpp"

#include <algorithm>
#include <limits>

namespace mofs {

auto ClusterMap::members(std::size_t cluster) const -> std::vector<std::size_t>
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < cluster_of.size(); ++i) {
        if (cluster_of[i] == cluster) {
            out.push_back(i);
        }
    }
    return out;
}

auto correlation_cluster(std::span<const std::vector<int>> columns, std::span<const int> labels) -> ClusterMap
{
    const auto dim = columns.size();
    require(dim >= 1, "clustering needs at least one feature");

    std::vector<double> relevance(dim);
    for (std::size_t f = 0; f < dim; ++f) {
        relevance[f] = symmetric_uncertainty(columns[f], labels);
    }
    auto order = rank_descending(relevance);

    constexpr auto unassigned = std::numeric_limits<std::size_t>::max();
    ClusterMap map;
    map.cluster_of.assign(dim, unassigned);
    for (std::size_t pos = 0; pos < dim; ++pos) {
        auto h = order[pos];
        if (map.cluster_of[h] != unassigned) {
            continue;
        }
        auto id = map.n_clusters++;
        map.centers.push_back(h);
        map.cluster_of[h] = id;
        for (std::size_t later = pos + 1; later < dim; ++later) {
            auto g = order[later];
            if (map.cluster_of[g] != unassigned) {
                continue;
            }
            if (symmetric_uncertainty(columns[g], columns[h]) >= relevance[g]) {
                map.cluster_of[g] = id;
            }
        }
    }
    return map;
}

auto correlation_cluster(const Dataset& data, int max_bins) -> ClusterMap
{
    std::vector<std::vector<int>> columns(data.n_features);
    for (std::size_t f = 0; f < data.n_features; ++f) {
        auto column = data.column(f);
        columns[f] = discretize_column(column, max_bins).bins;
    }
    return correlation_cluster(columns, data.labels);
}

auto wo_reduce(std::span<const double> v, std::span<const double> prime, const ClusterMap& clusters)
    -> std::vector<double>
{
    if (v.size() != clusters.cluster_of.size() || prime.size() != v.size()) {
        fail(ErrorCode::dimension_mismatch, "weight reduction dimension mismatch");
    }
    std::vector<double> sum(clusters.n_clusters, 0.0);
    std::vector<std::size_t> count(clusters.n_clusters, 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto k = clusters.cluster_of[i];
        sum[k] += v[i] / std::max(prime[i], prime_epsilon);
        ++count[k];
    }
    std::vector<double> u(clusters.n_clusters, 0.0);
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (count[k] > 0) {
            u[k] = std::clamp(sum[k] / static_cast<double>(count[k]), 0.0, weight_upper);
        }
    }
    return u;
}

auto wo_expand(std::span<const double> u, std::span<const double> prime, const ClusterMap& clusters)
    -> std::vector<double>
{
    if (u.size() != clusters.n_clusters || prime.size() != clusters.cluster_of.size()) {
        fail(ErrorCode::dimension_mismatch, "weight expansion dimension mismatch");
    }
    std::vector<double> v(prime.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::clamp(u[clusters.cluster_of[i]] * prime[i], 0.0, 1.0);
    }
    return v;
}

auto select_prime(std::span<const Individual> elites) -> std::vector<double>
{
    const Individual* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& ind : elites) {
        if (!ind.evaluated()) {
            continue;
        }
        auto count = ind.n_selected();
        if (best == nullptr || ind.obj().error_rate < best->obj().error_rate
            || (ind.obj().error_rate == best->obj().error_rate && count < best_count)) {
            best = &ind;
            best_count = count;
        }
    }
    if (best == nullptr) {
        fail(ErrorCode::empty_elites, "no evaluated elite to select a reference solution from");
    }
    auto prime = best->full_repr;
    for (auto& x : prime) {
        if (x == 0.0) {
            x = prime_epsilon;
        }
    }
    return prime;
}

} // namespace mofs
