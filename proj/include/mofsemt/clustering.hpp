// SPDX-License-Identifier: Apache-2.0
#ifndef MOFSEMT_CLUSTERING_HPP
#define MOFSEMT_CLUSTERING_HPP

#include "mofsemt/dataset.hpp"
#include "mofsemt/individual.hpp"
#include "mofsemt/relevance.hpp"

#include <span>
#include <vector>

namespace mofs {

struct ClusterMap {
    std::vector<std::size_t> cluster_of;
    std::size_t n_clusters = 0;
    std::vector<std::size_t> centers;

    [[nodiscard]] auto members(std::size_t cluster) const -> std::vector<std::size_t>;
};

inline constexpr double prime_epsilon = 1e-6;
inline constexpr double weight_upper = 2.0;

/**
 * Correlation-driven feature clustering without a preset cluster count.
 *
 * Features are visited by descending SU with the class. An unassigned
 * feature opens a cluster as its centre; every later unassigned feature g
 * joins that centre h when SU(g, h) >= SU(g, C).
 */
auto correlation_cluster(const Dataset& data, int max_bins = default_max_bins) -> ClusterMap;

// Same rule over pre-discretised columns; exposed for tests.
auto correlation_cluster(std::span<const std::vector<int>> columns, std::span<const int> labels) -> ClusterMap;

// u_k = clamp(mean_{i in k} v_i / max(prime_i, eps), 0, 2)
auto wo_reduce(std::span<const double> v, std::span<const double> prime, const ClusterMap& clusters)
    -> std::vector<double>;

// v_i = clamp(u_{cluster(i)} * prime_i, 0, 1)
auto wo_expand(std::span<const double> u, std::span<const double> prime, const ClusterMap& clusters)
    -> std::vector<double>;

// Full representation of the lowest-error elite (ties: fewer selected
// features, then earlier position); exact zeros become prime_epsilon.
auto select_prime(std::span<const Individual> elites) -> std::vector<double>;

} // namespace mofs

#endif
