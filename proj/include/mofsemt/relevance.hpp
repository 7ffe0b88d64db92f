// SPDX-License-Identifier: Apache-2.0
#ifndef MOFSEMT_RELEVANCE_HPP
#define MOFSEMT_RELEVANCE_HPP

#include "mofsemt/dataset.hpp"

#include <span>
#include <vector>

namespace mofs {

inline constexpr int default_max_bins = 10;

struct Discretized {
    std::vector<int> bins;
    // n_bins - 1 upper edges; a value equal to an edge falls in the lower bin.
    std::vector<double> edges;
};

// Equal-frequency binning with edges at empirical quantiles. n_bins >= 2.
auto discretize_equal_frequency(std::span<const double> values, int n_bins) -> Discretized;

// Uses min(max_bins, number of distinct values) bins; constant columns map to bin 0.
auto discretize_column(std::span<const double> values, int max_bins = default_max_bins) -> Discretized;

// Base-2 entropies of integer-coded variables.
auto entropy(std::span<const int> x) -> double;
auto mutual_information(std::span<const int> x, std::span<const int> y) -> double;

/// Symmetric uncertainty 2 I(X;Y) / (H(X) + H(Y)) in [0, 1]. Zero when both
/// variables are constant. Throws on length mismatch.
auto symmetric_uncertainty(std::span<const int> x, std::span<const int> y) -> double;

struct SUScores {
    std::vector<double> su_with_class;
    std::vector<std::vector<double>> bin_edges;
};

struct RelevanceMask {
    std::vector<std::size_t> kept;
    double threshold = 0.0;
    std::size_t original_dim = 0;
};

enum class LogBase { natural, two, ten };

struct RelevanceResult {
    RelevanceMask mask;
    SUScores scores;
};

auto su_with_class(const Dataset& data, int max_bins = default_max_bins) -> SUScores;

// Feature indices sorted by value descending, ties to the lower index.
auto rank_descending(std::span<const double> values) -> std::vector<std::size_t>;

// rho0 = min(lambda * SU_max, SU at rank floor(D / log D)).
auto removal_threshold(std::span<const double> su, double lambda, LogBase base = LogBase::natural) -> double;

// Keeps features with SU(f, C) strictly above the threshold; never fewer than two.
auto remove_irrelevant(const Dataset& data, double lambda = 0.2, int max_bins = default_max_bins,
    LogBase base = LogBase::natural) -> RelevanceResult;

// Keeps everything; used when removal is disabled.
auto keep_all(const Dataset& data, int max_bins = default_max_bins) -> RelevanceResult;

} // namespace mofs

#endif
