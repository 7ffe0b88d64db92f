// SPDX-License-Identifier: Apache-2.0
#ifndef MOFSEMT_FILTERING_HPP
#define MOFSEMT_FILTERING_HPP

#include "mofsemt/dataset.hpp"
#include "mofsemt/relevance.hpp"

#include <span>
#include <vector>

namespace mofs {

enum class ScoreMethod { relieff, chi_square };

struct FeatureScores {
    ScoreMethod method = ScoreMethod::relieff;
    std::vector<double> scores;
    std::vector<std::size_t> ranking;
};

struct TaskMask {
    std::vector<bool> selected;
    std::size_t dim = 0;
    ScoreMethod source = ScoreMethod::relieff;

    [[nodiscard]] auto indices() const -> std::vector<std::size_t>;
};

inline constexpr int default_relieff_neighbors = 10;

/**
 * ReliefF weights over every sample of @p data (features expected in [0, 1]).
 *
 * For each sample the k nearest hits and, per other class, the k nearest
 * misses are found by Manhattan distance (ties to the lower sample index).
 * Misses are weighted by P(c) / (1 - P(class of sample)). The number of
 * neighbours is clipped to the smallest class size minus one, but never
 * below one; members of a singleton class contribute only miss terms.
 */
auto relieff_scores(const Dataset& data, int n_neighbors = default_relieff_neighbors) -> FeatureScores;

// Pearson chi-square of a bins x classes table, skipping cells with zero expectation.
auto chi_square_statistic(std::span<const std::size_t> table, std::size_t n_rows, std::size_t n_cols) -> double;

auto chi_square_scores(const Dataset& data, int max_bins = default_max_bins) -> FeatureScores;

// 1-based rank of the knee on a descending score curve. Degenerate curves:
// all-equal values return 0 (caller applies the half fallback); collinear
// curves return 1.
auto knee_rank(std::span<const double> sorted_desc) -> std::size_t;

auto knee_point_mask(const FeatureScores& scores) -> TaskMask;

} // namespace mofs

#endif
