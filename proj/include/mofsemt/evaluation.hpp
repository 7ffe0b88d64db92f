// SPDX-License-Identifier: Apache-2.0
#ifndef MOFSEMT_EVALUATION_HPP
#define MOFSEMT_EVALUATION_HPP

#include "mofsemt/dataset.hpp"
#include "mofsemt/individual.hpp"

#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

namespace mofs {

inline constexpr double default_theta = 0.6;
inline constexpr std::size_t default_knn_k = 5;

// Feature i is selected iff v[i] > theta.
auto decode_selection(std::span<const double> v, double theta = default_theta) -> Selection;

// Majority vote over the k nearest training samples; distance ties go to the
// lower training index and vote ties to the smallest class id.
// `distances` holds one distance per candidate in `candidates`.
auto knn_vote(std::span<const double> distances, std::span<const std::size_t> candidates,
    std::span<const int> labels, std::size_t k, std::size_t n_classes) -> int;

// Euclidean KNN restricted to `columns`; effective k = min(k, train size).
auto knn_predict(const Dataset& train, const Dataset& query, std::span<const std::size_t> columns,
    std::size_t k = default_knn_k) -> std::vector<int>;

// 1 - mean per-class recall over classes present in `truth`.
auto balanced_error(std::span<const int> truth, std::span<const int> predicted, std::size_t n_classes) -> double;

// 1 - mean per-class precision over classes present in `truth`; a class that
// is never predicted has precision 0.
auto assistant_error(std::span<const int> truth, std::span<const int> predicted, std::size_t n_classes) -> double;

struct EvaluationSettings {
    std::size_t k = default_knn_k;
    double theta = default_theta;
};

/// Wrapper fitness over a fixed training split and inner fold plan.
///
/// Objectives depend only on the decoded selection, so results are memoised
/// by selection. The memo is shared between threads; concurrent writers
/// always store identical values.
class Evaluator {
public:
    Evaluator(Dataset train, FoldPlan inner, EvaluationSettings settings = {});

    [[nodiscard]] auto evaluate(std::span<const double> full) const -> ObjectiveVector;
    [[nodiscard]] auto evaluate_selection(const Selection& selection) const -> ObjectiveVector;
    // Decodes, scores and stores the selection on the individual.
    void evaluate(Individual& ind) const;

    [[nodiscard]] auto dim() const -> std::size_t { return train_.n_features; }
    [[nodiscard]] auto settings() const -> const EvaluationSettings& { return settings_; }
    [[nodiscard]] auto train() const -> const Dataset& { return train_; }
    [[nodiscard]] auto cache_size() const -> std::size_t;

private:
    auto compute(const Selection& selection) const -> ObjectiveVector;

    Dataset train_;
    FoldPlan inner_;
    EvaluationSettings settings_;
    std::vector<double> columns_; // feature-major copy of train_
    std::vector<std::vector<std::size_t>> fold_train_;
    std::vector<std::vector<std::size_t>> fold_test_;

    mutable std::mutex memo_mutex_;
    mutable std::unordered_map<Selection, ObjectiveVector> memo_;
};

} // namespace mofs

#endif
