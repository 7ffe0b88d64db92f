// SPDX-License-Identifier: Apache-2.0
#include "mofsemt/evaluation.hpp"

#include "mofsemt/error.hpp"

#include <algorithm>
#include <numeric>

namespace mofs {

auto decode_selection(std::span<const double> v, double theta) -> Selection
{
    Selection out(v.size(), false);
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = v[i] > theta;
    }
    return out;
}

auto knn_vote(std::span<const double> distances, std::span<const std::size_t> candidates,
    std::span<const int> labels, std::size_t k, std::size_t n_classes) -> int
{
    require(!candidates.empty(), "KNN needs at least one training sample");
    require(distances.size() == candidates.size(), "KNN distance/candidate size mismatch");
    auto take = std::min(k, candidates.size());
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t {0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
        [&](std::size_t a, std::size_t b) {
            return distances[a] < distances[b] || (distances[a] == distances[b] && candidates[a] < candidates[b]);
        });
    std::vector<std::size_t> votes(n_classes, 0);
    for (std::size_t m = 0; m < take; ++m) {
        ++votes[static_cast<std::size_t>(labels[candidates[order[m]]])];
    }
    // max_element returns the first maximum, i.e. the smallest class id.
    return static_cast<int>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

auto knn_predict(const Dataset& train, const Dataset& query, std::span<const std::size_t> columns, std::size_t k)
    -> std::vector<int>
{
    require(train.n_samples > 0, "KNN needs a non-empty training set");
    require(!columns.empty(), "KNN needs at least one selected feature");
    require(k >= 1, "KNN needs k >= 1");
    require(train.n_features == query.n_features, "KNN train/query dimension mismatch");

    std::vector<std::size_t> candidates(train.n_samples);
    std::iota(candidates.begin(), candidates.end(), std::size_t {0});
    std::vector<double> dist(train.n_samples);
    std::vector<int> out(query.n_samples);
    for (std::size_t q = 0; q < query.n_samples; ++q) {
        auto xq = query.row(q);
        for (std::size_t t = 0; t < train.n_samples; ++t) {
            auto xt = train.row(t);
            double d = 0.0;
            for (auto c : columns) {
                auto diff = xq[c] - xt[c];
                d += diff * diff;
            }
            dist[t] = d;
        }
        out[q] = knn_vote(dist, candidates, train.labels, k, train.n_classes);
    }
    return out;
}

namespace {
    struct Confusion {
        std::vector<std::size_t> truth_count;
        std::vector<std::size_t> predicted_count;
        std::vector<std::size_t> correct;
    };

    auto confusion(std::span<const int> truth, std::span<const int> predicted, std::size_t n_classes) -> Confusion
    {
        require(truth.size() == predicted.size(), "label vectors differ in length");
        Confusion c {std::vector<std::size_t>(n_classes, 0), std::vector<std::size_t>(n_classes, 0),
            std::vector<std::size_t>(n_classes, 0)};
        for (std::size_t i = 0; i < truth.size(); ++i) {
            auto t = truth[i];
            auto p = predicted[i];
            require(t >= 0 && static_cast<std::size_t>(t) < n_classes, "true label out of range");
            require(p >= 0 && static_cast<std::size_t>(p) < n_classes, "predicted label out of range");
            ++c.truth_count[static_cast<std::size_t>(t)];
            ++c.predicted_count[static_cast<std::size_t>(p)];
            if (t == p) {
                ++c.correct[static_cast<std::size_t>(t)];
            }
        }
        return c;
    }
} // namespace

auto balanced_error(std::span<const int> truth, std::span<const int> predicted, std::size_t n_classes) -> double
{
    auto c = confusion(truth, predicted, n_classes);
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t k = 0; k < n_classes; ++k) {
        if (c.truth_count[k] > 0) {
            sum += static_cast<double>(c.correct[k]) / static_cast<double>(c.truth_count[k]);
            ++present;
        }
    }
    if (present == 0) {
        return 1.0;
    }
    return std::clamp(1.0 - sum / static_cast<double>(present), 0.0, 1.0);
}

auto assistant_error(std::span<const int> truth, std::span<const int> predicted, std::size_t n_classes) -> double
{
    auto c = confusion(truth, predicted, n_classes);
    double sum = 0.0;
    std::size_t present = 0;
    for (std::size_t k = 0; k < n_classes; ++k) {
        if (c.truth_count[k] > 0) {
            if (c.predicted_count[k] > 0) {
                sum += static_cast<double>(c.correct[k]) / static_cast<double>(c.predicted_count[k]);
            }
            ++present;
        }
    }
    if (present == 0) {
        return 1.0;
    }
    return std::clamp(1.0 - sum / static_cast<double>(present), 0.0, 1.0);
}

Evaluator::Evaluator(Dataset train, FoldPlan inner, EvaluationSettings settings)
    : train_(std::move(train))
    , inner_(std::move(inner))
    , settings_(settings)
{
    require(train_.n_samples > 0, "evaluator needs training samples");
    require(inner_.fold_of.size() == train_.n_samples, "inner fold plan does not match the training split");
    require(settings_.k >= 1, "KNN needs k >= 1");
    const auto n = train_.n_samples;
    columns_.resize(n * train_.n_features);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t f = 0; f < train_.n_features; ++f) {
            columns_[f * n + i] = train_.at(i, f);
        }
    }
    for (std::size_t fold = 0; fold < inner_.n_folds; ++fold) {
        auto test = inner_.members(fold);
        if (test.empty()) {
            continue;
        }
        fold_test_.push_back(std::move(test));
        fold_train_.push_back(inner_.complement(fold));
    }
    require(!fold_test_.empty(), "inner fold plan has no non-empty fold");
}

auto Evaluator::evaluate(std::span<const double> full) const -> ObjectiveVector
{
    return evaluate_selection(decode_selection(full, settings_.theta));
}

void Evaluator::evaluate(Individual& ind) const
{
    ind.selection = decode_selection(ind.full_repr, settings_.theta);
    ind.objectives = evaluate_selection(ind.selection);
}

auto Evaluator::evaluate_selection(const Selection& selection) const -> ObjectiveVector
{
    require(selection.size() == train_.n_features, "selection length does not match the kept feature count");
    {
        std::lock_guard lock(memo_mutex_);
        if (auto it = memo_.find(selection); it != memo_.end()) {
            return it->second;
        }
    }
    auto value = compute(selection);
    std::lock_guard lock(memo_mutex_);
    memo_.insert_or_assign(selection, value);
    return value;
}

auto Evaluator::cache_size() const -> std::size_t
{
    std::lock_guard lock(memo_mutex_);
    return memo_.size();
}

auto Evaluator::compute(const Selection& selection) const -> ObjectiveVector
{
    std::size_t n_selected = 0;
    for (bool b : selection) {
        n_selected += b ? 1 : 0;
    }
    if (n_selected == 0) {
        return ObjectiveVector::empty_selection();
    }

    // Lower-triangular squared Euclidean distances over the selected columns.
    const auto n = train_.n_samples;
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t f = 0; f < selection.size(); ++f) {
        if (!selection[f]) {
            continue;
        }
        const double* col = columns_.data() + f * n;
        for (std::size_t i = 1; i < n; ++i) {
            double* drow = dist.data() + i * n;
            const double ci = col[i];
            for (std::size_t j = 0; j < i; ++j) {
                double diff = ci - col[j];
                drow[j] += diff * diff;
            }
        }
    }
    auto distance = [&](std::size_t a, std::size_t b) { return a > b ? dist[a * n + b] : dist[b * n + a]; };

    double err_sum = 0.0;
    double assist_sum = 0.0;
    std::vector<double> row;
    for (std::size_t fold = 0; fold < fold_test_.size(); ++fold) {
        const auto& tr = fold_train_[fold];
        const auto& te = fold_test_[fold];
        std::vector<int> truth, predicted;
        truth.reserve(te.size());
        predicted.reserve(te.size());
        row.resize(tr.size());
        for (auto q : te) {
            for (std::size_t m = 0; m < tr.size(); ++m) {
                row[m] = distance(q, tr[m]);
            }
            predicted.push_back(knn_vote(row, tr, train_.labels, settings_.k, train_.n_classes));
            truth.push_back(train_.labels[q]);
        }
        err_sum += balanced_error(truth, predicted, train_.n_classes);
        assist_sum += assistant_error(truth, predicted, train_.n_classes);
    }
    auto folds = static_cast<double>(fold_test_.size());
    ObjectiveVector out;
    out.error_rate = err_sum / folds;
    out.assistant_error = assist_sum / folds;
    out.feature_rate = static_cast<double>(n_selected) / static_cast<double>(selection.size());
    return out;
}

} // namespace mofs
