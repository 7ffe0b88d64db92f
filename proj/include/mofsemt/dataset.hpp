// SPDX-License-Identifier: Apache-2.0
#ifndef MOFSEMT_DATASET_HPP
#define MOFSEMT_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mofs {

/// Labeled tabular data. Features are stored sample-major; labels are dense
/// class ids in [0, n_classes).
struct Dataset {
    std::size_t n_samples = 0;
    std::size_t n_features = 0;
    std::size_t n_classes = 0;
    std::vector<double> features;
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;

    [[nodiscard]] auto at(std::size_t sample, std::size_t feature) const -> double
    {
        return features[sample * n_features + feature];
    }
    [[nodiscard]] auto row(std::size_t sample) const -> std::span<const double>
    {
        return {features.data() + sample * n_features, n_features};
    }
    [[nodiscard]] auto column(std::size_t feature) const -> std::vector<double>;
    [[nodiscard]] auto class_counts() const -> std::vector<std::size_t>;

    // Row/column subsets keep n_classes and the class names of the parent.
    [[nodiscard]] auto select_rows(std::span<const std::size_t> rows) const -> Dataset;
    [[nodiscard]] auto select_columns(std::span<const std::size_t> columns) const -> Dataset;

    /// Checks the ingestion invariants: labels in range, every class present,
    /// finite features, and at least two samples per class on average.
    void validate() const;
};

struct LabelColumn {
    enum class Kind { last, named, index };
    Kind kind = Kind::last;
    std::string name;
    std::size_t index = 0;

    // "last", a non-negative integer, or a header name.
    static auto parse(const std::string& text) -> LabelColumn;
};

auto load_csv(const std::string& path, const LabelColumn& label = {}) -> Dataset;
void write_csv(const Dataset& data, const std::string& path);

enum class FoldKind { outer_test, inner_fitness };

struct FoldPlan {
    std::vector<int> fold_of;
    std::size_t n_folds = 0;
    FoldKind kind = FoldKind::outer_test;

    [[nodiscard]] auto members(std::size_t fold) const -> std::vector<std::size_t>;
    [[nodiscard]] auto complement(std::size_t fold) const -> std::vector<std::size_t>;
};

// Stratified k-fold assignment. Each class is shuffled and dealt round-robin,
// continuing from the fold where the previous class stopped, so per-fold
// class counts never differ from the proportional share by more than one.
auto stratified_folds(const Dataset& data, std::size_t k, std::uint64_t seed,
    FoldKind kind = FoldKind::outer_test) -> FoldPlan;

struct MinMaxScaler {
    std::vector<double> min;
    std::vector<double> max;

    static constexpr double clamp_low = -0.5;
    static constexpr double clamp_high = 1.5;

    static auto fit(const Dataset& train) -> MinMaxScaler;
    // clamp=false for the data the scaler was fitted on.
    [[nodiscard]] auto apply(const Dataset& data, bool clamp) const -> Dataset;
};

struct ScaledSplit {
    Dataset train;
    std::vector<Dataset> others;
    MinMaxScaler scaler;
};

auto minmax_scale_fit_apply(const Dataset& train, std::span<const Dataset> others) -> ScaledSplit;

struct SyntheticSpec {
    std::size_t n_samples = 200;
    std::size_t n_features = 1000;
    std::size_t n_informative = 10;
    std::size_t n_classes = 3;
    double class_shift = 2.0;
};

struct SyntheticDataset {
    Dataset data;
    std::vector<std::size_t> informative;
};

// Planted-feature benchmark. Informative features are N(class * shift, 1);
// the rest are N(0, 1) noise.
auto generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) -> SyntheticDataset;

} // namespace mofs

#endif
