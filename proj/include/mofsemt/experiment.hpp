// SPDX-License-Identifier: Apache-2.0
#ifndef MOFSEMT_EXPERIMENT_HPP
#define MOFSEMT_EXPERIMENT_HPP

#include "mofsemt/dataset.hpp"
#include "mofsemt/multitask.hpp"
#include "mofsemt/relevance.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mofs {

enum class ReportFormat { json, csv_summary };

struct RunConfig {
    std::string data_path;
    std::string label_col = "last";
    std::uint64_t seed = 1;
    std::size_t max_iter = 100;
    std::size_t n_tasks = 5;
    double theta = 0.6;
    double rtp = 0.6;
    std::size_t stagnation = 5;
    std::size_t knn_k = 5;
    std::size_t inner_folds = 5;
    std::size_t outer_folds = 10;
    double lambda = 0.2;
    bool removal = true;
    bool use_filtering = true;
    bool use_clustering = true;
    TransferMode transfer = TransferMode::specific;
    FitnessMode fitness = FitnessMode::standard;
    NormDirection norm_direction = NormDirection::inverted;
    LogBase log_base = LogBase::natural;
    bool mutate_parent_literal = false;
    bool per_task_trigger = false;
    bool pool_per_task_uniform = false;
    std::size_t workers = 1;
    std::string output_path;
    ReportFormat format = ReportFormat::json;

    void validate() const;
    [[nodiscard]] auto multitask() const -> MultitaskConfig;

    friend auto operator==(const RunConfig&, const RunConfig&) -> bool = default;
};

struct SolutionRecord {
    // Indices into the original feature set of the dataset.
    std::vector<std::size_t> selected;
    ObjectiveVector train;
    double test_accuracy = 0.0;

    friend auto operator==(const SolutionRecord&, const SolutionRecord&) -> bool = default;
};

struct FoldRecord {
    std::size_t fold = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    std::size_t kept_features = 0;
    double relevance_threshold = 0.0;
    std::vector<std::string> task_labels;
    std::vector<std::size_t> task_dims;
    std::size_t transfer_events = 0;
    std::vector<SolutionRecord> front;
    double mean_acc = 0.0;
    double best_acc = 0.0;
    double mean_features = 0.0;

    friend auto operator==(const FoldRecord&, const FoldRecord&) -> bool = default;
};

struct ReportSummary {
    double mean_acc = 0.0;
    double best_acc = 0.0;
    double mean_features = 0.0;

    friend auto operator==(const ReportSummary&, const ReportSummary&) -> bool = default;
};

struct RunReport {
    RunConfig config;
    std::size_t n_samples = 0;
    std::size_t n_features = 0;
    std::size_t n_classes = 0;
    std::vector<FoldRecord> folds;
    ReportSummary summary;
    double wall_clock_seconds = 0.0;

    friend auto operator==(const RunReport&, const RunReport&) -> bool = default;
};

// Mean over the front per fold, then over folds; best is the per-fold
// maximum averaged over folds.
auto summarize(std::span<const FoldRecord> folds) -> ReportSummary;

auto run_experiment(const RunConfig& config, const Dataset& data) -> RunReport;
// Loads config.data_path first.
auto run_experiment(const RunConfig& config) -> RunReport;

auto report_to_json(const RunReport& report) -> std::string;
auto report_from_json(const std::string& text) -> RunReport;
auto report_to_csv(const RunReport& report) -> std::string;

void emit_report(const RunReport& report, const std::string& path, ReportFormat format);

// Text forms used by the CLI and the JSON echo.
auto to_string(TransferMode mode) -> std::string;
auto to_string(FitnessMode mode) -> std::string;
auto to_string(NormDirection direction) -> std::string;
auto to_string(ReportFormat format) -> std::string;
auto parse_transfer_mode(const std::string& text) -> TransferMode;
auto parse_fitness_mode(const std::string& text) -> FitnessMode;
auto parse_norm_direction(const std::string& text) -> NormDirection;
auto parse_report_format(const std::string& text) -> ReportFormat;
// Comma-separated subset of {filtering, clustering}.
void parse_formulations(const std::string& text, RunConfig& config);

} // namespace mofs

#endif
