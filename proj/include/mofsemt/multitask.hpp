// SPDX-License-Identifier: Apache-2.0
#ifndef MOFSEMT_MULTITASK_HPP
#define MOFSEMT_MULTITASK_HPP

#include "mofsemt/clustering.hpp"
#include "mofsemt/evaluation.hpp"
#include "mofsemt/filtering.hpp"
#include "mofsemt/search.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mofs {

enum class TaskForm { original, filtering, clustering };

enum class TransferMode {
    specific,  // mask / weight / reference-solution transfer
    sbx_style, // simulated binary crossover on full representations
    off,
};

enum class FitnessMode {
    standard, // original task: error + feature rate; auxiliary tasks: accuracy objectives
    fit1,  // error + feature rate on every task
    fit2,  // error only on every task
};

struct MultitaskConfig {
    std::size_t max_iter = 100;
    std::size_t n_tasks = 5;
    double theta = default_theta;
    double rtp = 0.6;
    std::size_t stagnation = 5;
    bool use_filtering = true;
    bool use_clustering = true;
    TransferMode transfer = TransferMode::specific;
    FitnessMode fitness = FitnessMode::standard;
    NormDirection norm_direction = NormDirection::inverted;
    double phi = default_phi;
    double eta = default_eta;
    double sbx_eta = 20.0;
    // Mutate P1 itself after a transfer, discarding the transferred solution.
    bool mutate_parent_literal = false;
    // Only stagnant tasks receive transfer instead of all tasks.
    bool per_task_trigger = false;
    // Pick the donor task uniformly before the donor elite.
    bool pool_per_task_uniform = false;
    int relieff_neighbors = default_relieff_neighbors;
    int cluster_bins_fine = 10;
    int cluster_bins_coarse = 5;
    // 0 derives the size from the raw feature count.
    std::size_t pop_size = 0;
    std::size_t workers = 1;
};

// min(200, max(20, round(raw_dim / 30)))
auto population_size(std::size_t raw_dim) -> std::size_t;

struct Task {
    std::size_t id = 0;
    TaskForm form = TaskForm::original;
    std::string label;
    std::size_t dim = 0;
    Bounds bounds;
    CompareMode mode = CompareMode::original;
    std::size_t pop_size = 0;
    std::vector<Individual> pop;
    EliteArchive elite;
    std::optional<TaskMask> mask;
    std::optional<ClusterMap> clusters;
    std::vector<double> prime;
};

// Full-dimensional solution of an individual under its task's encoding.
auto reconstruct_full(const Individual& ind, const Task& task) -> std::vector<double>;

// Task-space vector for a full-dimensional solution (projection onto a
// filtering mask, or weight reduction against the task's reference solution).
auto to_task_space(std::span<const double> full, const Task& task) -> std::vector<double>;

// Receiver-space solution built from parent P1 and a donor elite of `source`:
// a filtering donor masks P1, a clustering donor rescales P1 by its weights,
// and an original-task donor is projected directly.
auto transfer_repr(const Individual& parent, const Individual& donor, const Task& source, const Task& receiver,
    double theta) -> std::vector<double>;

/**
 * Builds the original task plus up to n_tasks - 1 auxiliary tasks
 * (ReliefF and chi-square masks, fine and coarse correlation clusters),
 * initialises and evaluates every population and seeds the elites.
 */
auto build_tasks(const Evaluator& evaluator, const MultitaskConfig& config, std::size_t raw_dim,
    std::uint64_t seed) -> std::vector<Task>;

struct TransferEvent {
    std::size_t generation = 0;
    std::vector<std::size_t> receivers;
    std::size_t transferred = 0;
};

/// Runs one task-specific knowledge transfer. Every receiving task reads the
/// elites as they were when the call started.
void knowledge_transfer(std::vector<Task>& tasks, std::span<const std::size_t> receivers,
    const Evaluator& evaluator, const MultitaskConfig& config, std::uint64_t seed, TransferEvent* event = nullptr);

struct RunResult {
    std::vector<Individual> front;
    std::vector<Task> tasks;
    std::vector<TransferEvent> transfers;
    // (error, feature rate) of every elite after each generation, task by task.
    std::vector<std::vector<ObjectivePair>> trajectory;
};

// Called after every generation, once any transfer has been applied.
using GenerationHook = std::function<void(std::size_t generation, std::span<const Task> tasks)>;

auto run_multitask(const Evaluator& evaluator, const MultitaskConfig& config, std::size_t raw_dim,
    std::uint64_t seed, const GenerationHook& hook = {}) -> RunResult;

// Deduplicated union of all elites reduced to its (error, feature rate) front.
auto final_front(std::span<const Task> tasks) -> std::vector<Individual>;

} // namespace mofs

#endif
