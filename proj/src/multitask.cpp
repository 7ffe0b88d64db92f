// SPDX-License-Identifier: Apache-2.0
#include "mofsemt/multitask.hpp"

#include "mofsemt/error.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace mofs {

namespace {
    // Stream tags for derive_seed.
    enum : std::uint64_t { tag_init = 1, tag_step = 2, tag_elite = 3, tag_transfer = 4 };

    auto mode_for(TaskForm form, FitnessMode fitness) -> CompareMode
    {
        switch (fitness) {
        case FitnessMode::standard:
            return form == TaskForm::original ? CompareMode::original : CompareMode::auxiliary;
        case FitnessMode::fit1:
            return CompareMode::original;
        case FitnessMode::fit2:
            return CompareMode::error_only;
        }
        return CompareMode::original;
    }

    void refresh(Individual& ind, const Task& task, const Evaluator& evaluator)
    {
        ind.full_repr = reconstruct_full(ind, task);
        evaluator.evaluate(ind);
    }

    auto random_individual(const Task& task, Rng& rng) -> Individual
    {
        Individual ind;
        ind.task_id = task.id;
        ind.task_repr.resize(task.dim);
        for (auto& x : ind.task_repr) {
            x = rng.uniform(task.bounds.lower, task.bounds.upper);
        }
        ind.velocity.assign(task.dim, 0.0);
        return ind;
    }

    void initialise(Task& task, const Evaluator& evaluator, const MultitaskConfig& config, std::uint64_t seed)
    {
        Rng rng(derive_seed(seed, {tag_init, task.id}));
        task.pop.clear();
        for (std::size_t n = 0; n < task.pop_size; ++n) {
            auto ind = random_individual(task, rng);
            refresh(ind, task, evaluator);
            task.pop.push_back(std::move(ind));
        }
        Rng elite_rng(derive_seed(seed, {tag_elite, task.id, 0}));
        task.elite = update_elite(task.pop, task.pop_size, config.norm_direction, elite_rng);
    }

    auto collect_elites(std::span<const Task> tasks) -> std::vector<Individual>
    {
        std::vector<Individual> all;
        for (const auto& t : tasks) {
            all.insert(all.end(), t.elite.members.begin(), t.elite.members.end());
        }
        return all;
    }

    // Single child of simulated binary crossover on [0, 1].
    auto sbx_child(std::span<const double> a, std::span<const double> b, double eta, Rng& rng) -> std::vector<double>
    {
        std::vector<double> child(a.begin(), a.end());
        for (std::size_t j = 0; j < child.size(); ++j) {
            auto u = rng.uniform();
            auto beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                                 : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
            auto first = rng.uniform() < 0.5;
            auto c = first ? 0.5 * ((1.0 + beta) * a[j] + (1.0 - beta) * b[j])
                           : 0.5 * ((1.0 - beta) * a[j] + (1.0 + beta) * b[j]);
            child[j] = std::clamp(c, 0.0, 1.0);
        }
        return child;
    }

    struct ElitesSignature {
        double best_error = 1.0;
        std::vector<Selection> members;

        friend auto operator==(const ElitesSignature&, const ElitesSignature&) -> bool = default;
    };

    auto signature(const Task& task) -> ElitesSignature
    {
        ElitesSignature s;
        s.best_error = 1.0;
        for (const auto& m : task.elite.members) {
            s.best_error = std::min(s.best_error, m.obj().error_rate);
            s.members.push_back(m.selection);
        }
        std::sort(s.members.begin(), s.members.end());
        return s;
    }

    void generation_step(Task& task, const Evaluator& evaluator, const MultitaskConfig& config, std::uint64_t seed,
        std::size_t gen)
    {
        auto step_seed = derive_seed(seed, {tag_step, task.id, gen});
        for (auto& ind : task.pop) {
            if (!ind.evaluated()) {
                refresh(ind, task, evaluator);
            }
        }
        auto previous = task.pop;
        if (task.pop.size() >= 2) {
            auto losers = cso_step(task.pop, task.mode, config.phi, task.bounds, step_seed);
            for (auto l : losers) {
                refresh(task.pop[l], task, evaluator);
                previous.push_back(task.pop[l]);
            }
        }
        task.pop = environmental_selection(std::move(previous), task.mode, task.pop_size);

        std::vector<Individual> pool = task.elite.members;
        pool.insert(pool.end(), task.pop.begin(), task.pop.end());
        Rng elite_rng(derive_seed(seed, {tag_elite, task.id, gen}));
        task.elite = update_elite(pool, task.pop_size, config.norm_direction, elite_rng);
    }

    auto trajectory_point(std::span<const Task> tasks) -> std::vector<ObjectivePair>
    {
        std::vector<ObjectivePair> out;
        for (const auto& t : tasks) {
            for (const auto& m : t.elite.members) {
                out.push_back({m.obj().error_rate, m.obj().feature_rate});
            }
        }
        return out;
    }
} // namespace

auto population_size(std::size_t raw_dim) -> std::size_t
{
    auto n = static_cast<std::size_t>(std::llround(static_cast<double>(raw_dim) / 30.0));
    return std::min<std::size_t>(200, std::max<std::size_t>(20, n));
}

auto reconstruct_full(const Individual& ind, const Task& task) -> std::vector<double>
{
    if (ind.task_repr.size() != task.dim) {
        fail(ErrorCode::dimension_mismatch, "individual does not match the dimension of task " + task.label);
    }
    switch (task.form) {
    case TaskForm::original:
        return ind.task_repr;
    case TaskForm::filtering: {
        std::vector<double> full(task.mask->selected.size(), 0.0);
        std::size_t j = 0;
        for (std::size_t i = 0; i < full.size(); ++i) {
            if (task.mask->selected[i]) {
                full[i] = ind.task_repr[j++];
            }
        }
        return full;
    }
    case TaskForm::clustering:
        return wo_expand(ind.task_repr, task.prime, *task.clusters);
    }
    return ind.task_repr;
}

auto to_task_space(std::span<const double> full, const Task& task) -> std::vector<double>
{
    switch (task.form) {
    case TaskForm::original:
        return {full.begin(), full.end()};
    case TaskForm::filtering: {
        if (full.size() != task.mask->selected.size()) {
            fail(ErrorCode::dimension_mismatch, "full solution does not match the filtering mask");
        }
        std::vector<double> out;
        out.reserve(task.dim);
        for (std::size_t i = 0; i < full.size(); ++i) {
            if (task.mask->selected[i]) {
                out.push_back(full[i]);
            }
        }
        return out;
    }
    case TaskForm::clustering:
        return wo_reduce(full, task.prime, *task.clusters);
    }
    return {full.begin(), full.end()};
}

auto transfer_repr(const Individual& parent, const Individual& donor, const Task& source, const Task& receiver,
    double theta) -> std::vector<double>
{
    switch (source.form) {
    case TaskForm::filtering: {
        std::vector<double> full(parent.full_repr.size(), 0.0);
        for (std::size_t i = 0; i < full.size(); ++i) {
            if (donor.full_repr[i] > theta) {
                full[i] = parent.full_repr[i];
            }
        }
        return to_task_space(full, receiver);
    }
    case TaskForm::clustering:
        return to_task_space(wo_expand(donor.task_repr, parent.full_repr, *source.clusters), receiver);
    case TaskForm::original:
        break;
    }
    return to_task_space(donor.full_repr, receiver);
}

auto build_tasks(const Evaluator& evaluator, const MultitaskConfig& config, std::size_t raw_dim, std::uint64_t seed)
    -> std::vector<Task>
{
    require(config.n_tasks >= 1 && config.n_tasks <= 5, "task count must be between 1 and 5");
    const auto& train = evaluator.train();
    const auto dim = train.n_features;
    require(dim >= 1, "no features left to optimise");
    auto pop_size = config.pop_size > 0 ? config.pop_size : population_size(raw_dim);

    enum class Aux { relieff, chi_square, cluster_fine, cluster_coarse };
    // Alternating preference so that small task counts still mix both kinds.
    std::vector<Aux> wanted;
    for (auto a : {Aux::relieff, Aux::cluster_fine, Aux::chi_square, Aux::cluster_coarse}) {
        bool filtering = a == Aux::relieff || a == Aux::chi_square;
        if ((filtering && config.use_filtering) || (!filtering && config.use_clustering)) {
            wanted.push_back(a);
        }
    }
    if (wanted.size() > config.n_tasks - 1) {
        wanted.resize(config.n_tasks - 1);
    }
    std::sort(wanted.begin(), wanted.end());

    std::vector<Task> tasks;
    auto add_task = [&](TaskForm form, std::string label, std::size_t task_dim) -> Task& {
        Task t;
        t.id = tasks.size();
        t.form = form;
        t.label = std::move(label);
        t.dim = task_dim;
        t.bounds = form == TaskForm::clustering ? Bounds {0.0, weight_upper} : Bounds {0.0, 1.0};
        t.mode = mode_for(form, config.fitness);
        t.pop_size = pop_size;
        tasks.push_back(std::move(t));
        return tasks.back();
    };

    add_task(TaskForm::original, "original", dim);
    for (auto a : wanted) {
        switch (a) {
        case Aux::relieff: {
            auto mask = knee_point_mask(relieff_scores(train, config.relieff_neighbors));
            auto& t = add_task(TaskForm::filtering, "filtering-relieff", mask.dim);
            t.mask = std::move(mask);
            break;
        }
        case Aux::chi_square: {
            auto mask = knee_point_mask(chi_square_scores(train));
            auto& t = add_task(TaskForm::filtering, "filtering-chi-square", mask.dim);
            t.mask = std::move(mask);
            break;
        }
        case Aux::cluster_fine:
        case Aux::cluster_coarse: {
            auto bins = a == Aux::cluster_fine ? config.cluster_bins_fine : config.cluster_bins_coarse;
            auto clusters = correlation_cluster(train, bins);
            auto& t = add_task(TaskForm::clustering, "clustering-" + std::to_string(bins) + "-bins", clusters.n_clusters);
            t.clusters = std::move(clusters);
            break;
        }
        }
    }

    // Clustering tasks need a reference solution, taken from the elites of
    // the tasks that do not.
    for (auto& t : tasks) {
        if (t.form != TaskForm::clustering) {
            initialise(t, evaluator, config, seed);
        }
    }
    auto elites = collect_elites(tasks);
    for (auto& t : tasks) {
        if (t.form == TaskForm::clustering) {
            t.prime = select_prime(elites);
            initialise(t, evaluator, config, seed);
        }
    }
    return tasks;
}

void knowledge_transfer(std::vector<Task>& tasks, std::span<const std::size_t> receivers,
    const Evaluator& evaluator, const MultitaskConfig& config, std::uint64_t seed, TransferEvent* event)
{
    if (tasks.size() < 2 || config.transfer == TransferMode::off) {
        return;
    }
    // Snapshot of every elite archive; masks and cluster maps never change.
    std::vector<std::vector<Individual>> snapshot(tasks.size());
    for (std::size_t j = 0; j < tasks.size(); ++j) {
        snapshot[j] = tasks[j].elite.members;
    }
    std::vector<Individual> everything;
    for (const auto& s : snapshot) {
        everything.insert(everything.end(), s.begin(), s.end());
    }
    const auto theta = evaluator.settings().theta;
    std::vector<std::size_t> transferred(receivers.size(), 0);

    detail::parallel_for(receivers.size(), config.workers, [&](std::size_t r) {
        auto& task = tasks[receivers[r]];
        Rng rng(derive_seed(seed, {tag_transfer, task.id}));
        if (task.form == TaskForm::clustering) {
            task.prime = select_prime(everything);
            for (auto& ind : task.pop) {
                refresh(ind, task, evaluator);
            }
        }

        // Donor pool: elites of every other task, remembering where each came from.
        std::vector<std::pair<std::size_t, std::size_t>> pool;
        std::vector<std::size_t> donor_tasks;
        for (std::size_t j = 0; j < tasks.size(); ++j) {
            if (j == task.id || snapshot[j].empty()) {
                continue;
            }
            donor_tasks.push_back(j);
            for (std::size_t m = 0; m < snapshot[j].size(); ++m) {
                pool.emplace_back(j, m);
            }
        }
        if (pool.empty()) {
            fail(ErrorCode::empty_elites, "no donor elites available for task " + task.label);
        }

        auto p_m = task.dim > 0 ? 1.0 / static_cast<double>(task.dim) : 1.0;
        std::vector<Individual> offspring;
        offspring.reserve(task.pop.size());
        for (const auto& parent : task.pop) {
            std::vector<double> repr = parent.task_repr;
            if (rng.uniform() < config.rtp) {
                std::size_t donor_task, donor_index;
                if (config.pool_per_task_uniform) {
                    donor_task = donor_tasks[rng.index(donor_tasks.size())];
                    donor_index = rng.index(snapshot[donor_task].size());
                } else {
                    std::tie(donor_task, donor_index) = pool[rng.index(pool.size())];
                }
                const auto& donor = snapshot[donor_task][donor_index];
                const auto& source = tasks[donor_task];
                auto moved = config.transfer == TransferMode::sbx_style
                    ? to_task_space(sbx_child(parent.full_repr, donor.full_repr, config.sbx_eta, rng), task)
                    : transfer_repr(parent, donor, source, task, theta);
                if (!config.mutate_parent_literal) {
                    repr = std::move(moved);
                }
                ++transferred[r];
            }
            Individual child;
            child.task_id = task.id;
            child.task_repr = polynomial_mutation(repr, config.eta, p_m, task.bounds, rng);
            child.velocity.assign(task.dim, 0.0);
            refresh(child, task, evaluator);
            offspring.push_back(std::move(child));
        }

        auto combined = std::move(task.pop);
        combined.insert(combined.end(), std::make_move_iterator(offspring.begin()),
            std::make_move_iterator(offspring.end()));
        task.pop = environmental_selection(std::move(combined), task.mode, task.pop_size);

        std::vector<Individual> elite_pool = task.elite.members;
        elite_pool.insert(elite_pool.end(), task.pop.begin(), task.pop.end());
        task.elite = update_elite(elite_pool, task.pop_size, config.norm_direction, rng);
    });

    if (event != nullptr) {
        event->receivers.assign(receivers.begin(), receivers.end());
        event->transferred = 0;
        for (auto t : transferred) {
            event->transferred += t;
        }
    }
}

auto final_front(std::span<const Task> tasks) -> std::vector<Individual>
{
    auto elites = dedup_by_selection(collect_elites(tasks));
    return first_front(elites);
}

auto run_multitask(const Evaluator& evaluator, const MultitaskConfig& config, std::size_t raw_dim, std::uint64_t seed,
    const GenerationHook& hook) -> RunResult
{
    require(config.rtp >= 0.0 && config.rtp <= 1.0, "transfer probability must lie in [0, 1]");
    require(config.stagnation >= 1, "stagnation window must be at least one generation");
    RunResult result;
    auto tasks = build_tasks(evaluator, config, raw_dim, seed);
    std::vector<std::size_t> stagnant(tasks.size(), 0);

    for (std::size_t gen = 1; gen <= config.max_iter; ++gen) {
        detail::parallel_for(tasks.size(), config.workers, [&](std::size_t i) {
            auto before = signature(tasks[i]);
            generation_step(tasks[i], evaluator, config, seed, gen);
            if (signature(tasks[i]) == before) {
                ++stagnant[i];
            } else {
                stagnant[i] = 0;
            }
        });

        std::vector<std::size_t> receivers;
        bool triggered = false;
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            if (stagnant[i] >= config.stagnation) {
                triggered = true;
                if (config.per_task_trigger) {
                    receivers.push_back(i);
                }
            }
        }
        if (triggered && config.transfer != TransferMode::off && tasks.size() >= 2) {
            if (!config.per_task_trigger) {
                receivers.resize(tasks.size());
                for (std::size_t i = 0; i < tasks.size(); ++i) {
                    receivers[i] = i;
                }
            }
            TransferEvent event;
            event.generation = gen;
            knowledge_transfer(tasks, receivers, evaluator, config, derive_seed(seed, {tag_transfer, gen}), &event);
            result.transfers.push_back(std::move(event));
            for (auto i : receivers) {
                stagnant[i] = 0;
            }
            if (!config.per_task_trigger) {
                std::fill(stagnant.begin(), stagnant.end(), 0);
            }
        }
        result.trajectory.push_back(trajectory_point(tasks));
        if (hook) {
            hook(gen, tasks);
        }
    }

    result.front = final_front(tasks);
    result.tasks = std::move(tasks);
    return result;
}

} // namespace mofs
