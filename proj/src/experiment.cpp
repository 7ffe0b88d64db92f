// SPDX-License-Identifier: Apache-2.0
#include "mofsemt/experiment.hpp"

#include "mofsemt/error.hpp"
#include "parallel.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mofs {

using nlohmann::json;

auto to_string(TransferMode mode) -> std::string
{
    switch (mode) {
    case TransferMode::specific:
        return "specific";
    case TransferMode::sbx_style:
        return "sbx-style";
    case TransferMode::off:
        return "off";
    }
    return "specific";
}

auto to_string(FitnessMode mode) -> std::string
{
    switch (mode) {
    case FitnessMode::standard:
        return "standard";
    case FitnessMode::fit1:
        return "fit1";
    case FitnessMode::fit2:
        return "fit2";
    }
    return "standard";
}

auto to_string(NormDirection direction) -> std::string
{
    return direction == NormDirection::inverted ? "inverted" : "literal";
}

auto to_string(ReportFormat format) -> std::string
{
    return format == ReportFormat::json ? "json" : "csv";
}

namespace {
    auto to_string(LogBase base) -> std::string
    {
        switch (base) {
        case LogBase::natural:
            return "natural";
        case LogBase::two:
            return "two";
        case LogBase::ten:
            return "ten";
        }
        return "natural";
    }

    auto parse_log_base(const std::string& text) -> LogBase
    {
        if (text == "natural") {
            return LogBase::natural;
        }
        if (text == "two") {
            return LogBase::two;
        }
        if (text == "ten") {
            return LogBase::ten;
        }
        fail(ErrorCode::invalid_argument, "unknown log base '" + text + "'");
    }
} // namespace

auto parse_transfer_mode(const std::string& text) -> TransferMode
{
    if (text == "specific") {
        return TransferMode::specific;
    }
    if (text == "sbx-style" || text == "sbx") {
        return TransferMode::sbx_style;
    }
    if (text == "off") {
        return TransferMode::off;
    }
    fail(ErrorCode::invalid_argument, "unknown transfer mode '" + text + "' (expected specific, sbx-style or off)");
}

auto parse_fitness_mode(const std::string& text) -> FitnessMode
{
    if (text == "standard") {
        return FitnessMode::standard;
    }
    if (text == "fit1") {
        return FitnessMode::fit1;
    }
    if (text == "fit2") {
        return FitnessMode::fit2;
    }
    fail(ErrorCode::invalid_argument, "unknown fitness mode '" + text + "' (expected standard, fit1 or fit2)");
}

auto parse_norm_direction(const std::string& text) -> NormDirection
{
    if (text == "inverted") {
        return NormDirection::inverted;
    }
    if (text == "literal") {
        return NormDirection::literal;
    }
    fail(ErrorCode::invalid_argument, "unknown normalisation direction '" + text + "' (expected inverted or literal)");
}

auto parse_report_format(const std::string& text) -> ReportFormat
{
    if (text == "json") {
        return ReportFormat::json;
    }
    if (text == "csv" || text == "csv-summary") {
        return ReportFormat::csv_summary;
    }
    fail(ErrorCode::invalid_argument, "unknown report format '" + text + "' (expected json or csv)");
}

void parse_formulations(const std::string& text, RunConfig& config)
{
    config.use_filtering = false;
    config.use_clustering = false;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "filtering") {
            config.use_filtering = true;
        } else if (item == "clustering") {
            config.use_clustering = true;
        } else if (item == "none" || item.empty()) {
            continue;
        } else {
            fail(ErrorCode::invalid_argument, "unknown formulation '" + item + "' (expected filtering or clustering)");
        }
    }
}

void RunConfig::validate() const
{
    require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
    require(rtp >= 0.0 && rtp <= 1.0, "rtp must lie in [0, 1]");
    require(lambda >= 0.0 && lambda <= 1.0, "lambda must lie in [0, 1]");
    require(inner_folds >= 2, "inner fold count must be at least 2");
    require(outer_folds >= 2, "outer fold count must be at least 2");
    require(n_tasks >= 1 && n_tasks <= 5, "task count must be between 1 and 5");
    require(stagnation >= 1, "stagnation window must be at least 1");
    require(knn_k >= 1, "knn k must be at least 1");
    require(workers >= 1, "worker count must be at least 1");
}

auto RunConfig::multitask() const -> MultitaskConfig
{
    MultitaskConfig mc;
    mc.max_iter = max_iter;
    mc.n_tasks = n_tasks;
    mc.theta = theta;
    mc.rtp = rtp;
    mc.stagnation = stagnation;
    mc.use_filtering = use_filtering;
    mc.use_clustering = use_clustering;
    mc.transfer = transfer;
    mc.fitness = fitness;
    mc.norm_direction = norm_direction;
    mc.mutate_parent_literal = mutate_parent_literal;
    mc.per_task_trigger = per_task_trigger;
    mc.pool_per_task_uniform = pool_per_task_uniform;
    mc.workers = workers;
    return mc;
}

auto summarize(std::span<const FoldRecord> folds) -> ReportSummary
{
    ReportSummary s;
    if (folds.empty()) {
        return s;
    }
    for (const auto& f : folds) {
        s.mean_acc += f.mean_acc;
        s.best_acc += f.best_acc;
        s.mean_features += f.mean_features;
    }
    auto n = static_cast<double>(folds.size());
    s.mean_acc /= n;
    s.best_acc /= n;
    s.mean_features /= n;
    return s;
}

namespace {
    auto run_fold(const RunConfig& config, const Dataset& data, const FoldPlan& outer, std::size_t fold) -> FoldRecord
    {
        FoldRecord record;
        record.fold = fold;
        auto fold_seed = derive_seed(config.seed, {0x666f6c64, fold});
        auto train_rows = outer.complement(fold);
        auto test_rows = outer.members(fold);
        record.n_train = train_rows.size();
        record.n_test = test_rows.size();
        require(!train_rows.empty() && !test_rows.empty(), "outer fold " + std::to_string(fold) + " is empty");

        auto train = data.select_rows(train_rows);
        auto test = data.select_rows(test_rows);
        std::vector<Dataset> others {std::move(test)};
        auto scaled = minmax_scale_fit_apply(train, others);

        auto relevance = config.removal && scaled.train.n_features >= 2
            ? remove_irrelevant(scaled.train, config.lambda, default_max_bins, config.log_base)
            : keep_all(scaled.train);
        const auto& kept = relevance.mask.kept;
        record.kept_features = kept.size();
        record.relevance_threshold = relevance.mask.threshold;

        auto train_kept = scaled.train.select_columns(kept);
        auto test_kept = scaled.others.front().select_columns(kept);

        auto inner_k = std::min(config.inner_folds, train_kept.n_samples);
        require(inner_k >= 2, "outer fold " + std::to_string(fold) + " leaves too few training samples");
        auto inner = stratified_folds(train_kept, inner_k, derive_seed(fold_seed, {1}), FoldKind::inner_fitness);
        Evaluator evaluator(train_kept, std::move(inner), {config.knn_k, config.theta});

        auto mc = config.multitask();
        auto result = run_multitask(evaluator, mc, data.n_features, derive_seed(fold_seed, {2}));
        record.transfer_events = result.transfers.size();
        for (const auto& t : result.tasks) {
            record.task_labels.push_back(t.label);
            record.task_dims.push_back(t.dim);
        }

        for (const auto& ind : result.front) {
            SolutionRecord s;
            std::vector<std::size_t> columns;
            for (std::size_t j = 0; j < ind.selection.size(); ++j) {
                if (ind.selection[j]) {
                    columns.push_back(j);
                    s.selected.push_back(kept[j]);
                }
            }
            s.train = ind.obj();
            if (columns.empty()) {
                s.test_accuracy = 0.0;
            } else {
                auto predicted = knn_predict(evaluator.train(), test_kept, columns, config.knn_k);
                s.test_accuracy = 1.0 - balanced_error(test_kept.labels, predicted, data.n_classes);
            }
            record.front.push_back(std::move(s));
        }
        if (!record.front.empty()) {
            double acc_sum = 0.0;
            double feat_sum = 0.0;
            record.best_acc = 0.0;
            for (const auto& s : record.front) {
                acc_sum += s.test_accuracy;
                feat_sum += static_cast<double>(s.selected.size());
                record.best_acc = std::max(record.best_acc, s.test_accuracy);
            }
            auto n = static_cast<double>(record.front.size());
            record.mean_acc = acc_sum / n;
            record.mean_features = feat_sum / n;
        }
        return record;
    }
} // namespace

auto run_experiment(const RunConfig& config, const Dataset& data) -> RunReport
{
    config.validate();
    data.validate();
    auto start = std::chrono::steady_clock::now();

    RunReport report;
    report.config = config;
    report.n_samples = data.n_samples;
    report.n_features = data.n_features;
    report.n_classes = data.n_classes;

    auto outer = stratified_folds(data, config.outer_folds, derive_seed(config.seed, {0x6f75746572}));
    report.folds.resize(config.outer_folds);
    detail::parallel_for(config.outer_folds, config.workers, [&](std::size_t fold) {
        try {
            report.folds[fold] = run_fold(config, data, outer, fold);
        } catch (const Error& e) {
            throw Error(e.code(), "outer fold " + std::to_string(fold) + ": " + e.what());
        }
    });
    report.summary = summarize(report.folds);
    report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

auto run_experiment(const RunConfig& config) -> RunReport
{
    require(!config.data_path.empty(), "no dataset path given");
    auto data = load_csv(config.data_path, LabelColumn::parse(config.label_col));
    return run_experiment(config, data);
}

namespace {
    auto config_to_json(const RunConfig& c) -> json
    {
        return json {
            {"data", c.data_path},
            {"label_col", c.label_col},
            {"seed", c.seed},
            {"iters", c.max_iter},
            {"tasks", c.n_tasks},
            {"theta", c.theta},
            {"rtp", c.rtp},
            {"stagnation", c.stagnation},
            {"knn_k", c.knn_k},
            {"inner_folds", c.inner_folds},
            {"outer_folds", c.outer_folds},
            {"lambda", c.lambda},
            {"removal", c.removal},
            {"filtering", c.use_filtering},
            {"clustering", c.use_clustering},
            {"transfer", to_string(c.transfer)},
            {"fitness", to_string(c.fitness)},
            {"norm_dir", to_string(c.norm_direction)},
            {"log_base", to_string(c.log_base)},
            {"mutate_parent_literal", c.mutate_parent_literal},
            {"per_task_trigger", c.per_task_trigger},
            {"pool_per_task_uniform", c.pool_per_task_uniform},
            {"workers", c.workers},
            {"out", c.output_path},
            {"format", to_string(c.format)},
        };
    }

    auto config_from_json(const json& j) -> RunConfig
    {
        RunConfig c;
        c.data_path = j.at("data").get<std::string>();
        c.label_col = j.at("label_col").get<std::string>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.max_iter = j.at("iters").get<std::size_t>();
        c.n_tasks = j.at("tasks").get<std::size_t>();
        c.theta = j.at("theta").get<double>();
        c.rtp = j.at("rtp").get<double>();
        c.stagnation = j.at("stagnation").get<std::size_t>();
        c.knn_k = j.at("knn_k").get<std::size_t>();
        c.inner_folds = j.at("inner_folds").get<std::size_t>();
        c.outer_folds = j.at("outer_folds").get<std::size_t>();
        c.lambda = j.at("lambda").get<double>();
        c.removal = j.at("removal").get<bool>();
        c.use_filtering = j.at("filtering").get<bool>();
        c.use_clustering = j.at("clustering").get<bool>();
        c.transfer = parse_transfer_mode(j.at("transfer").get<std::string>());
        c.fitness = parse_fitness_mode(j.at("fitness").get<std::string>());
        c.norm_direction = parse_norm_direction(j.at("norm_dir").get<std::string>());
        c.log_base = parse_log_base(j.at("log_base").get<std::string>());
        c.mutate_parent_literal = j.at("mutate_parent_literal").get<bool>();
        c.per_task_trigger = j.at("per_task_trigger").get<bool>();
        c.pool_per_task_uniform = j.at("pool_per_task_uniform").get<bool>();
        c.workers = j.at("workers").get<std::size_t>();
        c.output_path = j.at("out").get<std::string>();
        c.format = parse_report_format(j.at("format").get<std::string>());
        return c;
    }

    auto objectives_to_json(const ObjectiveVector& v) -> json
    {
        return json {{"error_rate", v.error_rate}, {"feature_rate", v.feature_rate},
            {"assistant_error", v.assistant_error}};
    }

    auto objectives_from_json(const json& j) -> ObjectiveVector
    {
        return {j.at("error_rate").get<double>(), j.at("feature_rate").get<double>(),
            j.at("assistant_error").get<double>()};
    }
} // namespace

auto report_to_json(const RunReport& report) -> std::string
{
    json folds = json::array();
    for (const auto& f : report.folds) {
        json front = json::array();
        for (const auto& s : f.front) {
            front.push_back({{"selected", s.selected}, {"train", objectives_to_json(s.train)},
                {"test_accuracy", s.test_accuracy}});
        }
        folds.push_back({
            {"fold", f.fold},
            {"n_train", f.n_train},
            {"n_test", f.n_test},
            {"kept_features", f.kept_features},
            {"relevance_threshold", f.relevance_threshold},
            {"task_labels", f.task_labels},
            {"task_dims", f.task_dims},
            {"transfer_events", f.transfer_events},
            {"front", front},
            {"mean_acc", f.mean_acc},
            {"best_acc", f.best_acc},
            {"mean_features", f.mean_features},
        });
    }
    json j {
        {"config", config_to_json(report.config)},
        {"seed", report.config.seed},
        {"dataset", {{"n_samples", report.n_samples}, {"n_features", report.n_features},
                        {"n_classes", report.n_classes}}},
        {"folds", folds},
        {"summary", {{"mean_acc", report.summary.mean_acc}, {"best_acc", report.summary.best_acc},
                        {"mean_features", report.summary.mean_features}}},
        {"wall_clock_seconds", report.wall_clock_seconds},
    };
    return j.dump(2) + "\n";
}

auto report_from_json(const std::string& text) -> RunReport
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        fail(ErrorCode::invalid_argument, std::string("report is not valid JSON: ") + e.what());
    }
    try {
        RunReport r;
        r.config = config_from_json(j.at("config"));
        const auto& ds = j.at("dataset");
        r.n_samples = ds.at("n_samples").get<std::size_t>();
        r.n_features = ds.at("n_features").get<std::size_t>();
        r.n_classes = ds.at("n_classes").get<std::size_t>();
        for (const auto& jf : j.at("folds")) {
            FoldRecord f;
            f.fold = jf.at("fold").get<std::size_t>();
            f.n_train = jf.at("n_train").get<std::size_t>();
            f.n_test = jf.at("n_test").get<std::size_t>();
            f.kept_features = jf.at("kept_features").get<std::size_t>();
            f.relevance_threshold = jf.at("relevance_threshold").get<double>();
            f.task_labels = jf.at("task_labels").get<std::vector<std::string>>();
            f.task_dims = jf.at("task_dims").get<std::vector<std::size_t>>();
            f.transfer_events = jf.at("transfer_events").get<std::size_t>();
            for (const auto& js : jf.at("front")) {
                SolutionRecord s;
                s.selected = js.at("selected").get<std::vector<std::size_t>>();
                s.train = objectives_from_json(js.at("train"));
                s.test_accuracy = js.at("test_accuracy").get<double>();
                f.front.push_back(std::move(s));
            }
            f.mean_acc = jf.at("mean_acc").get<double>();
            f.best_acc = jf.at("best_acc").get<double>();
            f.mean_features = jf.at("mean_features").get<double>();
            r.folds.push_back(std::move(f));
        }
        const auto& js = j.at("summary");
        r.summary = {js.at("mean_acc").get<double>(), js.at("best_acc").get<double>(),
            js.at("mean_features").get<double>()};
        r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
        return r;
    } catch (const json::exception& e) {
        fail(ErrorCode::invalid_argument, std::string("malformed report: ") + e.what());
    }
}

auto report_to_csv(const RunReport& report) -> std::string
{
    std::ostringstream out;
    out.precision(17);
    out << "fold,mean_acc,best_acc,mean_features,n_solutions\n";
    for (const auto& f : report.folds) {
        out << f.fold << ',' << f.mean_acc << ',' << f.best_acc << ',' << f.mean_features << ',' << f.front.size()
            << '\n';
    }
    return out.str();
}

void emit_report(const RunReport& report, const std::string& path, ReportFormat format)
{
    namespace fs = std::filesystem;
    auto parent = fs::path(path).parent_path();
    if (!parent.empty() && !fs::is_directory(parent)) {
        fail(ErrorCode::io, "cannot write '" + path + "': directory '" + parent.string() + "' does not exist");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorCode::io, "cannot open '" + path + "' for writing");
    }
    out << (format == ReportFormat::json ? report_to_json(report) : report_to_csv(report));
    if (!out) {
        fail(ErrorCode::io, "failed writing '" + path + "'");
    }
}

} // namespace mofs
