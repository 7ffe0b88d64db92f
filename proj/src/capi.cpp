// SPDX-License-Identifier: Apache-2.0
#include "mofsemt/mofsemt.h"

#include "mofsemt/error.hpp"
#include "mofsemt/experiment.hpp"

#include <charconv>
#include <cstring>
#include <functional>
#include <new>
#include <string>

struct mofs_config {
    mofs::RunConfig value;
};

struct mofs_dataset {
    mofs::Dataset value;
    std::vector<std::size_t> informative;
};

struct mofs_report {
    mofs::RunReport value;
};

namespace {

thread_local std::string last_error;

auto status_for(mofs::ErrorCode code) -> mofs_status
{
    switch (code) {
    case mofs::ErrorCode::invalid_argument:
        return MOFS_ERR_INVALID_ARGUMENT;
    case mofs::ErrorCode::io:
        return MOFS_ERR_IO;
    case mofs::ErrorCode::empty_file:
    case mofs::ErrorCode::malformed_row:
    case mofs::ErrorCode::bad_number:
        return MOFS_ERR_PARSE;
    case mofs::ErrorCode::single_class:
        return MOFS_ERR_DATASET;
    case mofs::ErrorCode::dimension_mismatch:
    case mofs::ErrorCode::empty_elites:
        return MOFS_ERR_INTERNAL;
    }
    return MOFS_ERR_INTERNAL;
}

auto set_error(mofs_status status, const std::string& message) -> mofs_status
{
    last_error = message;
    return status;
}

// Runs body, translating exceptions into status codes.
auto guarded(const std::function<void()>& body) -> mofs_status
{
    try {
        body();
        return MOFS_OK;
    } catch (const mofs::Error& e) {
        return set_error(status_for(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(MOFS_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return set_error(MOFS_ERR_INTERNAL, e.what());
    } catch (...) {
        return set_error(MOFS_ERR_INTERNAL, "unknown error");
    }
}

auto parse_size(const std::string& key, const std::string& text) -> std::size_t
{
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        mofs::fail(mofs::ErrorCode::invalid_argument, key + ": expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

auto parse_u64(const std::string& key, const std::string& text) -> std::uint64_t
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        mofs::fail(mofs::ErrorCode::invalid_argument, key + ": expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

auto parse_real(const std::string& key, const std::string& text) -> double
{
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        mofs::fail(mofs::ErrorCode::invalid_argument, key + ": expected a number, got '" + text + "'");
    }
    return v;
}

auto parse_switch(const std::string& key, const std::string& text) -> bool
{
    if (text == "on" || text == "true" || text == "1" || text == "yes") {
        return true;
    }
    if (text == "off" || text == "false" || text == "0" || text == "no") {
        return false;
    }
    mofs::fail(mofs::ErrorCode::invalid_argument, key + ": expected on or off, got '" + text + "'");
}

auto format_real(double v) -> std::string
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

auto on_off(bool b) -> std::string { return b ? "on" : "off"; }

void set_key(mofs::RunConfig& c, const std::string& key, const std::string& value)
{
    using namespace mofs;
    if (key == "data") {
        c.data_path = value;
    } else if (key == "label-col") {
        c.label_col = value;
    } else if (key == "seed") {
        c.seed = parse_u64(key, value);
    } else if (key == "iters") {
        c.max_iter = parse_size(key, value);
    } else if (key == "tasks") {
        c.n_tasks = parse_size(key, value);
    } else if (key == "theta") {
        c.theta = parse_real(key, value);
    } else if (key == "rtp") {
        c.rtp = parse_real(key, value);
    } else if (key == "stagnation") {
        c.stagnation = parse_size(key, value);
    } else if (key == "knn-k") {
        c.knn_k = parse_size(key, value);
    } else if (key == "inner-folds") {
        c.inner_folds = parse_size(key, value);
    } else if (key == "outer-folds") {
        c.outer_folds = parse_size(key, value);
    } else if (key == "lambda") {
        c.lambda = parse_real(key, value);
    } else if (key == "out") {
        c.output_path = value;
    } else if (key == "format") {
        c.format = parse_report_format(value);
    } else if (key == "removal") {
        c.removal = parse_switch(key, value);
    } else if (key == "formulations") {
        parse_formulations(value, c);
    } else if (key == "transfer") {
        c.transfer = parse_transfer_mode(value);
    } else if (key == "fitness") {
        c.fitness = parse_fitness_mode(value);
    } else if (key == "norm-dir") {
        c.norm_direction = parse_norm_direction(value);
    } else if (key == "log-base") {
        if (value == "natural" || value == "e") {
            c.log_base = LogBase::natural;
        } else if (value == "two" || value == "2") {
            c.log_base = LogBase::two;
        } else if (value == "ten" || value == "10") {
            c.log_base = LogBase::ten;
        } else {
            fail(ErrorCode::invalid_argument, "log-base: expected natural, two or ten, got '" + value + "'");
        }
    } else if (key == "workers") {
        c.workers = parse_size(key, value);
    } else if (key == "mutate-literal") {
        c.mutate_parent_literal = parse_switch(key, value);
    } else if (key == "per-task-trigger") {
        c.per_task_trigger = parse_switch(key, value);
    } else if (key == "pool-per-task") {
        c.pool_per_task_uniform = parse_switch(key, value);
    } else {
        fail(ErrorCode::invalid_argument, "unknown configuration key '" + key + "'");
    }
}

auto get_key(const mofs::RunConfig& c, const std::string& key) -> std::string
{
    using namespace mofs;
    if (key == "data") {
        return c.data_path;
    }
    if (key == "label-col") {
        return c.label_col;
    }
    if (key == "seed") {
        return std::to_string(c.seed);
    }
    if (key == "iters") {
        return std::to_string(c.max_iter);
    }
    if (key == "tasks") {
        return std::to_string(c.n_tasks);
    }
    if (key == "theta") {
        return format_real(c.theta);
    }
    if (key == "rtp") {
        return format_real(c.rtp);
    }
    if (key == "stagnation") {
        return std::to_string(c.stagnation);
    }
    if (key == "knn-k") {
        return std::to_string(c.knn_k);
    }
    if (key == "inner-folds") {
        return std::to_string(c.inner_folds);
    }
    if (key == "outer-folds") {
        return std::to_string(c.outer_folds);
    }
    if (key == "lambda") {
        return format_real(c.lambda);
    }
    if (key == "out") {
        return c.output_path;
    }
    if (key == "format") {
        return to_string(c.format);
    }
    if (key == "removal") {
        return on_off(c.removal);
    }
    if (key == "formulations") {
        std::string s;
        if (c.use_filtering) {
            s = "filtering";
        }
        if (c.use_clustering) {
            s += s.empty() ? "clustering" : ",clustering";
        }
        return s.empty() ? "none" : s;
    }
    if (key == "transfer") {
        return to_string(c.transfer);
    }
    if (key == "fitness") {
        return to_string(c.fitness);
    }
    if (key == "norm-dir") {
        return to_string(c.norm_direction);
    }
    if (key == "log-base") {
        switch (c.log_base) {
        case LogBase::natural:
            return "natural";
        case LogBase::two:
            return "two";
        case LogBase::ten:
            return "ten";
        }
    }
    if (key == "workers") {
        return std::to_string(c.workers);
    }
    if (key == "mutate-literal") {
        return on_off(c.mutate_parent_literal);
    }
    if (key == "per-task-trigger") {
        return on_off(c.per_task_trigger);
    }
    if (key == "pool-per-task") {
        return on_off(c.pool_per_task_uniform);
    }
    fail(ErrorCode::invalid_argument, "unknown configuration key '" + key + "'");
}

auto null_argument(const char* what) -> mofs_status
{
    return set_error(MOFS_ERR_INVALID_ARGUMENT, std::string(what) + " must not be NULL");
}

} // namespace

extern "C" {

MOFS_API const char* mofs_version(void)
{
    return "0.1.0";
}

MOFS_API const char* mofs_last_error(void)
{
    return last_error.c_str();
}

MOFS_API const char* mofs_status_name(mofs_status status)
{
    switch (status) {
    case MOFS_OK:
        return "ok";
    case MOFS_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case MOFS_ERR_IO:
        return "i/o error";
    case MOFS_ERR_PARSE:
        return "parse error";
    case MOFS_ERR_DATASET:
        return "dataset error";
    case MOFS_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

MOFS_API mofs_status mofs_config_create(mofs_config** out)
{
    if (out == nullptr) {
        return null_argument("out");
    }
    return guarded([&] { *out = new mofs_config {}; });
}

MOFS_API void mofs_config_destroy(mofs_config* config)
{
    delete config;
}

MOFS_API mofs_status mofs_config_set(mofs_config* config, const char* key, const char* value)
{
    if (config == nullptr || key == nullptr || value == nullptr) {
        return null_argument("config, key and value");
    }
    return guarded([&] { set_key(config->value, key, value); });
}

MOFS_API mofs_status mofs_config_get(const mofs_config* config, const char* key, char* buffer, size_t size)
{
    if (config == nullptr || key == nullptr || buffer == nullptr) {
        return null_argument("config, key and buffer");
    }
    return guarded([&] {
        auto text = get_key(config->value, key);
        if (text.size() + 1 > size) {
            mofs::fail(mofs::ErrorCode::invalid_argument, std::string("buffer too small for '") + key + "'");
        }
        std::memcpy(buffer, text.c_str(), text.size() + 1);
    });
}

MOFS_API mofs_status mofs_config_validate(const mofs_config* config)
{
    if (config == nullptr) {
        return null_argument("config");
    }
    return guarded([&] { config->value.validate(); });
}

MOFS_API mofs_status mofs_dataset_load_csv(const char* path, const char* label_col, mofs_dataset** out)
{
    if (path == nullptr || out == nullptr) {
        return null_argument("path and out");
    }
    return guarded([&] {
        auto label = mofs::LabelColumn::parse(label_col == nullptr ? "last" : label_col);
        *out = new mofs_dataset {mofs::load_csv(path, label), {}};
    });
}

MOFS_API mofs_status mofs_dataset_synthetic(size_t n_samples, size_t n_features, size_t n_informative,
    size_t n_classes, double class_shift, uint64_t seed, mofs_dataset** out)
{
    if (out == nullptr) {
        return null_argument("out");
    }
    return guarded([&] {
        mofs::SyntheticSpec spec {n_samples, n_features, n_informative, n_classes, class_shift};
        auto synth = mofs::generate_synthetic(spec, seed);
        *out = new mofs_dataset {std::move(synth.data), std::move(synth.informative)};
    });
}

MOFS_API mofs_status mofs_dataset_shape(const mofs_dataset* data, size_t* n_samples, size_t* n_features,
    size_t* n_classes)
{
    if (data == nullptr) {
        return null_argument("data");
    }
    if (n_samples != nullptr) {
        *n_samples = data->value.n_samples;
    }
    if (n_features != nullptr) {
        *n_features = data->value.n_features;
    }
    if (n_classes != nullptr) {
        *n_classes = data->value.n_classes;
    }
    return MOFS_OK;
}

MOFS_API mofs_status mofs_dataset_informative(const mofs_dataset* data, size_t* indices, size_t capacity,
    size_t* count)
{
    if (data == nullptr || count == nullptr) {
        return null_argument("data and count");
    }
    *count = data->informative.size();
    if (indices != nullptr) {
        for (size_t i = 0; i < std::min(capacity, data->informative.size()); ++i) {
            indices[i] = data->informative[i];
        }
    }
    return MOFS_OK;
}

MOFS_API mofs_status mofs_dataset_write_csv(const mofs_dataset* data, const char* path)
{
    if (data == nullptr || path == nullptr) {
        return null_argument("data and path");
    }
    return guarded([&] { mofs::write_csv(data->value, path); });
}

MOFS_API void mofs_dataset_destroy(mofs_dataset* data)
{
    delete data;
}

MOFS_API mofs_status mofs_run(const mofs_config* config, const mofs_dataset* data, mofs_report** out)
{
    if (config == nullptr || out == nullptr) {
        return null_argument("config and out");
    }
    return guarded([&] {
        auto report = data != nullptr ? mofs::run_experiment(config->value, data->value)
                                      : mofs::run_experiment(config->value);
        *out = new mofs_report {std::move(report)};
    });
}

MOFS_API mofs_status mofs_report_summary(const mofs_report* report, double* mean_acc, double* best_acc,
    double* mean_features)
{
    if (report == nullptr) {
        return null_argument("report");
    }
    if (mean_acc != nullptr) {
        *mean_acc = report->value.summary.mean_acc;
    }
    if (best_acc != nullptr) {
        *best_acc = report->value.summary.best_acc;
    }
    if (mean_features != nullptr) {
        *mean_features = report->value.summary.mean_features;
    }
    return MOFS_OK;
}

MOFS_API size_t mofs_report_fold_count(const mofs_report* report)
{
    return report == nullptr ? 0 : report->value.folds.size();
}

MOFS_API mofs_status mofs_report_write(const mofs_report* report, const char* path, const char* format)
{
    if (report == nullptr || path == nullptr) {
        return null_argument("report and path");
    }
    return guarded([&] {
        auto fmt = mofs::parse_report_format(format == nullptr ? "json" : format);
        mofs::emit_report(report->value, path, fmt);
    });
}

MOFS_API mofs_status mofs_report_to_json(const mofs_report* report, char** out)
{
    if (report == nullptr || out == nullptr) {
        return null_argument("report and out");
    }
    return guarded([&] {
        auto text = mofs::report_to_json(report->value);
        auto* buf = new char[text.size() + 1];
        std::memcpy(buf, text.c_str(), text.size() + 1);
        *out = buf;
    });
}

MOFS_API mofs_status mofs_report_from_json(const char* text, mofs_report** out)
{
    if (text == nullptr || out == nullptr) {
        return null_argument("text and out");
    }
    return guarded([&] { *out = new mofs_report {mofs::report_from_json(text)}; });
}

MOFS_API void mofs_report_destroy(mofs_report* report)
{
    delete report;
}

MOFS_API void mofs_string_free(char* text)
{
    delete[] text;
}

} // extern "C"
