// SPDX-License-Identifier: Apache-2.0
// Command-line driver. Everything goes through the C interface.
#include "mofsemt/mofsemt.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <string>

namespace {

struct Failure {
    std::string message;
};

void check(mofs_status status, const std::string& context)
{
    if (status != MOFS_OK) {
        throw Failure {context + ": " + mofs_last_error()};
    }
}

using ConfigPtr = std::unique_ptr<mofs_config, decltype(&mofs_config_destroy)>;
using DatasetPtr = std::unique_ptr<mofs_dataset, decltype(&mofs_dataset_destroy)>;
using ReportPtr = std::unique_ptr<mofs_report, decltype(&mofs_report_destroy)>;

struct SynthArgs {
    std::string out;
    std::size_t samples = 200;
    std::size_t features = 1000;
    std::size_t informative = 10;
    std::size_t classes = 3;
    double shift = 2.0;
    std::uint64_t seed = 1;
};

auto run_synth(const SynthArgs& a) -> int
{
    mofs_dataset* raw = nullptr;
    check(mofs_dataset_synthetic(a.samples, a.features, a.informative, a.classes, a.shift, a.seed, &raw),
        "synth");
    DatasetPtr data(raw, mofs_dataset_destroy);
    check(mofs_dataset_write_csv(data.get(), a.out.c_str()), "synth");
    return 0;
}

auto run_main(const std::map<std::string, std::string>& settings, bool disable_removal) -> int
{
    mofs_config* raw = nullptr;
    check(mofs_config_create(&raw), "config");
    ConfigPtr config(raw, mofs_config_destroy);
    for (const auto& [key, value] : settings) {
        check(mofs_config_set(config.get(), key.c_str(), value.c_str()), "--" + key);
    }
    if (disable_removal) {
        check(mofs_config_set(config.get(), "removal", "off"), "--disable-removal");
    }
    check(mofs_config_validate(config.get()), "config");

    mofs_report* rep = nullptr;
    check(mofs_run(config.get(), nullptr, &rep), "run");
    ReportPtr report(rep, mofs_report_destroy);

    auto out = settings.find("out");
    if (out != settings.end() && !out->second.empty()) {
        auto fmt = settings.find("format");
        const char* format = fmt == settings.end() ? "json" : fmt->second.c_str();
        check(mofs_report_write(report.get(), out->second.c_str(), format), "--out");
        double mean_acc = 0.0;
        double best_acc = 0.0;
        double mean_features = 0.0;
        check(mofs_report_summary(report.get(), &mean_acc, &best_acc, &mean_features), "summary");
        std::printf("folds=%zu mean_acc=%.4f best_acc=%.4f mean_features=%.2f\n",
            mofs_report_fold_count(report.get()), mean_acc, best_acc, mean_features);
    } else {
        char* text = nullptr;
        check(mofs_report_to_json(report.get(), &text), "report");
        std::printf("%s\n", text);
        mofs_string_free(text);
    }
    return 0;
}

} // namespace

auto main(int argc, char** argv) -> int
{
    CLI::App app {"Multi-objective multitask feature selection"};
    app.set_version_flag("--version", mofs_version());

    // Only flags the user actually passed are forwarded; the library owns defaults.
    const char* keys[] = {"data", "label-col", "seed", "iters", "tasks", "theta", "rtp", "stagnation", "knn-k",
        "inner-folds", "outer-folds", "lambda", "out", "format", "formulations", "transfer", "fitness",
        "norm-dir", "log-base", "workers", "mutate-literal", "per-task-trigger", "pool-per-task"};
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
    for (const char* key : keys) {
        options[key] = app.add_option(std::string("--") + key, values[key]);
    }
    options["data"]->description("CSV dataset path");
    options["label-col"]->description("label column: last, index, or header name");
    options["format"]->description("json or csv");
    options["formulations"]->description("comma list of filtering,clustering");
    options["transfer"]->description("specific, sbx-style or off");
    options["fitness"]->description("standard, fit1 or fit2");
    options["norm-dir"]->description("inverted or literal");
    bool disable_removal = false;
    app.add_flag("--disable-removal", disable_removal, "skip irrelevant-feature removal");

    SynthArgs synth;
    auto* sub = app.add_subcommand("synth", "write a planted-feature CSV");
    sub->add_option("--out", synth.out, "output CSV path")->required();
    sub->add_option("--samples", synth.samples);
    sub->add_option("--features", synth.features);
    sub->add_option("--informative", synth.informative);
    sub->add_option("--classes", synth.classes);
    sub->add_option("--shift", synth.shift);
    sub->add_option("--seed", synth.seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "mofsemt: %s\n", e.what());
        return 2;
    }

    try {
        if (sub->parsed()) {
            return run_synth(synth);
        }
        if (options["data"]->count() == 0) {
            throw Failure {"--data is required"};
        }
        std::map<std::string, std::string> given;
        for (const auto& [key, option] : options) {
            if (option->count() > 0) {
                given[key] = values[key];
            }
        }
        return run_main(given, disable_removal);
    } catch (const Failure& f) {
        std::fprintf(stderr, "mofsemt: %s\n", f.message.c_str());
        return 1;
    }
}
