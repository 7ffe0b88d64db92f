// SPDX-License-Identifier: Apache-2.0
// Exercises the shared library through its C header only.
#include "mofsemt/mofsemt.h"

#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>
#include <vector>

namespace {

auto scratch(const std::string& name) -> std::filesystem::path
{
    auto dir = std::filesystem::temp_directory_path() / ("mofsemt_capi_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

auto get(const mofs_config* c, const char* key) -> std::string
{
    char buf[256];
    REQUIRE(mofs_config_get(c, key, buf, sizeof buf) == MOFS_OK);
    return buf;
}

} // namespace

TEST_CASE("version and status names")
{
    CHECK(std::strlen(mofs_version()) > 0);
    CHECK(std::string(mofs_status_name(MOFS_ERR_IO)) == "i/o error");
}

TEST_CASE("config set and get")
{
    mofs_config* c = nullptr;
    REQUIRE(mofs_config_create(&c) == MOFS_OK);
    CHECK(get(c, "theta") == "0.6");
    CHECK(get(c, "iters") == "100");
    CHECK(get(c, "transfer") == "specific");
    CHECK(get(c, "removal") == "on");
    CHECK(get(c, "formulations") == "filtering,clustering");

    CHECK(mofs_config_set(c, "iters", "7") == MOFS_OK);
    CHECK(get(c, "iters") == "7");
    CHECK(mofs_config_set(c, "transfer", "sbx-style") == MOFS_OK);
    CHECK(get(c, "transfer") == "sbx-style");
    CHECK(mofs_config_set(c, "formulations", "clustering") == MOFS_OK);
    CHECK(get(c, "formulations") == "clustering");
    CHECK(mofs_config_set(c, "removal", "off") == MOFS_OK);
    CHECK(get(c, "removal") == "off");

    CHECK(mofs_config_set(c, "iters", "seven") == MOFS_ERR_INVALID_ARGUMENT);
    CHECK(std::string(mofs_last_error()).find("iters") != std::string::npos);
    CHECK(mofs_config_set(c, "colour", "blue") == MOFS_ERR_INVALID_ARGUMENT);
    CHECK(mofs_config_set(c, "theta", "2") == MOFS_OK);
    CHECK(mofs_config_validate(c) == MOFS_ERR_INVALID_ARGUMENT);

    char tiny[2];
    CHECK(mofs_config_get(c, "transfer", tiny, sizeof tiny) == MOFS_ERR_INVALID_ARGUMENT);
    CHECK(mofs_config_set(nullptr, "iters", "1") == MOFS_ERR_INVALID_ARGUMENT);
    mofs_config_destroy(c);
}

TEST_CASE("datasets through the C interface")
{
    auto dir = scratch("data");
    mofs_dataset* d = nullptr;
    REQUIRE(mofs_dataset_synthetic(40, 30, 4, 2, 2.0, 5, &d) == MOFS_OK);
    size_t n = 0, f = 0, k = 0;
    CHECK(mofs_dataset_shape(d, &n, &f, &k) == MOFS_OK);
    CHECK(n == 40);
    CHECK(f == 30);
    CHECK(k == 2);
    size_t count = 0;
    std::vector<size_t> idx(10);
    CHECK(mofs_dataset_informative(d, idx.data(), idx.size(), &count) == MOFS_OK);
    CHECK(count == 4);

    auto path = (dir / "s.csv").string();
    CHECK(mofs_dataset_write_csv(d, path.c_str()) == MOFS_OK);
    mofs_dataset* back = nullptr;
    REQUIRE(mofs_dataset_load_csv(path.c_str(), "last", &back) == MOFS_OK);
    CHECK(mofs_dataset_shape(back, &n, &f, &k) == MOFS_OK);
    CHECK(f == 30);
    mofs_dataset_destroy(back);
    mofs_dataset_destroy(d);

    std::ofstream(dir / "bad.csv") << "1,2,a\n3,b\n";
    mofs_dataset* bad = nullptr;
    CHECK(mofs_dataset_load_csv((dir / "bad.csv").string().c_str(), "last", &bad) == MOFS_ERR_PARSE);
    CHECK(bad == nullptr);
    std::ofstream(dir / "one.csv") << "1,2,a\n3,4,a\n";
    CHECK(mofs_dataset_load_csv((dir / "one.csv").string().c_str(), "last", &bad) == MOFS_ERR_DATASET);
    CHECK(mofs_dataset_load_csv((dir / "absent.csv").string().c_str(), "last", &bad) == MOFS_ERR_IO);
}

TEST_CASE("run, serialise and reload a report")
{
    auto dir = scratch("run");
    mofs_config* c = nullptr;
    REQUIRE(mofs_config_create(&c) == MOFS_OK);
    for (auto [key, value] : {std::pair {"outer-folds", "2"}, {"inner-folds", "3"}, {"iters", "4"}, {"seed", "9"}}) {
        REQUIRE(mofs_config_set(c, key, value) == MOFS_OK);
    }
    mofs_dataset* d = nullptr;
    REQUIRE(mofs_dataset_synthetic(40, 30, 4, 2, 2.0, 5, &d) == MOFS_OK);
    mofs_report* r = nullptr;
    REQUIRE(mofs_run(c, d, &r) == MOFS_OK);
    CHECK(mofs_report_fold_count(r) == 2);
    double mean = -1, best = -1, feats = -1;
    CHECK(mofs_report_summary(r, &mean, &best, &feats) == MOFS_OK);
    CHECK(mean >= 0.0);
    CHECK(best >= mean);
    CHECK(feats > 0.0);

    char* json = nullptr;
    REQUIRE(mofs_report_to_json(r, &json) == MOFS_OK);
    mofs_report* reloaded = nullptr;
    REQUIRE(mofs_report_from_json(json, &reloaded) == MOFS_OK);
    char* json2 = nullptr;
    REQUIRE(mofs_report_to_json(reloaded, &json2) == MOFS_OK);
    CHECK(std::string(json) == std::string(json2));
    mofs_string_free(json);
    mofs_string_free(json2);

    CHECK(mofs_report_write(r, (dir / "r.csv").string().c_str(), "csv") == MOFS_OK);
    auto missing = (dir / "missing" / "r.json").string();
    CHECK(mofs_report_write(r, missing.c_str(), "json") == MOFS_ERR_IO);
    CHECK(std::string(mofs_last_error()).find(missing) != std::string::npos);
    CHECK(mofs_report_write(r, (dir / "r.x").string().c_str(), "xml") == MOFS_ERR_INVALID_ARGUMENT);

    mofs_report_destroy(reloaded);
    mofs_report_destroy(r);
    mofs_dataset_destroy(d);

    // Path-based run.
    auto csv = (dir / "d.csv").string();
    REQUIRE(mofs_dataset_synthetic(40, 30, 4, 2, 2.0, 5, &d) == MOFS_OK);
    REQUIRE(mofs_dataset_write_csv(d, csv.c_str()) == MOFS_OK);
    mofs_dataset_destroy(d);
    REQUIRE(mofs_config_set(c, "data", csv.c_str()) == MOFS_OK);
    REQUIRE(mofs_run(c, nullptr, &r) == MOFS_OK);
    mofs_report_destroy(r);
    mofs_config_destroy(c);
}

TEST_CASE("errors are reported per thread")
{
    mofs_config* c = nullptr;
    REQUIRE(mofs_config_create(&c) == MOFS_OK);
    CHECK(mofs_config_set(c, "tasks", "x") != MOFS_OK);
    std::string here = mofs_last_error();
    std::string there = "unset";
    std::thread t([&] { there = mofs_last_error(); });
    t.join();
    CHECK(!here.empty());
    CHECK(there.empty());
    mofs_config_destroy(c);
}
