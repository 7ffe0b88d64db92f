// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include "mofsemt/error.hpp"
#include "mofsemt/evaluation.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

using namespace mofs;

namespace {

// Full sort of (distance, index), then count votes.
auto knn_oracle(const Dataset& train, std::span<const double> query, const std::vector<std::size_t>& rows,
    const std::vector<std::size_t>& columns, std::size_t k) -> int
{
    std::vector<std::pair<double, std::size_t>> d;
    for (auto r : rows) {
        double s = 0.0;
        for (auto c : columns) {
            s += std::pow(query[c] - train.at(r, c), 2);
        }
        d.emplace_back(std::sqrt(s), r);
    }
    std::sort(d.begin(), d.end());
    std::map<int, int> votes;
    for (std::size_t m = 0; m < std::min(k, d.size()); ++m) {
        ++votes[train.labels[d[m].second]];
    }
    int best = -1;
    int best_votes = -1;
    for (const auto& [label, v] : votes) {
        if (v > best_votes) {
            best = label;
            best_votes = v;
        }
    }
    return best;
}

auto recall_error(const std::vector<int>& truth, const std::vector<int>& pred, std::size_t n_classes) -> double
{
    double sum = 0.0;
    int present = 0;
    for (std::size_t c = 0; c < n_classes; ++c) {
        int total = 0;
        int hit = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (truth[i] == static_cast<int>(c)) {
                ++total;
                hit += pred[i] == truth[i] ? 1 : 0;
            }
        }
        if (total > 0) {
            sum += static_cast<double>(hit) / total;
            ++present;
        }
    }
    return 1.0 - sum / present;
}

} // namespace

TEST_CASE("decode_selection uses a strict threshold")
{
    CHECK(decode_selection(std::vector<double> {0.7, 0.6, 0.59}, 0.6) == Selection {true, false, false});
    CHECK(decode_selection(std::vector<double> {0, 0, 0}) == Selection {false, false, false});
    CHECK(decode_selection(std::vector<double> {1, 1}) == Selection {true, true});
}

TEST_CASE("KNN tie rules")
{
    SUBCASE("vote tie goes to the smaller class")
    {
        auto train = testing::make_dataset({{0.0}, {2.0}}, {1, 0});
        auto query = testing::make_dataset({{1.0}}, {0});
        std::vector<std::size_t> cols {0};
        CHECK(knn_predict(train, query, cols, 2) == std::vector<int> {0});
    }
    SUBCASE("distance tie goes to the lower index")
    {
        auto train = testing::make_dataset({{0.0}, {2.0}}, {1, 0});
        auto query = testing::make_dataset({{1.0}}, {0});
        std::vector<std::size_t> cols {0};
        CHECK(knn_predict(train, query, cols, 1) == std::vector<int> {1});
    }
    SUBCASE("exact match with k = 1")
    {
        auto train = testing::make_dataset({{0.3, 0.1}, {0.9, 0.4}, {0.2, 0.8}}, {0, 1, 2});
        auto query = testing::make_dataset({{0.9, 0.4}}, {0});
        std::vector<std::size_t> cols {0, 1};
        CHECK(knn_predict(train, query, cols, 1) == std::vector<int> {1});
    }
}

TEST_CASE("KNN five-sample instance against enumeration")
{
    auto train = testing::make_dataset({{0.1, 0.9}, {0.4, 0.4}, {0.5, 0.1}, {0.9, 0.8}, {0.7, 0.3}}, {0, 1, 1, 0, 2});
    auto query = testing::make_dataset({{0.6, 0.3}, {0.2, 0.7}, {0.8, 0.9}}, {0, 0, 0});
    std::vector<std::size_t> cols {0, 1};
    std::vector<std::size_t> rows {0, 1, 2, 3, 4};
    auto got = knn_predict(train, query, cols, 3);
    // Query 0: squared distances 0.01 to sample 4, 0.05 to samples 1 and 2 -> labels 2,1,1.
    CHECK(got[0] == 1);
    for (std::size_t q = 0; q < 3; ++q) {
        CHECK(got[q] == knn_oracle(train, query.row(q), rows, cols, 3));
    }
}

TEST_CASE("KNN matches the enumeration oracle on random data")
{
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        auto n = 3 + gen() % 30;
        auto dim = 1 + gen() % 8;
        std::vector<std::vector<double>> rows(n, std::vector<double>(dim));
        std::vector<int> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = static_cast<int>(i % 3);
            for (auto& v : rows[i]) {
                v = std::round(u(gen) * 4.0) / 4.0; // coarse grid forces ties
            }
        }
        auto train = testing::make_dataset(rows, labels);
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < dim; ++c) {
            if (gen() % 2 == 0 || c == 0) {
                cols.push_back(c);
            }
        }
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), std::size_t {0});
        auto k = 1 + gen() % 7;
        auto query = testing::make_dataset({rows[gen() % n], rows[gen() % n]}, {0, 0});
        auto got = knn_predict(train, query, cols, k);
        for (std::size_t q = 0; q < 2; ++q) {
            CHECK(got[q] == knn_oracle(train, query.row(q), all, cols, k));
        }
    }
}

TEST_CASE("balanced error examples")
{
    std::vector<int> truth {0, 0, 1, 1};
    CHECK(balanced_error(truth, truth, 2) == 0.0);
    CHECK(balanced_error(truth, std::vector<int> {0, 0, 1, 0}, 2) == doctest::Approx(0.25));
    CHECK(balanced_error(truth, std::vector<int> {0, 0, 0, 0}, 2) == doctest::Approx(0.5));
    // Class 2 is absent from the truth and is dropped from the mean.
    CHECK(balanced_error(truth, std::vector<int> {0, 0, 1, 1}, 3) == 0.0);
    std::vector<int> three {0, 1, 2, 0, 1, 2};
    CHECK(balanced_error(three, std::vector<int>(6, 0), 3) == doctest::Approx(1.0 - 1.0 / 3.0));
}

TEST_CASE("assistant error examples")
{
    std::vector<int> truth {0, 0, 1, 1};
    CHECK(assistant_error(truth, truth, 2) == 0.0);
    CHECK(assistant_error(truth, std::vector<int> {0, 0, 0, 0}, 2) == doctest::Approx(0.75));
    CHECK(assistant_error(std::vector<int> {0, 0, 0, 1}, std::vector<int> {0, 0, 1, 1}, 2) == doctest::Approx(0.25));
}

TEST_CASE("error measures stay in the unit interval")
{
    std::mt19937_64 gen(10);
    for (int trial = 0; trial < 500; ++trial) {
        auto n = 1 + gen() % 20;
        std::vector<int> t(n), p(n);
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = static_cast<int>(gen() % 4);
            p[i] = static_cast<int>(gen() % 4);
        }
        auto b = balanced_error(t, p, 4);
        auto a = assistant_error(t, p, 4);
        CHECK(b >= 0.0);
        CHECK(b <= 1.0);
        CHECK(a >= 0.0);
        CHECK(a <= 1.0);
        CHECK(b == doctest::Approx(recall_error(t, p, 4)).epsilon(1e-12));
    }
}

TEST_CASE("evaluator objectives")
{
    auto s = generate_synthetic({120, 40, 10, 3, 2.0}, 5);
    auto scaled = minmax_scale_fit_apply(s.data, {}).train;
    auto plan = stratified_folds(scaled, 5, 1, FoldKind::inner_fitness);
    Evaluator ev(scaled, plan);

    SUBCASE("empty selection sentinel")
    {
        auto o = ev.evaluate_selection(Selection(40, false));
        CHECK(o == ObjectiveVector {1.0, 0.0, 1.0});
    }
    SUBCASE("planted features give a low error")
    {
        Selection sel(40, false);
        for (auto f : s.informative) {
            sel[f] = true;
        }
        auto o = ev.evaluate_selection(sel);
        CHECK(o.error_rate < 0.1);
        CHECK(o.feature_rate == doctest::Approx(0.25));
    }
    SUBCASE("matches a per-fold KNN oracle")
    {
        std::mt19937_64 gen(3);
        for (int trial = 0; trial < 20; ++trial) {
            Selection sel(40, false);
            std::vector<std::size_t> cols;
            for (std::size_t f = 0; f < 40; ++f) {
                if (gen() % 4 == 0) {
                    sel[f] = true;
                    cols.push_back(f);
                }
            }
            if (cols.empty()) {
                continue;
            }
            double err = 0.0;
            for (std::size_t fold = 0; fold < 5; ++fold) {
                auto test_rows = plan.members(fold);
                auto train_rows = plan.complement(fold);
                std::vector<int> truth, pred;
                for (auto q : test_rows) {
                    truth.push_back(scaled.labels[q]);
                    pred.push_back(knn_oracle(scaled, scaled.row(q), train_rows, cols, 5));
                }
                err += recall_error(truth, pred, 3);
            }
            auto o = ev.evaluate_selection(sel);
            CHECK(o.error_rate == doctest::Approx(err / 5.0).epsilon(1e-12));
            CHECK(o.feature_rate == doctest::Approx(static_cast<double>(cols.size()) / 40.0));
        }
    }
    SUBCASE("memoisation is invisible")
    {
        std::vector<double> a(40, 0.1), b(40, 0.2);
        a[3] = 0.9;
        b[3] = 0.61;
        auto before = ev.cache_size();
        auto oa = ev.evaluate(a);
        auto ob = ev.evaluate(b);
        CHECK(oa == ob);
        CHECK(ev.cache_size() == before + 1);
        Individual ind;
        ind.full_repr = a;
        ev.evaluate(ind);
        CHECK(ind.evaluated());
        CHECK(ind.obj() == oa);
        CHECK(ind.n_selected() == 1);
    }
    SUBCASE("feature rate is monotone in the subset size")
    {
        Selection sel(40, false);
        double last = 0.0;
        for (std::size_t f = 0; f < 40; f += 4) {
            sel[f] = true;
            auto o = ev.evaluate_selection(sel);
            CHECK(o.feature_rate > last);
            last = o.feature_rate;
        }
    }
    SUBCASE("wrong length is rejected")
    {
        CHECK_THROWS_AS((void)ev.evaluate_selection(Selection(39, true)), Error);
    }
}

TEST_CASE("feature rate for 50 of 1000")
{
    auto s = generate_synthetic({20, 1000, 0, 2, 0.0}, 1);
    Evaluator ev(s.data, stratified_folds(s.data, 5, 2));
    Selection sel(1000, false);
    std::fill_n(sel.begin(), 50, true);
    CHECK(ev.evaluate_selection(sel).feature_rate == doctest::Approx(0.05));
}
