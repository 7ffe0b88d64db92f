// SPDX-License-Identifier: Apache-2.0
#include "support.hpp"

#include "mofsemt/error.hpp"
#include "mofsemt/relevance.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

using namespace mofs;

namespace {

// Entropies from explicit probability tables, natural log, converted at the end.
auto oracle_su(const std::vector<int>& x, const std::vector<int>& y) -> double
{
    std::map<int, double> px, py;
    std::map<std::pair<int, int>, double> pxy;
    auto n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        px[x[i]] += 1.0;
        py[y[i]] += 1.0;
        pxy[{x[i], y[i]}] += 1.0;
    }
    for (auto* table : {&px, &py}) {
        for (auto& [k, p] : *table) {
            p /= n;
        }
    }
    for (auto& [k, p] : pxy) {
        p /= n;
    }
    auto h = [](const auto& table) {
        double s = 0.0;
        for (const auto& [k, p] : table) {
            s -= p * std::log(p);
        }
        return s;
    };
    double mi = 0.0;
    for (const auto& [k, p] : pxy) {
        mi += p * std::log(p / (px[k.first] * py[k.second]));
    }
    auto denom = h(px) + h(py);
    return denom == 0.0 ? 0.0 : 2.0 * mi / denom;
}

} // namespace

TEST_CASE("equal-frequency discretization")
{
    std::vector<double> a {1, 2, 3, 4};
    CHECK(discretize_equal_frequency(a, 2).bins == std::vector<int> {0, 0, 1, 1});

    std::vector<double> c {3, 3, 3, 3};
    CHECK(discretize_column(c).bins == std::vector<int> {0, 0, 0, 0});

    // sorted [1,5,5,5,9,9]; cut points at sorted[1] = 5 and sorted[3] = 5;
    // ties go to the lower bin, so every 5 lands in bin 0 and the middle bin stays empty.
    std::vector<double> t {5, 5, 5, 1, 9, 9};
    auto d = discretize_equal_frequency(t, 3);
    CHECK(d.edges == std::vector<double> {5, 5});
    CHECK(d.bins == std::vector<int> {0, 0, 0, 0, 2, 2});
}

TEST_CASE("discretize_column caps bins at the distinct count")
{
    std::vector<double> v {0, 1, 0, 1, 2, 2, 0};
    auto d = discretize_column(v, 10);
    CHECK(d.edges.size() == 2);
    CHECK(d.bins == std::vector<int> {0, 1, 0, 1, 2, 2, 0});
}

TEST_CASE("equal-frequency bins hold near-equal counts on distinct values")
{
    std::mt19937_64 gen(3);
    std::normal_distribution<double> nd;
    std::vector<double> v(1000);
    for (auto& x : v) {
        x = nd(gen);
    }
    auto d = discretize_equal_frequency(v, 10);
    std::vector<int> counts(10, 0);
    for (auto b : d.bins) {
        ++counts[static_cast<std::size_t>(b)];
    }
    for (auto c : counts) {
        CHECK(c == 100);
    }
}

TEST_CASE("symmetric uncertainty examples")
{
    std::vector<int> x {0, 0, 1, 1};
    CHECK(symmetric_uncertainty(x, x) == doctest::Approx(1.0).epsilon(1e-15));
    std::vector<int> a {0, 1, 0, 1};
    CHECK(symmetric_uncertainty(a, x) == doctest::Approx(0.0));
    std::vector<int> y {0, 1, 1, 1};
    auto su = symmetric_uncertainty(x, y);
    CHECK(std::abs(su - 0.3437) < 1e-4);
    CHECK(std::abs(entropy(y) - 0.8113) < 1e-4);
    CHECK(std::abs(mutual_information(x, y) - 0.3113) < 1e-4);
    CHECK(su == doctest::Approx(oracle_su(x, y)).epsilon(1e-12));
}

TEST_CASE("symmetric uncertainty against a probability-table oracle")
{
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 300; ++trial) {
        auto n = 5 + gen() % 200;
        auto kx = 1 + gen() % 6;
        auto ky = 1 + gen() % 4;
        std::vector<int> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<int>(gen() % kx);
            y[i] = (gen() % 3 == 0) ? x[i] % static_cast<int>(ky) : static_cast<int>(gen() % ky);
        }
        auto su = symmetric_uncertainty(x, y);
        CHECK(su >= 0.0);
        CHECK(su <= 1.0);
        CHECK(su == doctest::Approx(oracle_su(x, y)).epsilon(1e-9));
        CHECK(su == doctest::Approx(symmetric_uncertainty(y, x)).epsilon(1e-12));
    }
}

TEST_CASE("symmetric uncertainty properties")
{
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<int> x(50), y(50);
        for (std::size_t i = 0; i < 50; ++i) {
            x[i] = static_cast<int>(gen() % 5);
            y[i] = static_cast<int>(gen() % 3);
        }
        if (entropy(x) > 0.0) {
            CHECK(symmetric_uncertainty(x, x) == 1.0);
        }
        std::vector<int> constant(50, 4);
        CHECK(symmetric_uncertainty(x, constant) == 0.0);
        // Relabel symbols with a bijection.
        std::vector<int> relabel {7, -3, 100000, 2, 9};
        std::vector<int> x2(50);
        for (std::size_t i = 0; i < 50; ++i) {
            x2[i] = relabel[static_cast<std::size_t>(x[i])];
        }
        CHECK(symmetric_uncertainty(x2, y) == doctest::Approx(symmetric_uncertainty(x, y)).epsilon(1e-12));
    }
}

TEST_CASE("symmetric uncertainty rejects mismatched columns")
{
    std::vector<int> a {0, 1};
    std::vector<int> b {0, 1, 1};
    CHECK_THROWS_AS(symmetric_uncertainty(a, b), Error);
}

TEST_CASE("removal threshold arithmetic")
{
    // D = 100, floor(100 / ln 100) = 21; SU_max = 0.5 and rank-21 SU = 0.3.
    std::vector<double> su(100, 0.01);
    su[7] = 0.5;
    for (std::size_t i = 0; i < 20; ++i) {
        su[20 + i] = 0.3;
    }
    CHECK(removal_threshold(su, 0.2) == doctest::Approx(0.1));
    CHECK(static_cast<std::size_t>(std::floor(100.0 / std::log(100.0))) == 21);

    // When the ranked value is below lambda * max, it wins.
    std::vector<double> low(100, 0.0);
    low[0] = 1.0;
    low[1] = 0.9;
    CHECK(removal_threshold(low, 0.2) == 0.0);

    SUBCASE("log base changes the rank cut")
    {
        std::vector<double> ladder(100);
        for (std::size_t i = 0; i < 100; ++i) {
            ladder[i] = 1.0 - 0.01 * static_cast<double>(i);
        }
        // floor(100/ln100)=21, floor(100/log2 100)=15, floor(100/log10 100)=50
        CHECK(removal_threshold(ladder, 1.0, LogBase::natural) == doctest::Approx(0.80));
        CHECK(removal_threshold(ladder, 1.0, LogBase::two) == doctest::Approx(0.86));
        CHECK(removal_threshold(ladder, 1.0, LogBase::ten) == doctest::Approx(0.51));
    }
}

TEST_CASE("remove_irrelevant keeps everything when SU is uniform")
{
    // Every feature is a copy of the label, so all SU values equal 1.
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 12; ++i) {
        labels.push_back(i % 3);
        rows.push_back(std::vector<double>(6, static_cast<double>(i % 3)));
    }
    auto d = testing::make_dataset(rows, labels);
    auto r = remove_irrelevant(d, 0.2);
    CHECK(r.mask.threshold == doctest::Approx(0.2));
    CHECK(r.mask.kept.size() == 6);
}

TEST_CASE("remove_irrelevant keeps at least two features")
{
    std::vector<std::vector<double>> rows;
    std::vector<int> labels;
    for (int i = 0; i < 12; ++i) {
        labels.push_back(i % 2);
        rows.push_back({1.0, 1.0, 1.0, 1.0});
    }
    auto d = testing::make_dataset(rows, labels);
    auto r = remove_irrelevant(d, 0.2);
    CHECK(r.mask.kept.size() == 2);
}

TEST_CASE("remove_irrelevant is deterministic")
{
    auto s = generate_synthetic({60, 80, 5, 3, 2.0}, 3);
    auto a = remove_irrelevant(s.data, 0.2);
    auto b = remove_irrelevant(s.data, 0.2);
    CHECK(a.mask.kept == b.mask.kept);
    CHECK(a.scores.su_with_class == b.scores.su_with_class);
    CHECK(a.mask.kept.size() >= 2);
}

TEST_CASE("planted features survive removal")
{
    std::size_t survived_all = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto s = generate_synthetic({200, 1000, 10, 3, 2.0}, seed);
        auto r = remove_irrelevant(s.data, 0.2);
        bool all = true;
        for (auto f : s.informative) {
            all = all && std::binary_search(r.mask.kept.begin(), r.mask.kept.end(), f);
        }
        survived_all += all ? 1 : 0;
    }
    CHECK(survived_all >= 19);
}

TEST_CASE("zero class shift leaves planted features indistinguishable from noise")
{
    double planted = 0.0;
    double noise = 0.0;
    std::size_t n_planted = 0;
    std::size_t n_noise = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto s = generate_synthetic({200, 100, 10, 3, 0.0}, seed);
        auto su = su_with_class(s.data).su_with_class;
        for (std::size_t f = 0; f < 100; ++f) {
            if (std::binary_search(s.informative.begin(), s.informative.end(), f)) {
                planted += su[f];
                ++n_planted;
            } else {
                noise += su[f];
                ++n_noise;
            }
        }
    }
    planted /= static_cast<double>(n_planted);
    noise /= static_cast<double>(n_noise);
    CHECK(std::abs(planted - noise) < 0.1 * noise);
}
