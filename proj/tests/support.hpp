// SPDX-License-Identifier: Apache-2.0
#ifndef MOFSEMT_TESTS_SUPPORT_HPP
#define MOFSEMT_TESTS_SUPPORT_HPP

#include "mofsemt/dataset.hpp"
#include "mofsemt/individual.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace testing {

// rows: one vector per sample.
inline auto make_dataset(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels)
    -> mofs::Dataset
{
    mofs::Dataset d;
    d.n_samples = rows.size();
    d.n_features = rows.empty() ? 0 : rows.front().size();
    int max_label = 0;
    for (auto l : labels) {
        max_label = std::max(max_label, l);
    }
    d.n_classes = static_cast<std::size_t>(max_label) + 1;
    for (const auto& r : rows) {
        d.features.insert(d.features.end(), r.begin(), r.end());
    }
    d.labels = labels;
    for (std::size_t j = 0; j < d.n_features; ++j) {
        d.feature_names.push_back("f" + std::to_string(j));
    }
    for (std::size_t c = 0; c < d.n_classes; ++c) {
        d.class_names.push_back(std::to_string(c));
    }
    return d;
}

inline auto scratch_dir(const std::string& name) -> std::filesystem::path
{
    auto dir = std::filesystem::temp_directory_path() / ("mofsemt_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path);
    out << text;
}

inline auto read_text(const std::filesystem::path& path) -> std::string
{
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline auto individual(double error, double feature_rate, double assistant, std::vector<bool> selection)
    -> mofs::Individual
{
    mofs::Individual ind;
    ind.objectives = mofs::ObjectiveVector {error, feature_rate, assistant};
    ind.selection = std::move(selection);
    ind.full_repr.assign(ind.selection.size(), 0.0);
    for (std::size_t i = 0; i < ind.selection.size(); ++i) {
        ind.full_repr[i] = ind.selection[i] ? 0.9 : 0.1;
    }
    ind.task_repr = ind.full_repr;
    ind.velocity.assign(ind.full_repr.size(), 0.0);
    return ind;
}

// Selection with the bits of `code` over `width` positions.
inline auto bits(unsigned code, std::size_t width) -> std::vector<bool>
{
    std::vector<bool> s(width);
    for (std::size_t i = 0; i < width; ++i) {
        s[i] = ((code >> i) & 1U) != 0U;
    }
    return s;
}

} // namespace testing

#endif
