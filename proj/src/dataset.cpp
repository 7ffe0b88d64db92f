// SPDX-License-Identifier: Apache-2.0
#include "mofsemt/dataset.hpp"

#include "mofsemt/error.hpp"
#include "mofsemt/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace mofs {

auto Dataset::column(std::size_t feature) const -> std::vector<double>
{
    std::vector<double> out(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        out[i] = at(i, feature);
    }
    return out;
}

auto Dataset::class_counts() const -> std::vector<std::size_t>
{
    std::vector<std::size_t> counts(n_classes, 0);
    for (auto label : labels) {
        ++counts[static_cast<std::size_t>(label)];
    }
    return counts;
}

auto Dataset::select_rows(std::span<const std::size_t> rows) const -> Dataset
{
    Dataset out;
    out.n_samples = rows.size();
    out.n_features = n_features;
    out.n_classes = n_classes;
    out.feature_names = feature_names;
    out.class_names = class_names;
    out.features.reserve(rows.size() * n_features);
    out.labels.reserve(rows.size());
    for (auto r : rows) {
        auto src = row(r);
        out.features.insert(out.features.end(), src.begin(), src.end());
        out.labels.push_back(labels[r]);
    }
    return out;
}

auto Dataset::select_columns(std::span<const std::size_t> columns) const -> Dataset
{
    Dataset out;
    out.n_samples = n_samples;
    out.n_features = columns.size();
    out.n_classes = n_classes;
    out.labels = labels;
    out.class_names = class_names;
    out.features.resize(n_samples * columns.size());
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (std::size_t j = 0; j < columns.size(); ++j) {
            out.features[i * columns.size() + j] = at(i, columns[j]);
        }
    }
    if (!feature_names.empty()) {
        for (auto c : columns) {
            out.feature_names.push_back(feature_names[c]);
        }
    }
    return out;
}

void Dataset::validate() const
{
    require(features.size() == n_samples * n_features, "feature matrix size does not match its shape");
    require(labels.size() == n_samples, "label count does not match sample count");
    if (n_classes < 2) {
        fail(ErrorCode::single_class, "dataset has fewer than two classes");
    }
    std::vector<std::size_t> counts(n_classes, 0);
    for (auto label : labels) {
        require(label >= 0 && static_cast<std::size_t>(label) < n_classes, "label out of range");
        ++counts[static_cast<std::size_t>(label)];
    }
    for (std::size_t c = 0; c < n_classes; ++c) {
        require(counts[c] > 0, "class " + std::to_string(c) + " has no samples");
    }
    for (std::size_t i = 0; i < features.size(); ++i) {
        if (!std::isfinite(features[i])) {
            fail(ErrorCode::bad_number, "non-finite value at row " + std::to_string(i / n_features) + ", column "
                    + std::to_string(i % n_features));
        }
    }
    require(n_samples >= 2 * n_classes, "need at least two samples per class");
}

auto LabelColumn::parse(const std::string& text) -> LabelColumn
{
    LabelColumn out;
    if (text.empty() || text == "last") {
        return out;
    }
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size()) {
        out.kind = Kind::index;
        out.index = value;
    } else {
        out.kind = Kind::named;
        out.name = text;
    }
    return out;
}

namespace {
    auto trim(std::string_view s) -> std::string_view
    {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
            s.remove_prefix(1);
        }
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
            s.remove_suffix(1);
        }
        if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
            s = s.substr(1, s.size() - 2);
        }
        return s;
    }

    auto split(const std::string& line) -> std::vector<std::string>
    {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            auto comma = line.find(',', start);
            auto cell = std::string_view(line).substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            cells.emplace_back(trim(cell));
            if (comma == std::string::npos) {
                break;
            }
            start = comma + 1;
        }
        return cells;
    }

    auto parse_double(std::string_view s, double& out) -> bool
    {
        if (s.empty()) {
            return false;
        }
        if (s.front() == '+') {
            s.remove_prefix(1);
        }
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
        return ec == std::errc() && ptr == s.data() + s.size();
    }

    auto is_blank(const std::string& line) -> bool
    {
        return std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || c == '\t' || c == '\r'; });
    }
} // namespace

auto load_csv(const std::string& path, const LabelColumn& label) -> Dataset
{
    std::ifstream in(path);
    if (!in) {
        fail(ErrorCode::io, "cannot open '" + path + "'");
    }

    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        rows.emplace_back(line_no, split(line));
    }
    if (rows.empty()) {
        fail(ErrorCode::empty_file, "'" + path + "' contains no rows");
    }

    auto n_columns = rows.front().second.size();
    if (n_columns < 2) {
        fail(ErrorCode::malformed_row, "row 1 has fewer than two columns");
    }

    // Header iff the first row has a non-numeric cell outside the label column.
    // For a named label column the header is mandatory.
    bool has_header = false;
    std::size_t label_col = n_columns - 1;
    const auto& first = rows.front().second;
    auto numeric = [](const std::string& cell) {
        double v;
        return parse_double(cell, v);
    };
    switch (label.kind) {
    case LabelColumn::Kind::last:
        break;
    case LabelColumn::Kind::index:
        if (label.index >= n_columns) {
            fail(ErrorCode::invalid_argument, "label column index " + std::to_string(label.index) + " out of range");
        }
        label_col = label.index;
        break;
    case LabelColumn::Kind::named: {
        auto it = std::find(first.begin(), first.end(), label.name);
        if (it == first.end()) {
            fail(ErrorCode::invalid_argument, "no header column named '" + label.name + "'");
        }
        label_col = static_cast<std::size_t>(it - first.begin());
        has_header = true;
        break;
    }
    }
    for (std::size_t c = 0; c < n_columns && !has_header; ++c) {
        if (c != label_col && !numeric(first[c])) {
            has_header = true;
        }
    }

    Dataset data;
    data.n_features = n_columns - 1;
    if (has_header) {
        for (std::size_t c = 0; c < n_columns; ++c) {
            if (c != label_col) {
                data.feature_names.push_back(first[c]);
            }
        }
    }

    std::unordered_map<std::string, int> class_ids;
    for (std::size_t r = has_header ? 1 : 0; r < rows.size(); ++r) {
        const auto& [row_no, cells] = rows[r];
        if (cells.size() != n_columns) {
            fail(ErrorCode::malformed_row, "row " + std::to_string(row_no) + ": expected " + std::to_string(n_columns)
                    + " columns, found " + std::to_string(cells.size()));
        }
        for (std::size_t c = 0; c < n_columns; ++c) {
            if (c == label_col) {
                continue;
            }
            double value = 0.0;
            if (!parse_double(cells[c], value)) {
                fail(ErrorCode::bad_number, "row " + std::to_string(row_no) + ", column " + std::to_string(c + 1)
                        + ": cannot parse '" + cells[c] + "' as a number");
            }
            if (!std::isfinite(value)) {
                fail(ErrorCode::bad_number, "row " + std::to_string(row_no) + ", column " + std::to_string(c + 1)
                        + ": non-finite value");
            }
            data.features.push_back(value);
        }
        const auto& cls = cells[label_col];
        auto [it, inserted] = class_ids.try_emplace(cls, static_cast<int>(class_ids.size()));
        if (inserted) {
            data.class_names.push_back(cls);
        }
        data.labels.push_back(it->second);
    }
    data.n_samples = data.labels.size();
    data.n_classes = class_ids.size();
    if (data.n_samples == 0) {
        fail(ErrorCode::empty_file, "'" + path + "' contains a header but no data rows");
    }
    if (data.n_classes < 2) {
        fail(ErrorCode::single_class, "label column of '" + path + "' has a single distinct value");
    }
    data.validate();
    return data;
}

void write_csv(const Dataset& data, const std::string& path)
{
    std::ofstream out(path);
    if (!out) {
        fail(ErrorCode::io, "cannot write '" + path + "'");
    }
    for (std::size_t f = 0; f < data.n_features; ++f) {
        out << (data.feature_names.empty() ? "f" + std::to_string(f) : data.feature_names[f]) << ',';
    }
    out << "class\n";
    out << std::setprecision(17);
    for (std::size_t i = 0; i < data.n_samples; ++i) {
        for (std::size_t f = 0; f < data.n_features; ++f) {
            out << data.at(i, f) << ',';
        }
        auto label = static_cast<std::size_t>(data.labels[i]);
        out << (data.class_names.empty() ? "c" + std::to_string(label) : data.class_names[label]) << '\n';
    }
    if (!out) {
        fail(ErrorCode::io, "failed writing '" + path + "'");
    }
}

auto FoldPlan::members(std::size_t fold) const -> std::vector<std::size_t>
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (static_cast<std::size_t>(fold_of[i]) == fold) {
            out.push_back(i);
        }
    }
    return out;
}

auto FoldPlan::complement(std::size_t fold) const -> std::vector<std::size_t>
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
        if (static_cast<std::size_t>(fold_of[i]) != fold) {
            out.push_back(i);
        }
    }
    return out;
}

auto stratified_folds(const Dataset& data, std::size_t k, std::uint64_t seed, FoldKind kind) -> FoldPlan
{
    require(k >= 2, "fold count must be at least 2");
    require(k <= data.n_samples, "fold count " + std::to_string(k) + " exceeds sample count "
            + std::to_string(data.n_samples));

    std::vector<std::vector<std::size_t>> by_class(data.n_classes);
    for (std::size_t i = 0; i < data.n_samples; ++i) {
        by_class[static_cast<std::size_t>(data.labels[i])].push_back(i);
    }

    FoldPlan plan;
    plan.n_folds = k;
    plan.kind = kind;
    plan.fold_of.assign(data.n_samples, -1);

    Rng rng(seed);
    std::size_t next_fold = 0;
    for (auto& members : by_class) {
        rng.shuffle(std::span(members));
        for (auto i : members) {
            plan.fold_of[i] = static_cast<int>(next_fold);
            next_fold = (next_fold + 1) % k;
        }
    }
    return plan;
}

auto MinMaxScaler::fit(const Dataset& train) -> MinMaxScaler
{
    require(train.n_samples > 0, "cannot fit a scaler on an empty dataset");
    MinMaxScaler s;
    s.min.assign(train.n_features, 0.0);
    s.max.assign(train.n_features, 0.0);
    for (std::size_t f = 0; f < train.n_features; ++f) {
        s.min[f] = s.max[f] = train.at(0, f);
    }
    for (std::size_t i = 1; i < train.n_samples; ++i) {
        for (std::size_t f = 0; f < train.n_features; ++f) {
            auto v = train.at(i, f);
            s.min[f] = std::min(s.min[f], v);
            s.max[f] = std::max(s.max[f], v);
        }
    }
    return s;
}

auto MinMaxScaler::apply(const Dataset& data, bool clamp) const -> Dataset
{
    require(data.n_features == min.size(), "scaler dimension mismatch");
    Dataset out = data;
    for (std::size_t i = 0; i < data.n_samples; ++i) {
        for (std::size_t f = 0; f < data.n_features; ++f) {
            auto range = max[f] - min[f];
            auto& v = out.features[i * data.n_features + f];
            v = range > 0.0 ? (v - min[f]) / range : 0.0;
            if (clamp) {
                v = std::clamp(v, clamp_low, clamp_high);
            }
        }
    }
    return out;
}

auto minmax_scale_fit_apply(const Dataset& train, std::span<const Dataset> others) -> ScaledSplit
{
    ScaledSplit out;
    out.scaler = MinMaxScaler::fit(train);
    out.train = out.scaler.apply(train, false);
    for (const auto& other : others) {
        out.others.push_back(out.scaler.apply(other, true));
    }
    return out;
}

auto generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) -> SyntheticDataset
{
    require(spec.n_classes >= 2, "synthetic data needs at least two classes");
    require(spec.n_features >= 1, "synthetic data needs at least one feature");
    require(spec.n_informative <= spec.n_features, "more informative features than features");
    require(spec.n_samples >= 2 * spec.n_classes, "need at least two samples per class");
    require(spec.class_shift >= 0.0 && std::isfinite(spec.class_shift), "class shift must be finite and non-negative");

    Rng rng(seed);
    SyntheticDataset out;

    std::vector<std::size_t> all(spec.n_features);
    for (std::size_t f = 0; f < all.size(); ++f) {
        all[f] = f;
    }
    rng.shuffle(std::span(all));
    out.informative.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(spec.n_informative));
    std::sort(out.informative.begin(), out.informative.end());

    std::vector<char> is_informative(spec.n_features, 0);
    for (auto f : out.informative) {
        is_informative[f] = 1;
    }

    auto& d = out.data;
    d.n_samples = spec.n_samples;
    d.n_features = spec.n_features;
    d.n_classes = spec.n_classes;
    d.labels.resize(spec.n_samples);
    for (std::size_t i = 0; i < spec.n_samples; ++i) {
        d.labels[i] = static_cast<int>(i % spec.n_classes);
    }
    rng.shuffle(std::span(d.labels));

    d.features.resize(spec.n_samples * spec.n_features);
    for (std::size_t i = 0; i < spec.n_samples; ++i) {
        auto mean = spec.class_shift * static_cast<double>(d.labels[i]);
        for (std::size_t f = 0; f < spec.n_features; ++f) {
            d.features[i * spec.n_features + f] = rng.normal() + (is_informative[f] ? mean : 0.0);
        }
    }
    for (std::size_t c = 0; c < spec.n_classes; ++c) {
        d.class_names.push_back("c" + std::to_string(c));
    }
    d.validate();
    return out;
}

} // namespace mofs
