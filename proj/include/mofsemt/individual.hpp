// SPDX-License-Identifier: Apache-2.0
#ifndef MOFSEMT_INDIVIDUAL_HPP
#define MOFSEMT_INDIVIDUAL_HPP

#include <cstddef>
#include <optional>
#include <vector>

namespace mofs {

/// Objectives are all minimised and lie in [0, 1].
struct ObjectiveVector {
    double error_rate = 1.0;
    double feature_rate = 0.0;
    double assistant_error = 1.0;

    // Score of an empty feature subset.
    static constexpr auto empty_selection() -> ObjectiveVector { return {1.0, 0.0, 1.0}; }

    friend auto operator==(const ObjectiveVector&, const ObjectiveVector&) -> bool = default;
};

// Which features of the kept set a solution selects.
using Selection = std::vector<bool>;

struct Individual {
    std::vector<double> task_repr;
    std::vector<double> full_repr;
    std::vector<double> velocity;
    std::optional<ObjectiveVector> objectives;
    Selection selection;
    std::size_t task_id = 0;

    [[nodiscard]] auto evaluated() const -> bool { return objectives.has_value(); }
    [[nodiscard]] auto n_selected() const -> std::size_t;
    // Valid only when evaluated.
    [[nodiscard]] auto obj() const -> const ObjectiveVector& { return *objectives; }
};

inline auto Individual::n_selected() const -> std::size_t
{
    std::size_t n = 0;
    for (bool b : selection) {
        n += b ? 1 : 0;
    }
    return n;
}

} // namespace mofs

#endif
