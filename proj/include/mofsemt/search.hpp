// SPDX-License-Identifier: Apache-2.0
#ifndef MOFSEMT_SEARCH_HPP
#define MOFSEMT_SEARCH_HPP

#include "mofsemt/individual.hpp"
#include "mofsemt/rng.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace mofs {

using ObjectivePair = std::array<double, 2>;

struct FrontAssignment {
    std::vector<std::size_t> front_of;
    std::size_t n_fronts = 0;
};

// Pareto dominance for minimisation: no worse everywhere, better somewhere.
auto dominates(const ObjectivePair& a, const ObjectivePair& b) -> bool;

// Two-objective non-dominated sorting in O(n log n). Equal vectors share a front.
auto nd_sort(std::span<const ObjectivePair> points) -> FrontAssignment;

// Per-point crowding distance within one front; boundary points are infinite.
auto crowding_distance(std::span<const ObjectivePair> points) -> std::vector<double>;

enum class CompareMode {
    original,   // dominance on (error, feature rate), then error, then feature rate
    auxiliary,  // error, then assistant error, then feature rate
    error_only, // error only
};

enum class Winner { first, second };

auto compare(const ObjectiveVector& a, const ObjectiveVector& b, CompareMode mode) -> Winner;

// Objective pair used for sorting under a comparison mode.
auto sort_pair(const ObjectiveVector& v, CompareMode mode) -> ObjectivePair;

struct Bounds {
    double lower = 0.0;
    double upper = 1.0;
};

inline constexpr double default_phi = 0.1;
inline constexpr double default_eta = 20.0;

struct CsoDraw {
    double r1;
    double r2;
    double r3;
};

// Moves a loser towards the winner and the swarm mean:
//   v <- r1 v + r2 (x_w - x_l) + phi r3 (mean - x_l);  x <- clamp(x + v)
// `draw` supplies fresh coefficients per coordinate.
void cso_update_loser(Individual& loser, const Individual& winner, std::span<const double> mean, double phi,
    Bounds bounds, const std::function<CsoDraw()>& draw);

/**
 * One competitive swarm step on an evaluated population.
 *
 * The population is shuffled and paired consecutively; winners (and an odd
 * leftover) pass unchanged while every loser is moved with its own RNG
 * stream derived from `seed` and the pair index. Losers are left
 * unevaluated. Returns the positions of the losers.
 */
auto cso_step(std::vector<Individual>& pop, CompareMode mode, double phi, Bounds bounds, std::uint64_t seed)
    -> std::vector<std::size_t>;

// Bounded polynomial mutation; each coordinate mutates with probability p_m.
auto polynomial_mutation(std::span<const double> x, double eta, double p_m, Bounds bounds, Rng& rng)
    -> std::vector<double>;

// Normalised error used for admission from the (error, feature rate) front.
enum class NormDirection {
    inverted, // p = 1 - normalised error
    literal,  // p = normalised error
};

struct EliteArchive {
    std::vector<Individual> members;
    std::size_t capacity = 0;
};

/**
 * Rebuilds an elite archive from `pool` (previous members first, then the
 * population). Duplicated selections are dropped, keeping the first.
 * Front-0 members of (error, assistant) are admitted unconditionally, front-0
 * members of (error, feature rate) with probability p, and the lowest-error
 * individual always. Overflow keeps the `capacity` lowest errors.
 */
auto update_elite(std::span<const Individual> pool, std::size_t capacity, NormDirection direction, Rng& rng)
    -> EliteArchive;

// Front-by-front truncation to `n`, splitting the last front by crowding distance.
auto environmental_selection(std::vector<Individual> combined, CompareMode mode, std::size_t n)
    -> std::vector<Individual>;

// Keeps the first occurrence of each selection.
auto dedup_by_selection(std::span<const Individual> pool) -> std::vector<Individual>;

// Mutually non-dominated subset on (error, feature rate), in input order.
auto first_front(std::span<const Individual> pool) -> std::vector<Individual>;

} // namespace mofs

#endif
