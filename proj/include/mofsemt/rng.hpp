// SPDX-License-Identifier: Apache-2.0
#ifndef MOFSEMT_RNG_HPP
#define MOFSEMT_RNG_HPP

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>

namespace mofs {

// Mix a base seed with a list of tags into an independent stream seed.
// Used to give every (task, generation, purpose) its own stream so that
// results do not depend on execution order.
auto derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) -> std::uint64_t;

// xoshiro256** seeded through splitmix64. All draws are defined bit-for-bit
// by this class, independent of the standard library implementation.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    auto next_u64() -> std::uint64_t;
    // Uniform in [0, 1) with 53 random bits.
    auto uniform() -> double;
    auto uniform(double lo, double hi) -> double { return lo + (hi - lo) * uniform(); }
    // Uniform in [0, n); n > 0.
    auto index(std::size_t n) -> std::size_t;
    auto normal() -> double;

    template <typename T>
    void shuffle(std::span<T> values)
    {
        for (std::size_t i = values.size(); i > 1; --i) {
            auto j = index(i);
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::uint64_t s_[4];
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace mofs

#endif
