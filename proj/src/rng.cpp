// SPDX-License-Identifier: Apache-2.0
#include "mofsemt/rng.hpp"

#include <cmath>
#include <numbers>

namespace mofs {

namespace {
    auto splitmix64(std::uint64_t& state) -> std::uint64_t
    {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30U)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27U)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31U);
    }

    constexpr auto rotl(std::uint64_t x, int k) -> std::uint64_t { return (x << k) | (x >> (64 - k)); }
} // namespace

auto derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) -> std::uint64_t
{
    std::uint64_t state = base;
    auto h = splitmix64(state);
    for (auto tag : tags) {
        state = h ^ (tag + 0x632be59bd9b4e019ULL);
        h = splitmix64(state);
    }
    return h;
}

Rng::Rng(std::uint64_t seed)
{
    auto state = seed;
    for (auto& word : s_) {
        word = splitmix64(state);
    }
}

auto Rng::next_u64() -> std::uint64_t
{
    auto result = rotl(s_[1] * 5, 7) * 9;
    auto t = s_[1] << 17U;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

auto Rng::uniform() -> double
{
    return static_cast<double>(next_u64() >> 11U) * 0x1.0p-53;
}

auto Rng::index(std::size_t n) -> std::size_t
{
    // Rejection sampling keeps the draw unbiased for any n.
    auto bound = static_cast<std::uint64_t>(n);
    auto limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return static_cast<std::size_t>(x % bound);
}

auto Rng::normal() -> double
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    auto u2 = uniform();
    auto radius = std::sqrt(-2.0 * std::log(u1));
    auto angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

} // namespace mofs
