#pragma once

// Counter-based random numbers (Philox4x32-10). A draw is a pure function of
// (key, counter), so results do not depend on traversal or thread order.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace arborwalk::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

namespace detail {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53U;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57U;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9U;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85U;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

}  // namespace detail

inline Counter philox4x32(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        detail::mulhilo(detail::kPhiloxM0, ctr[0], hi0, lo0);
        detail::mulhilo(detail::kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += detail::kPhiloxW0;
        key[1] += detail::kPhiloxW1;
    }
    return ctr;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline Key make_key(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Two independent doubles in [0, 1) for counter (hi, lo) under the seed.
inline std::array<double, 2> uniform_pair(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo) {
    const Counter out = philox4x32(
        {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(lo >> 32),
         static_cast<std::uint32_t>(hi), static_cast<std::uint32_t>(hi >> 32)},
        make_key(seed));
    const std::uint64_t a = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    constexpr double kScale = 0x1.0p-53;
    return {static_cast<double>(a >> 11) * kScale, static_cast<double>(b >> 11) * kScale};
}

inline double uniform(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo) {
    return uniform_pair(seed, hi, lo)[0];
}

/// Standard normal pair by Box-Muller.
inline std::array<double, 2> normal_pair(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo) {
    const auto u = uniform_pair(seed, hi, lo);
    const double radius = std::sqrt(-2.0 * std::log(1.0 - u[0]));
    const double angle = 2.0 * std::numbers::pi * u[1];
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

/// Seed for realization `index` of a Monte Carlo run with base seed `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace arborwalk::rng
