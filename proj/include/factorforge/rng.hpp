#pragma once

#include <cmath>
#include <cstdint>

namespace factorforge::rng {

// Counter-based generator: every variate is a pure function of
// (seed, stream, hi, lo), so any draw can be produced independently and in
// any order. Box sampling keys with stream = category index; other consumers
// use the stream constants below.

inline constexpr std::uint64_t kStreamBaselineNoise = 0x62617365756c6b31ULL;
inline constexpr std::uint64_t kStreamModelWeights = 0x6d6f64656c777431ULL;

constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                     std::uint64_t hi, std::uint64_t lo) {
    std::uint64_t h = mix64(seed ^ 0x9e3779b97f4a7c15ULL);
    h = mix64(h ^ stream);
    h = mix64(h ^ hi);
    h = mix64(h ^ lo);
    return h;
}

/// Uniform on [0, 1): top 53 bits of the hash.
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t hi, std::uint64_t lo) {
    return static_cast<double>(counter_hash(seed, stream, hi, lo) >> 11) * 0x1.0p-53;
}

/// Uniform on the closed interval [lo_value, hi_value]. u = 0 attains the
/// minimum; the maximum is reached only when the interval is degenerate or by
/// rounding. Clamped so containment holds under <= comparisons.
inline double uniform_in(double lo_value, double hi_value, std::uint64_t seed,
                         std::uint64_t stream, std::uint64_t hi, std::uint64_t lo) {
    const double u = uniform01(seed, stream, hi, lo);
    double v = lo_value + u * (hi_value - lo_value);
    if (v < lo_value)
        v = lo_value;
    if (v > hi_value)
        v = hi_value;
    return v;
}

/// Standard normal via Box-Muller on two counter draws; variate `index` uses
/// counters (hi, 2*index) and (hi, 2*index + 1).
inline double normal(std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t hi, std::uint64_t index) {
    const double u1 = uniform01(seed, stream, hi, 2 * index);
    const double u2 = uniform01(seed, stream, hi, 2 * index + 1);
    // 1 - u1 lies in (0, 1], so the log is finite
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(6.283185307179586476925286766559 * u2);
}

} // namespace factorforge::rng
