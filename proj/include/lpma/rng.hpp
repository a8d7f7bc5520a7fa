#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "lpma/ring.hpp"

namespace lpma {

/// SplitMix64 finalizer; used to derive independent per-trial streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic substream for one Monte Carlo trial: results depend only
/// on (seed, stream), never on worker scheduling.
inline std::mt19937_64 substream_rng(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 0x51a2b3c4d5e6f708ULL)));
}

/// Uniform double in (0, 1]; never zero so it is safe under log().
inline double uniform_unit(std::mt19937_64& g) {
    return (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53;
}

/// Uniform integer in [0, n) by rejection; exact and portable.
inline std::uint64_t uniform_below(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = g();
    while (x >= limit) x = g();
    return x % n;
}

/// Circularly symmetric complex Gaussian with E|z|^2 = variance (Box-Muller).
inline ComplexSample complex_normal(std::mt19937_64& g, double variance) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    double u1 = uniform_unit(g);
    double u2 = uniform_unit(g);
    double radius = std::sqrt(-std::log(u1) * variance);
    double angle = two_pi * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace lpma
