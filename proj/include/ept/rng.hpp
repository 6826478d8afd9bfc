#pragma once

// Portable random helpers on top of std::mt19937_64. The standard
// distributions are implementation-defined, so everything that feeds a
// reproducible output draws through these instead.

#include <cmath>
#include <cstdint>
#include <random>

namespace ept {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent stream seed for (seed, a, b), e.g. (run seed, grid point, replica).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

/// Uniform in [0, 1).
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n), n > 0. Rejection keeps it unbiased.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline bool bernoulli(Rng& rng, double p) {
    return uniform01(rng) < p;
}

/// Geometric on {0, 1, 2, ...} with the given mean (success prob 1/(1+mean)).
inline std::uint64_t geometric0(Rng& rng, double mean) {
    if (mean <= 0.0) return 0;
    const double q = 1.0 / (1.0 + mean);
    const double u = 1.0 - uniform01(rng);  // (0, 1]
    return static_cast<std::uint64_t>(std::floor(std::log(u) / std::log1p(-q)));
}

}  // namespace ept
