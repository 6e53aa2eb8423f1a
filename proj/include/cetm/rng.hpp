#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace cetm {

// All randomness flows through mt19937_64 plus the explicit draw routines
// below, so a (seed, stream) pair reproduces the same sequence on any
// platform with the same libm. Generator name reported in run outputs.
using RandomEngine = std::mt19937_64;

inline constexpr const char* kGeneratorName = "mt19937_64";

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic sub-seed for an independent stream of draws.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream));
}

inline RandomEngine make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    return RandomEngine(derive_seed(seed, stream));
}

// Uniform in [0, 1) with 53-bit resolution.
inline double uniform01(RandomEngine& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(RandomEngine& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Knuth's product method; adequate for the arrival rates used here.
inline int draw_poisson(RandomEngine& rng, double lambda) {
    if (lambda <= 0.0) return 0;
    const double limit = std::exp(-lambda);
    int count = -1;
    double prod = 1.0;
    do {
        prod *= uniform01(rng);
        ++count;
    } while (prod > limit);
    return count;
}

// Box-Muller, cosine branch.
inline double draw_normal(RandomEngine& rng) {
    double u1 = uniform01(rng);
    while (u1 <= 0.0) u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

inline double draw_lognormal(RandomEngine& rng, double mu, double sigma2) {
    return std::exp(mu + std::sqrt(sigma2) * draw_normal(rng));
}

}  // namespace cetm
