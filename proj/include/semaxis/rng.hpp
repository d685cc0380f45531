#pragma once

#include <cstdint>
#include <random>

namespace semaxis {

// All randomized behavior in the library funnels through mt19937_64 with
// manual output mapping. The engine's sequence is pinned by the standard,
// so seeded runs reproduce bit-for-bit across compilers; std::*_distribution
// adapters are implementation-defined and therefore not used.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Mixes a base seed with stream identifiers (epoch, document index, ...)
/// into an independent sub-seed.
inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
    return splitmix64(splitmix64(seed ^ (a * 0x9e3779b97f4a7c15ULL)) ^ b);
}

/// Uniform integer in [0, bound) by rejection; bound must be nonzero.
inline uint64_t uniform_below(std::mt19937_64& rng, uint64_t bound) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t r;
    do {
        r = rng();
    } while (r >= limit);
    return r % bound;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

} // namespace semaxis
