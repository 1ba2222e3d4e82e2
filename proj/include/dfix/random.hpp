// Seeding and sampling helpers shared by the generators and the experiment
// runner. Standard-library distributions are implementation-defined, so the
// few draws we need are spelled out here to keep traces reproducible
// bit-for-bit.
#pragma once

#include <cstdint>
#include <random>

namespace dfix::rnd {

/// Stateless 64-bit mixer (splitmix64 finalizer).
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from (seed, index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return mix64(seed ^ mix64(index));
}

/// Uniform draw from the open interval (0,1), using the top 53 bits.
inline double uniform_open01(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1p-53;
}

/// Uniform draw from [0, bound) without modulo bias. bound must be > 0.
inline std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return x % bound;
}

}  // namespace dfix::rnd
