#pragma once

#include <cstdint>
#include <random>

namespace expclass::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Independent generator for one Monte Carlo stream, keyed by (seed, ids...).
// Streams are reproducible and order-independent, so replicates may run in
// any order or in parallel without changing results.
inline std::mt19937_64 stream(std::uint64_t seed, std::uint64_t a = 0, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
    std::uint64_t s = seed;
    splitmix64(s);
    s ^= a;
    splitmix64(s);
    s ^= b;
    splitmix64(s);
    s ^= c;
    return std::mt19937_64(splitmix64(s));
}

// Uniform draw in the open interval (0,1); never returns 0 or 1.
inline double uniform01(std::mt19937_64& gen) {
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
}

inline double normal(std::mt19937_64& gen) {
    std::normal_distribution<double> nd;
    return nd(gen);
}

}  // namespace expclass::rng
