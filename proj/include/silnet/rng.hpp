#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

// Seeding and sampling primitives shared by every stochastic component.
//
// Streams are derived, never shared: a replicate's engine is seeded from
// mix(master_seed, scenario_hash, replicate) and k-means restarts from
// mix(seed, K). Conversions to doubles and indices are done here rather
// than through <random> distributions, whose output is implementation
// defined, so a given seed produces the same graph on every toolchain.

namespace silnet::rng {

/// Identifies the engine + derivation scheme; echoed in suite manifests.
inline constexpr std::string_view kGeneratorId = "mt19937_64/splitmix64-derive/v1";

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive(std::uint64_t parent, std::uint64_t child) noexcept {
    return splitmix64(splitmix64(parent) ^ (child + 0x632BE59BD9B4E019ULL));
}

/// FNV-1a, 64 bit.
constexpr std::uint64_t hash_string(std::string_view s) noexcept {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// Uniform on [0, 1) with 53 bits of precision.
inline double uniform01(Engine& e) {
    return static_cast<double>(e() >> 11) * 0x1.0p-53;
}

/// Uniform on [lo, hi]; lo == hi returns lo without touching the engine's
/// distribution shape (one draw is still consumed).
inline double uniform(Engine& e, double lo, double hi) {
    return lo + (hi - lo) * uniform01(e);
}

/// Uniform on {0, ..., n-1}. Requires n > 0.
inline std::size_t uniform_index(Engine& e, std::size_t n) {
    auto i = static_cast<std::size_t>(uniform01(e) * static_cast<double>(n));
    return i < n ? i : n - 1;
}

} // namespace silnet::rng
