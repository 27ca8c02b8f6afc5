#pragma once

/**
 * Counter-based deterministic random values.
 *
 * Every draw is a pure function of (seed, stream, i, j), so generated
 * datasets are independent of iteration order and reproducible from the
 * seed alone. The construction is the splitmix64 finalizer applied to a
 * running hash of the key words; reimplementations in other languages
 * only need 64-bit unsigned arithmetic. See README "Random numbers" for
 * the normative description.
 */

#include <cstdint>

namespace triage::rng {

inline constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t key_bits(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t i = 0, std::uint64_t j = 0) {
    std::uint64_t h = seed;
    h = mix64(h + kGamma * (stream + 1));
    h = mix64(h + kGamma * (i + 1));
    h = mix64(h + kGamma * (j + 1));
    return h;
}

// Uniform in [0,1), 53-bit resolution.
constexpr double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform strictly inside (0,1); safe as input to quantile functions.
constexpr double uniform01_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal quantile. Acklam's rational approximation polished
// with one Newton step against erfc; |error| is at the last-few-ulps
// level over (0,1).
double normal_quantile(double u);

}  // namespace triage::rng
