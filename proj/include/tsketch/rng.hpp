#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace tsketch::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

/// splitmix64 finalizer: bijective integer mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Counter-based word: element `counter` of the splitmix64 stream seeded at
/// `seed`. Pure integer arithmetic, identical on every platform and thread
/// schedule.
inline std::uint64_t counter_word(std::uint64_t seed, std::uint64_t counter) {
    return mix64(seed + kGolden * (counter + 1));
}

/// Uniform in [0, 1) from the top 53 bits of counter_word.
inline double per_entry_uniform(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>(counter_word(seed, index) >> 11) * 0x1.0p-53;
}

/// Uniform in (0, 1]; used where log() must not see zero.
inline double uniform_open(std::uint64_t seed, std::uint64_t index) {
    return static_cast<double>((counter_word(seed, index) >> 11) + 1) * 0x1.0p-53;
}

/// Box-Muller pair of independent standard normals at `pair_index`.
inline std::pair<double, double> gaussian_pair(std::uint64_t seed, std::uint64_t pair_index) {
    const double u1 = uniform_open(seed, 2 * pair_index);
    const double u2 = per_entry_uniform(seed, 2 * pair_index + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

/// Single standard normal at `index` (first of the pair).
inline double gaussian(std::uint64_t seed, std::uint64_t index) {
    return gaussian_pair(seed, index).first;
}

/// Independent stream seed derived from (seed, tag): seed XOR tag fed through
/// the mixer. The product HOSVD estimator derives its two child sketch seeds
/// with tags kChildSketch1/2.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return mix64(seed ^ tag);
}

inline constexpr std::uint64_t kChildSketch1 = 0xA5C1D0F1E2B3A4D5ull;
inline constexpr std::uint64_t kChildSketch2 = 0x5A3E0D2C1B4F6E87ull;

}  // namespace tsketch::rng
