// Seedable, splittable random streams.

#pragma once

#include <cstdint>
#include <random>

namespace polygen {

inline constexpr const char* kRngName = "mt19937_64/splitmix64-streams";

std::uint64_t splitmix64(std::uint64_t& state);

/// Engine for stream `stream` of a run seeded with `seed`; streams are independent
/// of each other and of how work is divided between threads.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

/// Uniform integer in [0, n), n > 0, by rejection; identical on every platform.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n);

}  // namespace polygen
