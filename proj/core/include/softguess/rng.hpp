#pragma once

#include <cstdint>

namespace softguess {

/// SplitMix64 finaliser; a bijective 64-bit mixer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for trial `trial_id` of a run seeded with `seed`, optionally split
/// into independent sub-streams. Depends only on its arguments, never on
/// execution order.
constexpr std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial_id,
                                   std::uint64_t stream = 0) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ trial_id) ^ stream);
}

}  // namespace softguess
