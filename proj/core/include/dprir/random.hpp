#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dprir {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent sub-stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seed for the named sub-stream `name` of run `run_id` under a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view name,
                                    std::uint64_t run_id = 0) noexcept {
  return mix64(mix64(seed ^ fnv1a64(name)) + run_id);
}

inline Rng make_stream(std::uint64_t seed, std::string_view name, std::uint64_t run_id = 0) {
  return Rng(derive_seed(seed, name, run_id));
}

}  // namespace dprir
