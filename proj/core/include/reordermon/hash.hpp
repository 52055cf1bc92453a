#pragma once

#include <cstdint>

#include "reordermon/model.hpp"

namespace reordermon {

// 64-bit avalanche finalizer (splitmix64).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_prefix(Prefix p, std::uint64_t seed) noexcept;
std::uint64_t hash_flow(const FlowId& f, std::uint64_t seed) noexcept;

/// Derives an independent seed for sub-structure `index` (e.g. an HH stage).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit_interval(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace reordermon
