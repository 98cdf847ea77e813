#pragma once

#include <cstdint>

namespace aoi::detail {

// splitmix64 finalizer over packed inputs; stable across platforms and runs.
inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b = 0) {
  std::uint64_t x = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double uniform_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace aoi::detail
