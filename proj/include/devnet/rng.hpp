#pragma once
// Draws built directly on mt19937_64. std::uniform_int_distribution and
// std::shuffle are implementation-defined, which would break frozen outputs;
// these are pinned by this code plus the standard-mandated mt19937_64 stream.

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace devnet {

/// Unbiased draw from [0, n). n must be >= 1.
inline std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t overflow = (std::numeric_limits<std::uint64_t>::max() % n + 1) % n;
  std::uint64_t r = rng();
  if (overflow != 0) {
    const std::uint64_t bound = 0 - overflow;  // largest multiple of n, mod 2^64
    while (r >= bound) r = rng();
  }
  return r % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename T>
void seeded_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(bounded_draw(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace devnet
