// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FBGI_RNG_HPP
#define FBGI_RNG_HPP

#include <cstdint>

namespace fbgi::rng {

// Counter-based generator: every draw is a pure function of (seed, stream,
// counter), so runs are reproducible regardless of evaluation order and the
// same draw can be re-derived anywhere. Mixing is the splitmix64 finalizer.

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t draw_u64(std::uint64_t seed, std::uint64_t stream,
                              std::uint64_t counter) {
  return mix64(mix64(mix64(seed) ^ stream) ^ counter);
}

// Uniform in [0, 1): top 53 bits scaled by 2^-53.
inline double draw_uniform01(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
  return static_cast<double>(draw_u64(seed, stream, counter) >> 11) * 0x1.0p-53;
}

}  // namespace fbgi::rng

#endif
