// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FBGI_KERNELS_IMPL_HPP
#define FBGI_KERNELS_IMPL_HPP

#include <cstddef>
#include <cstdint>

namespace fbgi::kernels::detail {

struct KernelTable {
  double (*sum)(const double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*masked_sum)(const double*, const std::uint8_t*, std::size_t);
  void (*masked_accumulate)(double*, const std::uint8_t*, double, std::size_t);
  void (*minmax)(const double*, std::size_t, double*, double*);
};

extern const KernelTable scalar_table;

#if defined(FBGI_HAVE_AVX2)
extern const KernelTable avx2_table;
#endif
#if defined(FBGI_HAVE_NEON)
extern const KernelTable neon_table;
#endif

// Lane combination shared by all backends; see the contract in kernels.hpp.
inline double combine_sum_lanes(const double l[4]) {
  return (l[0] + l[1]) + (l[2] + l[3]);
}
inline double pick_min(double a, double b) { return a < b ? a : b; }
inline double pick_max(double a, double b) { return a > b ? a : b; }

}  // namespace fbgi::kernels::detail

#endif
