// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FBGI_KERNELS_HPP
#define FBGI_KERNELS_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace fbgi::kernels {

// Every backend implements one fixed summation contract so results are
// bit-identical no matter which backend runs:
//
//   - reductions keep four accumulator lanes; element i belongs to lane i%4
//   - each product is rounded once before accumulation (no FMA)
//   - lanes combine as (l0 + l1) + (l2 + l3)
//   - min/max select with (a < b ? a : b) / (a > b ? a : b), lane-wise,
//     then combine lanes in the same (0,1),(2,3) order
//
// All kernel translation units must be built with FP contraction off.

enum class Backend { scalar, avx2, neon };

// Best available backend is chosen at first use; FBGI_KERNELS=scalar|avx2|neon
// overrides the choice if that backend is usable on this CPU.
Backend active_backend();
bool set_backend(Backend b);  // false (and no change) if unsupported here
std::string_view backend_name(Backend b);

double sum(const double* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);

// Sum of x[i] over indices where mask[i] != 0. Mask bytes are 0 or 1.
double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n);

// acc[i] += alpha * mask[i] for all i.
void masked_accumulate(double* acc, const std::uint8_t* mask, double alpha,
                       std::size_t n);

struct MinMax {
  double min;
  double max;
};

// n == 0 yields {+inf, -inf}.
MinMax minmax(const double* x, std::size_t n);

}  // namespace fbgi::kernels

#endif
