// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#ifndef FBGI_HADAMARD_HPP
#define FBGI_HADAMARD_HPP

#include <cstdint>
#include <vector>

namespace fbgi::mask {

// Sylvester-type Hadamard matrix, entries +1/-1, order a power of two.
struct HadamardMatrix {
  int order = 0;
  std::vector<std::int8_t> data;  // row-major, order*order entries

  std::int8_t at(int r, int c) const { return data[static_cast<std::size_t>(r) * order + c]; }
};

// S-matrix of order N (N+1 a power of two): drop the all-ones first row and
// column of the normalized Hadamard matrix of order N+1, then map -1 -> 1 and
// +1 -> 0. Each row carries (N+1)/2 ones. Symmetric for this construction.
struct SMatrix {
  int order = 0;
  std::vector<std::uint8_t> data;  // row-major, order*order entries, 0/1

  std::uint8_t at(int r, int c) const { return data[static_cast<std::size_t>(r) * order + c]; }
  int ones_per_row() const { return (order + 1) / 2; }
};

HadamardMatrix hadamard_matrix(int order);
SMatrix s_matrix(int order);

// Exact rational value, reduced, denominator > 0.
struct Rational {
  long long num = 0;
  long long den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Differential-contrast figure (1 + N) / (1 + N * (2N - 5)) for a block of
// width N, as an exact fraction.
Rational hadamard_block_contrast(int block_width);

}  // namespace fbgi::mask

#endif
