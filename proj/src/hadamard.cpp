// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include "fbgi/hadamard.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace fbgi::mask {

namespace {

bool power_of_two(long long v) { return v >= 1 && (v & (v - 1)) == 0; }

}  // namespace

HadamardMatrix hadamard_matrix(int order) {
  if (!power_of_two(order))
    throw std::invalid_argument("hadamard_matrix: order " +
                                std::to_string(order) +
                                " is not a power of two");
  HadamardMatrix h;
  h.order = order;
  h.data.assign(static_cast<std::size_t>(order) * order, 1);
  // Sylvester doubling: H(2m) = [H H; H -H], grown in place.
  for (int m = 1; m < order; m *= 2) {
    for (int r = 0; r < m; ++r) {
      for (int c = 0; c < m; ++c) {
        std::int8_t v = h.data[static_cast<std::size_t>(r) * order + c];
        h.data[static_cast<std::size_t>(r) * order + (c + m)] = v;
        h.data[static_cast<std::size_t>(r + m) * order + c] = v;
        h.data[static_cast<std::size_t>(r + m) * order + (c + m)] =
            static_cast<std::int8_t>(-v);
      }
    }
  }
  return h;
}

SMatrix s_matrix(int order) {
  if (order < 1 || !power_of_two(static_cast<long long>(order) + 1))
    throw std::invalid_argument("s_matrix: order " + std::to_string(order) +
                                " + 1 is not a power of two");
  HadamardMatrix h = hadamard_matrix(order + 1);
  SMatrix s;
  s.order = order;
  s.data.resize(static_cast<std::size_t>(order) * order);
  for (int r = 0; r < order; ++r)
    for (int c = 0; c < order; ++c)
      s.data[static_cast<std::size_t>(r) * order + c] =
          h.at(r + 1, c + 1) < 0 ? 1 : 0;
  return s;
}

Rational hadamard_block_contrast(int block_width) {
  if (block_width < 1)
    throw std::invalid_argument("hadamard_block_contrast: block width must be >= 1");
  long long n = block_width;
  long long num = 1 + n;
  long long den = 1 + n * (2 * n - 5);
  if (den == 0)
    throw std::domain_error("hadamard_block_contrast: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  return Rational{num / g, den / g};
}

}  // namespace fbgi::mask
