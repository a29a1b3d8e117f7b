// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

// Reference backend. Written directly against the 4-lane contract; the
// vector backends must reproduce these results bit for bit.

#include <limits>

#include "kernels_impl.hpp"

namespace fbgi::kernels::detail {
namespace {

double sum_scalar(const double* x, std::size_t n) {
  double l[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) l[i & 3] += x[i];
  return combine_sum_lanes(l);
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double l[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) l[i & 3] += a[i] * b[i];
  return combine_sum_lanes(l);
}

double masked_sum_scalar(const double* x, const std::uint8_t* mask,
                         std::size_t n) {
  double l[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i)
    l[i & 3] += x[i] * static_cast<double>(mask[i]);
  return combine_sum_lanes(l);
}

void masked_accumulate_scalar(double* acc, const std::uint8_t* mask,
                              double alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    acc[i] += alpha * static_cast<double>(mask[i]);
}

void minmax_scalar(const double* x, std::size_t n, double* out_min,
                   double* out_max) {
  double lo[4], hi[4];
  for (int j = 0; j < 4; ++j) {
    lo[j] = std::numeric_limits<double>::infinity();
    hi[j] = -std::numeric_limits<double>::infinity();
  }
  for (std::size_t i = 0; i < n; ++i) {
    lo[i & 3] = pick_min(x[i], lo[i & 3]);
    hi[i & 3] = pick_max(x[i], hi[i & 3]);
  }
  *out_min = pick_min(pick_min(lo[0], lo[1]), pick_min(lo[2], lo[3]));
  *out_max = pick_max(pick_max(hi[0], hi[1]), pick_max(hi[2], hi[3]));
}

}  // namespace

const KernelTable scalar_table = {
    sum_scalar, dot_scalar, masked_sum_scalar, masked_accumulate_scalar,
    minmax_scalar};

}  // namespace fbgi::kernels::detail
