// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

// NEON backend. Two 2-wide vectors stand in for the contract's four lanes
// (pair 0 holds classes 0,1; pair 1 holds classes 2,3). vminq/vmaxq follow
// IEEE minNum semantics which differ from the contract on signed zeros, so
// min/max go through explicit compare+select instead.

#include <arm_neon.h>

#include <limits>

#include "kernels_impl.hpp"

namespace fbgi::kernels::detail {
namespace {

double sum_neon(const double* x, std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0);
  float64x2_t a23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a01 = vaddq_f64(a01, vld1q_f64(x + i));
    a23 = vaddq_f64(a23, vld1q_f64(x + i + 2));
  }
  double l[4];
  vst1q_f64(l, a01);
  vst1q_f64(l + 2, a23);
  for (; i < n; ++i) l[i & 3] += x[i];
  return combine_sum_lanes(l);
}

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0);
  float64x2_t a23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a01 = vaddq_f64(a01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
    a23 = vaddq_f64(a23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
  }
  double l[4];
  vst1q_f64(l, a01);
  vst1q_f64(l + 2, a23);
  for (; i < n; ++i) l[i & 3] += a[i] * b[i];
  return combine_sum_lanes(l);
}

double masked_sum_neon(const double* x, const std::uint8_t* mask,
                       std::size_t n) {
  float64x2_t a01 = vdupq_n_f64(0.0);
  float64x2_t a23 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    double md[4] = {static_cast<double>(mask[i]),
                    static_cast<double>(mask[i + 1]),
                    static_cast<double>(mask[i + 2]),
                    static_cast<double>(mask[i + 3])};
    a01 = vaddq_f64(a01, vmulq_f64(vld1q_f64(x + i), vld1q_f64(md)));
    a23 = vaddq_f64(a23, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(md + 2)));
  }
  double l[4];
  vst1q_f64(l, a01);
  vst1q_f64(l + 2, a23);
  for (; i < n; ++i) l[i & 3] += x[i] * static_cast<double>(mask[i]);
  return combine_sum_lanes(l);
}

void masked_accumulate_neon(double* acc, const std::uint8_t* mask,
                            double alpha, std::size_t n) {
  float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    double md[4] = {static_cast<double>(mask[i]),
                    static_cast<double>(mask[i + 1]),
                    static_cast<double>(mask[i + 2]),
                    static_cast<double>(mask[i + 3])};
    vst1q_f64(acc + i,
              vaddq_f64(vld1q_f64(acc + i), vmulq_f64(va, vld1q_f64(md))));
    vst1q_f64(acc + i + 2, vaddq_f64(vld1q_f64(acc + i + 2),
                                     vmulq_f64(va, vld1q_f64(md + 2))));
  }
  for (; i < n; ++i) acc[i] += alpha * static_cast<double>(mask[i]);
}

inline float64x2_t select_min(float64x2_t x, float64x2_t acc) {
  return vbslq_f64(vcltq_f64(x, acc), x, acc);
}
inline float64x2_t select_max(float64x2_t x, float64x2_t acc) {
  return vbslq_f64(vcgtq_f64(x, acc), x, acc);
}

void minmax_neon(const double* x, std::size_t n, double* out_min,
                 double* out_max) {
  float64x2_t lo01 = vdupq_n_f64(std::numeric_limits<double>::infinity());
  float64x2_t lo23 = lo01;
  float64x2_t hi01 = vdupq_n_f64(-std::numeric_limits<double>::infinity());
  float64x2_t hi23 = hi01;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t v01 = vld1q_f64(x + i);
    float64x2_t v23 = vld1q_f64(x + i + 2);
    lo01 = select_min(v01, lo01);
    lo23 = select_min(v23, lo23);
    hi01 = select_max(v01, hi01);
    hi23 = select_max(v23, hi23);
  }
  double lo[4], hi[4];
  vst1q_f64(lo, lo01);
  vst1q_f64(lo + 2, lo23);
  vst1q_f64(hi, hi01);
  vst1q_f64(hi + 2, hi23);
  for (; i < n; ++i) {
    lo[i & 3] = pick_min(x[i], lo[i & 3]);
    hi[i & 3] = pick_max(x[i], hi[i & 3]);
  }
  *out_min = pick_min(pick_min(lo[0], lo[1]), pick_min(lo[2], lo[3]));
  *out_max = pick_max(pick_max(hi[0], hi[1]), pick_max(hi[2], hi[3]));
}

}  // namespace

const KernelTable neon_table = {
    sum_neon, dot_neon, masked_sum_neon, masked_accumulate_neon, minmax_neon};

}  // namespace fbgi::kernels::detail
