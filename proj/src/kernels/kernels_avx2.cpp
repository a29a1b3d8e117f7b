// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

// AVX2 backend. Four vector lanes map 1:1 onto the contract's accumulator
// lanes (main loop runs on 4-aligned offsets, so vector lane j always holds
// index class j). Multiply and add stay separate instructions: vfmadd would
// round once instead of twice and break cross-backend equality.

#include <immintrin.h>

#include <cstring>
#include <limits>

#include "kernels_impl.hpp"

namespace fbgi::kernels::detail {
namespace {

inline __m256d load_mask4(const std::uint8_t* m) {
  std::uint32_t packed;
  std::memcpy(&packed, m, 4);
  __m128i bytes = _mm_cvtsi32_si128(static_cast<int>(packed));
  return _mm256_cvtepi32_pd(_mm_cvtepu8_epi32(bytes));
}

inline double reduce_sum(__m256d v, const double* tail, std::size_t tail_from,
                         std::size_t n) {
  double l[4];
  _mm256_storeu_pd(l, v);
  for (std::size_t i = tail_from; i < n; ++i) l[i & 3] += tail[i];
  return combine_sum_lanes(l);
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  return reduce_sum(acc, x, i, n);
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_add_pd(acc, p);
  }
  double l[4];
  _mm256_storeu_pd(l, acc);
  for (; i < n; ++i) l[i & 3] += a[i] * b[i];
  return combine_sum_lanes(l);
}

double masked_sum_avx2(const double* x, const std::uint8_t* mask,
                       std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(_mm256_loadu_pd(x + i), load_mask4(mask + i));
    acc = _mm256_add_pd(acc, p);
  }
  double l[4];
  _mm256_storeu_pd(l, acc);
  for (; i < n; ++i) l[i & 3] += x[i] * static_cast<double>(mask[i]);
  return combine_sum_lanes(l);
}

void masked_accumulate_avx2(double* acc, const std::uint8_t* mask,
                            double alpha, std::size_t n) {
  __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d p = _mm256_mul_pd(va, load_mask4(mask + i));
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), p));
  }
  for (; i < n; ++i) acc[i] += alpha * static_cast<double>(mask[i]);
}

void minmax_avx2(const double* x, std::size_t n, double* out_min,
                 double* out_max) {
  __m256d vlo = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d vhi = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    vlo = _mm256_min_pd(v, vlo);  // (x < acc ? x : acc), as in the scalar path
    vhi = _mm256_max_pd(v, vhi);
  }
  double lo[4], hi[4];
  _mm256_storeu_pd(lo, vlo);
  _mm256_storeu_pd(hi, vhi);
  for (; i < n; ++i) {
    lo[i & 3] = pick_min(x[i], lo[i & 3]);
    hi[i & 3] = pick_max(x[i], hi[i & 3]);
  }
  *out_min = pick_min(pick_min(lo[0], lo[1]), pick_min(lo[2], lo[3]));
  *out_max = pick_max(pick_max(hi[0], hi[1]), pick_max(hi[2], hi[3]));
}

}  // namespace

const KernelTable avx2_table = {
    sum_avx2, dot_avx2, masked_sum_avx2, masked_accumulate_avx2, minmax_avx2};

}  // namespace fbgi::kernels::detail
