// Copyright (C) 2026 fbgi authors
// SPDX-License-Identifier: Apache-2.0

#include "fbgi/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace fbgi::kernels {
namespace {

using detail::KernelTable;

bool backend_usable(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(FBGI_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::neon:
#if defined(FBGI_HAVE_NEON)
      return true;  // baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::scalar:
      return &detail::scalar_table;
#if defined(FBGI_HAVE_AVX2)
    case Backend::avx2:
      return &detail::avx2_table;
#endif
#if defined(FBGI_HAVE_NEON)
    case Backend::neon:
      return &detail::neon_table;
#endif
    default:
      return &detail::scalar_table;
  }
}

Backend default_backend() {
  if (const char* env = std::getenv("FBGI_KERNELS")) {
    Backend want = Backend::scalar;
    bool known = true;
    if (std::strcmp(env, "scalar") == 0)
      want = Backend::scalar;
    else if (std::strcmp(env, "avx2") == 0)
      want = Backend::avx2;
    else if (std::strcmp(env, "neon") == 0)
      want = Backend::neon;
    else
      known = false;
    if (known && backend_usable(want)) return want;
  }
  if (backend_usable(Backend::avx2)) return Backend::avx2;
  if (backend_usable(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

struct Dispatch {
  std::atomic<Backend> backend;
  std::atomic<const KernelTable*> table;
  Dispatch() {
    Backend b = default_backend();
    backend.store(b, std::memory_order_relaxed);
    table.store(table_for(b), std::memory_order_relaxed);
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

const KernelTable& active_table() {
  return *dispatch().table.load(std::memory_order_relaxed);
}

}  // namespace

Backend active_backend() {
  return dispatch().backend.load(std::memory_order_relaxed);
}

bool set_backend(Backend b) {
  if (!backend_usable(b)) return false;
  dispatch().backend.store(b, std::memory_order_relaxed);
  dispatch().table.store(table_for(b), std::memory_order_relaxed);
  return true;
}

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "scalar";
}

double sum(const double* x, std::size_t n) { return active_table().sum(x, n); }

double dot(const double* a, const double* b, std::size_t n) {
  return active_table().dot(a, b, n);
}

double masked_sum(const double* x, const std::uint8_t* mask, std::size_t n) {
  return active_table().masked_sum(x, mask, n);
}

void masked_accumulate(double* acc, const std::uint8_t* mask, double alpha,
                       std::size_t n) {
  active_table().masked_accumulate(acc, mask, alpha, n);
}

MinMax minmax(const double* x, std::size_t n) {
  MinMax r;
  active_table().minmax(x, n, &r.min, &r.max);
  return r;
}

}  // namespace fbgi::kernels
