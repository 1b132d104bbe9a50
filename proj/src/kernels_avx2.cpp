// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA kernel variants. This translation unit is the only one compiled
// with -mavx2 -mfma; it must not be entered unless avx2_supported() is true.
#include "lflsim/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

namespace lflsim::kernels::detail {

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale_avx2(double a, double* x, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) x[i] *= a;
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) s += x[i];
  return s;
}

AdequacyStats adequacy_scan_avx2(const double* firm, const double* mining,
                                 const double* capacity, double keep_frac,
                                 std::size_t n) {
  const __m256d keep = _mm256_set1_pd(keep_frac);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = zero;
  std::int64_t hours = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_fmadd_pd(keep, _mm256_loadu_pd(mining + i),
                                _mm256_loadu_pd(firm + i));
    v = _mm256_sub_pd(v, _mm256_loadu_pd(capacity + i));
    const __m256d pos = _mm256_cmp_pd(v, zero, _CMP_GT_OQ);
    hours += _mm_popcnt_u32(static_cast<unsigned>(_mm256_movemask_pd(pos)));
    acc = _mm256_add_pd(acc, _mm256_and_pd(v, pos));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  AdequacyStats st;
  st.loss_hours = hours;
  st.unserved_mwh = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) {
    const double short_mw = firm[i] + keep_frac * mining[i] - capacity[i];
    if (short_mw > 0.0) {
      ++st.loss_hours;
      st.unserved_mwh += short_mw;
    }
  }
  return st;
}

}  // namespace lflsim::kernels::detail

#endif  // x86
