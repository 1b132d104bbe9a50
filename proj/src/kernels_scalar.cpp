// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include "lflsim/kernels.hpp"

namespace lflsim::kernels::detail {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale_scalar(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double sum_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i];
  return s;
}

AdequacyStats adequacy_scan_scalar(const double* firm, const double* mining,
                                   const double* capacity, double keep_frac,
                                   std::size_t n) {
  AdequacyStats st;
  for (std::size_t i = 0; i < n; ++i) {
    const double short_mw = firm[i] + keep_frac * mining[i] - capacity[i];
    if (short_mw > 0.0) {
      ++st.loss_hours;
      st.unserved_mwh += short_mw;
    }
  }
  return st;
}

}  // namespace lflsim::kernels::detail
