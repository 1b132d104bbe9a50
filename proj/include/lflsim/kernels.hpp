// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Data-parallel inner loops shared by the simplex solver, the Monte-Carlo
// adequacy scan, and the correlation statistics. Each kernel has a scalar
// reference implementation and an AVX2 variant; the active backend is chosen
// at runtime from CPU features and can be pinned for equivalence testing.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace lflsim::kernels {

enum class Backend { Auto, Scalar, Avx2 };

// Pins the backend process-wide. Throws lflsim::Error if the requested
// backend is not supported on this CPU. Auto re-enables feature detection.
void set_backend(Backend b);
Backend active_backend();
std::string_view backend_name();
bool avx2_supported();

// y[i] += a * x[i]
void axpy(double a, const double* x, double* y, std::size_t n);
// x[i] *= a
void scale(double a, double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double sum(const double* x, std::size_t n);

struct AdequacyStats {
  std::int64_t loss_hours = 0;
  double unserved_mwh = 0.0;
};

// Hourly shortfall scan used by the adequacy assessment:
//   shortfall[h] = max(0, firm[h] + keep_frac * mining[h] - capacity[h])
// Counts hours with shortfall > 0 and sums the shortfall energy.
// keep_frac is the fraction of mining load that cannot shed (1 - f).
AdequacyStats adequacy_scan(const double* firm, const double* mining,
                            const double* capacity, double keep_frac,
                            std::size_t n);

}  // namespace lflsim::kernels
