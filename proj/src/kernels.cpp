// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include "lflsim/kernels.hpp"

#include <atomic>

#include "lflsim/common.hpp"

namespace lflsim::kernels {

namespace detail {
void axpy_scalar(double, const double*, double*, std::size_t);
void scale_scalar(double, double*, std::size_t);
double dot_scalar(const double*, const double*, std::size_t);
double sum_scalar(const double*, std::size_t);
AdequacyStats adequacy_scan_scalar(const double*, const double*, const double*,
                                   double, std::size_t);
#if defined(__x86_64__) || defined(__i386__)
void axpy_avx2(double, const double*, double*, std::size_t);
void scale_avx2(double, double*, std::size_t);
double dot_avx2(const double*, const double*, std::size_t);
double sum_avx2(const double*, std::size_t);
AdequacyStats adequacy_scan_avx2(const double*, const double*, const double*,
                                 double, std::size_t);
#endif
}  // namespace detail

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

namespace {

struct Table {
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*sum)(const double*, std::size_t);
  AdequacyStats (*adequacy)(const double*, const double*, const double*,
                            double, std::size_t);
};

constexpr Table kScalar{detail::axpy_scalar, detail::scale_scalar,
                        detail::dot_scalar, detail::sum_scalar,
                        detail::adequacy_scan_scalar};
#if defined(__x86_64__) || defined(__i386__)
constexpr Table kAvx2{detail::axpy_avx2, detail::scale_avx2, detail::dot_avx2,
                      detail::sum_avx2, detail::adequacy_scan_avx2};
#endif

Table pick(Backend b) {
#if defined(__x86_64__) || defined(__i386__)
  if (b == Backend::Avx2 || (b == Backend::Auto && avx2_supported()))
    return kAvx2;
#endif
  return kScalar;
}

std::atomic<Backend> g_active{avx2_supported() ? Backend::Avx2
                                               : Backend::Scalar};
Table g_table = pick(Backend::Auto);

}  // namespace

void set_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_supported())
    throw Error("kernel backend avx2 not supported on this CPU");
  const Backend resolved =
      b == Backend::Auto ? (avx2_supported() ? Backend::Avx2 : Backend::Scalar)
                         : b;
  g_active.store(resolved);
  g_table = pick(resolved);
}

Backend active_backend() { return g_active.load(); }

std::string_view backend_name() {
  return active_backend() == Backend::Avx2 ? "avx2" : "scalar";
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  g_table.axpy(a, x, y, n);
}
void scale(double a, double* x, std::size_t n) { g_table.scale(a, x, n); }
double dot(const double* x, const double* y, std::size_t n) {
  return g_table.dot(x, y, n);
}
double sum(const double* x, std::size_t n) { return g_table.sum(x, n); }
AdequacyStats adequacy_scan(const double* firm, const double* mining,
                            const double* capacity, double keep_frac,
                            std::size_t n) {
  return g_table.adequacy(firm, mining, capacity, keep_frac, n);
}

}  // namespace lflsim::kernels
