// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lflsim/kernels.hpp"
#include "lflsim/rng.hpp"

using lflsim::kernels::AdequacyStats;
using lflsim::kernels::Backend;

namespace {

std::vector<double> random_vec(lflsim::rng::Stream& rng, size_t n, double lo,
                               double hi) {
  std::vector<double> v(n);
  for (auto& x : v) x = lo + (hi - lo) * rng.uniform01();
  return v;
}

template <class F>
void with_backend(Backend b, F&& f) {
  const Backend prev = lflsim::kernels::active_backend();
  lflsim::kernels::set_backend(b);
  f();
  lflsim::kernels::set_backend(prev);
}

}  // namespace

TEST_SUITE_BEGIN("kernels");

TEST_CASE("scalar reference values") {
  with_backend(Backend::Scalar, [] {
    std::vector<double> y{1.0, 2.0, 3.0};
    const std::vector<double> x{10.0, 20.0, 30.0};
    lflsim::kernels::axpy(0.5, x.data(), y.data(), 3);
    CHECK(y[0] == doctest::Approx(6.0));
    CHECK(y[2] == doctest::Approx(18.0));
    CHECK(lflsim::kernels::dot(x.data(), x.data(), 3) == doctest::Approx(1400.0));
    CHECK(lflsim::kernels::sum(x.data(), 3) == doctest::Approx(60.0));
    lflsim::kernels::scale(2.0, y.data(), 3);
    CHECK(y[0] == doctest::Approx(12.0));
  });
}

TEST_CASE("adequacy scan counts strict shortfalls only") {
  with_backend(Backend::Scalar, [] {
    const std::vector<double> firm{90.0, 100.0, 110.0, 50.0};
    const std::vector<double> mining{10.0, 10.0, 10.0, 10.0};
    const std::vector<double> cap{100.0, 100.0, 100.0, 100.0};
    // keep=1: demands 100,110,120,60 vs 100 -> shortfalls 0,10,20,0
    AdequacyStats st =
        lflsim::kernels::adequacy_scan(firm.data(), mining.data(), cap.data(), 1.0, 4);
    CHECK(st.loss_hours == 2);
    CHECK(st.unserved_mwh == doctest::Approx(30.0));
    // keep=0 (full shed): firm only -> 90,100,110,50 vs 100, one short hour
    st = lflsim::kernels::adequacy_scan(firm.data(), mining.data(), cap.data(), 0.0, 4);
    CHECK(st.loss_hours == 1);
    CHECK(st.unserved_mwh == doctest::Approx(10.0));
  });
}

TEST_CASE("avx2 variants match scalar reference") {
  if (!lflsim::kernels::avx2_supported()) return;
  lflsim::rng::Stream rng(2024, 7);
  for (size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 1001u}) {
    auto x = random_vec(rng, n, -50.0, 50.0);
    auto y = random_vec(rng, n, -50.0, 50.0);
    auto cap = random_vec(rng, n, 0.0, 80.0);

    double dot_s = 0.0, dot_v = 0.0, sum_s = 0.0, sum_v = 0.0;
    std::vector<double> axpy_s, axpy_v;
    AdequacyStats adeq_s, adeq_v;
    with_backend(Backend::Scalar, [&] {
      dot_s = lflsim::kernels::dot(x.data(), y.data(), n);
      sum_s = lflsim::kernels::sum(x.data(), n);
      axpy_s = y;
      lflsim::kernels::axpy(1.5, x.data(), axpy_s.data(), n);
      adeq_s = lflsim::kernels::adequacy_scan(x.data(), y.data(), cap.data(), 0.25, n);
    });
    with_backend(Backend::Avx2, [&] {
      dot_v = lflsim::kernels::dot(x.data(), y.data(), n);
      sum_v = lflsim::kernels::sum(x.data(), n);
      axpy_v = y;
      lflsim::kernels::axpy(1.5, x.data(), axpy_v.data(), n);
      adeq_v = lflsim::kernels::adequacy_scan(x.data(), y.data(), cap.data(), 0.25, n);
    });
    CHECK(dot_v == doctest::Approx(dot_s).epsilon(1e-12));
    CHECK(sum_v == doctest::Approx(sum_s).epsilon(1e-12));
    for (size_t i = 0; i < n; ++i)
      CHECK(axpy_v[i] == doctest::Approx(axpy_s[i]).epsilon(1e-12));
    CHECK(adeq_v.loss_hours == adeq_s.loss_hours);
    CHECK(adeq_v.unserved_mwh ==
          doctest::Approx(adeq_s.unserved_mwh).epsilon(1e-12));
  }
}

TEST_CASE("backend pinning is observable") {
  with_backend(Backend::Scalar,
               [] { CHECK(lflsim::kernels::backend_name() == "scalar"); });
  if (lflsim::kernels::avx2_supported())
    with_backend(Backend::Avx2,
                 [] { CHECK(lflsim::kernels::backend_name() == "avx2"); });
}

TEST_SUITE_END();
