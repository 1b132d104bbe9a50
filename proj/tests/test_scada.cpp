// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "lflsim/rng.hpp"
#include "lflsim/scada.hpp"

using namespace lflsim;
using scada::RawMeterSeries;

namespace {

RawMeterSeries series(std::vector<double> mw, const std::string& county = "Ward") {
  RawMeterSeries s;
  s.facility_id = "f1";
  s.county = county;
  s.start_epoch_s = 1609459200;  // 2021-01-01T00:00:00Z, hour aligned
  s.mw = std::move(mw);
  return s;
}

std::vector<double> constant(size_t n, double v) { return std::vector<double>(n, v); }

}  // namespace

TEST_SUITE_BEGIN("scada");

TEST_CASE("iso8601 parsing") {
  CHECK(scada::parse_iso8601("1970-01-01T00:00:00") == 0);
  CHECK(scada::parse_iso8601("1970-01-02T00:00:00Z") == 86400);
  CHECK(scada::parse_iso8601("2021-01-01T00:00:00Z") == 1609459200);
  CHECK(scada::parse_iso8601("2021-01-01T00:05:00Z") == 1609459500);
  CHECK_THROWS_AS(scada::parse_iso8601("not-a-time"), ParseError);
}

TEST_CASE("cleaning rules") {
  SUBCASE("negative readings become zero") {
    auto out = scada::clean_series(series({5.0, -2.0, 7.0}), 700.0);
    CHECK(out.mw == std::vector<double>{5.0, 0.0, 7.0});
  }
  SUBCASE("spikes take the previous retained value") {
    auto out = scada::clean_series(series({5.0, 900.0, 7.0}), 700.0);
    CHECK(out.mw == std::vector<double>{5.0, 5.0, 7.0});
  }
  SUBCASE("clean input is unchanged") {
    auto out = scada::clean_series(series({5.0, 6.0, 7.0}), 700.0);
    CHECK(out.mw == std::vector<double>{5.0, 6.0, 7.0});
  }
  SUBCASE("a first-sample spike falls to zero") {
    auto out = scada::clean_series(series({900.0, 6.0}), 700.0);
    CHECK(out.mw == std::vector<double>{0.0, 6.0});
  }
  SUBCASE("consecutive spikes repeat the last good value") {
    auto out = scada::clean_series(series({5.0, 900.0, 901.0, 7.0}), 700.0);
    CHECK(out.mw == std::vector<double>{5.0, 5.0, 5.0, 7.0});
  }
}

TEST_CASE("cleaning is idempotent") {
  rng::Stream rs(5, 0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> mw(48);
    for (auto& v : mw) v = -50.0 + 900.0 * rs.uniform01();
    const double thr = 400.0;
    auto once = scada::clean_series(series(mw), thr);
    auto twice = scada::clean_series(once, thr);
    CHECK(once.mw == twice.mw);
  }
}

TEST_CASE("hourly aggregation") {
  SUBCASE("one facility, constant 60 MW") {
    auto out = scada::aggregate_hourly({series(constant(24, 60.0))});
    REQUIRE(out.size() == 1);
    CHECK(out[0].hourly_mw == std::vector<double>{60.0, 60.0});
  }
  SUBCASE("two facilities sum before averaging") {
    auto a = series(constant(12, 30.0));
    auto b = series(constant(12, 50.0));
    b.facility_id = "f2";
    auto out = scada::aggregate_hourly({a, b});
    REQUIRE(out.size() == 1);
    CHECK(out[0].hourly_mw == std::vector<double>{80.0});
  }
  SUBCASE("all-zero county is dropped") {
    auto a = series(constant(12, 60.0), "Live");
    auto b = series(constant(12, 0.0), "Dead");
    b.facility_id = "f2";
    auto out = scada::aggregate_hourly({a, b});
    REQUIRE(out.size() == 1);
    CHECK(out[0].county == "Live");
  }
  SUBCASE("misaligned series are rejected") {
    auto a = series(constant(12, 60.0));
    auto b = series(constant(12, 30.0));
    b.facility_id = "f2";
    b.start_epoch_s += 300;
    CHECK_THROWS_AS(scada::aggregate_hourly({a, b}), IngestError);
  }
  SUBCASE("energy is conserved per county-hour") {
    rng::Stream rs(17, 3);
    auto a = series(constant(24, 0.0));
    auto b = series(constant(24, 0.0));
    b.facility_id = "f2";
    for (auto& v : a.mw) v = 100.0 * rs.uniform01();
    for (auto& v : b.mw) v = 100.0 * rs.uniform01();
    auto out = scada::aggregate_hourly({a, b});
    REQUIRE(out.size() == 1);
    for (int h = 0; h < 2; ++h) {
      double sample_sum = 0.0;
      for (int i = 0; i < 12; ++i)
        sample_sum += a.mw[static_cast<size_t>(h * 12 + i)] +
                      b.mw[static_cast<size_t>(h * 12 + i)];
      // Mean MW over the hour times 1 h equals the 5-minute energy sum.
      CHECK(out[0].hourly_mw[static_cast<size_t>(h)] * 12.0 ==
            doctest::Approx(sample_sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("scada csv parsing enforces spacing") {
  const std::string good =
      "facility_id,county,timestamp_iso8601,mw\n"
      "f1,Ward,2021-01-01T00:00:00Z,50\n"
      "f1,Ward,2021-01-01T00:05:00Z,51\n";
  auto out = scada::parse_scada_csv(good);
  REQUIRE(out.size() == 1);
  CHECK(out[0].mw == std::vector<double>{50.0, 51.0});

  const std::string gap =
      "facility_id,county,timestamp_iso8601,mw\n"
      "f1,Ward,2021-01-01T00:00:00Z,50\n"
      "f1,Ward,2021-01-01T00:15:00Z,51\n";
  CHECK_THROWS_AS(scada::parse_scada_csv(gap), IngestError);
}

TEST_CASE("county series csv round trip") {
  auto out = scada::aggregate_hourly({series(constant(36, 42.0))});
  const std::string csv = scada::county_series_csv(out);
  const NamedSeries parsed = scada::parse_county_series_csv(csv);
  CHECK(parsed.at("Ward", 1, 1) == doctest::Approx(42.0));
  CHECK(parsed.at("Ward", 1, 3) == doctest::Approx(42.0));
}

TEST_CASE("pearson correlation") {
  std::vector<double> x{1.0, 2.0, 3.0, 5.0, 8.0};
  std::vector<double> neg;
  for (double v : x) neg.push_back(-v);
  CHECK(scada::pearson(x, x) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scada::pearson(x, neg) == doctest::Approx(-1.0).epsilon(1e-12));

  // Direct-formula oracle for a hand series.
  const std::vector<double> a{1.0, 2.0, 3.0};
  const std::vector<double> b{2.0, 4.0, 7.0};
  const double ma = 2.0, mb = 13.0 / 3.0;
  double num = 0.0, va = 0.0, vb = 0.0;
  for (size_t i = 0; i < 3; ++i) {
    num += (a[i] - ma) * (b[i] - mb);
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
  }
  const double expected = num / std::sqrt(va * vb);
  CHECK(scada::pearson(a, b) == doctest::Approx(expected).epsilon(1e-12));

  SUBCASE("zero variance is an error") {
    const std::vector<double> flat{3.0, 3.0, 3.0};
    CHECK_THROWS_AS(scada::pearson(flat, a), AnalysisError);
  }
  SUBCASE("too short is an error") {
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(scada::pearson(one, one), AnalysisError);
  }
}

TEST_CASE("pearson is symmetric and affine-invariant") {
  rng::Stream rs(7, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> a(40), b(40);
    for (size_t i = 0; i < a.size(); ++i) {
      a[i] = rs.uniform01() * 10.0;
      b[i] = rs.uniform01() * 10.0;
    }
    const double r1 = scada::pearson(a, b);
    CHECK(scada::pearson(b, a) == doctest::Approx(r1).epsilon(1e-12));
    std::vector<double> a2 = a;
    const double scale = 0.5 + rs.uniform01() * 4.0;
    const double shift = -20.0 + rs.uniform01() * 40.0;
    for (auto& v : a2) v = scale * v + shift;
    CHECK(scada::pearson(a2, b) == doctest::Approx(r1).epsilon(1e-9));
  }
}

TEST_SUITE_END();
