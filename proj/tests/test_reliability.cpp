// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Adequacy tests against the analytic two-state Markov oracle: a unit with
// MTTF/MTTR has stationary availability MTTF/(MTTF+MTTR), so a single-unit
// system with constant load below capacity loses load at that rate.
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lflsim/reliability.hpp"

using namespace lflsim;
using namespace fixtures;
namespace rel = lflsim::reliability;

namespace {

rel::AdequacyInputs constant_inputs(int hours, double firm, double mining,
                                    double renewable = 0.0) {
  rel::AdequacyInputs in;
  in.firm_mw.assign(static_cast<size_t>(hours), firm);
  in.mining_mw.assign(static_cast<size_t>(hours), mining);
  in.renewable_mw.assign(static_cast<size_t>(hours), renewable);
  return in;
}

const rel::OutageUnit kUnit{1, 100.0, 2940.0, 60.0};  // availability 0.98

}  // namespace

TEST_SUITE_BEGIN("reliability");

TEST_CASE("availability sampling is deterministic and starts up") {
  const auto a = rel::sample_availability(kUnit, 8760, 42, 7);
  const auto b = rel::sample_availability(kUnit, 8760, 42, 7);
  CHECK(a == b);
  CHECK(a[0] == 1);
  const auto c = rel::sample_availability(kUnit, 8760, 42, 8);
  CHECK(a != c);
}

TEST_CASE("near-infinite MTTF never fails") {
  rel::OutageUnit unit{1, 100.0, 1e12, 60.0};
  const auto a = rel::sample_availability(unit, 8760, 1, 0);
  for (auto v : a) CHECK(v == 1);
}

TEST_CASE("long-run availability approaches MTTF/(MTTF+MTTR)") {
  // 200 trials x 1 year of the 0.98 unit.
  long up = 0, total = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = rel::sample_availability(kUnit, 8760, 3, static_cast<std::uint64_t>(trial));
    for (auto v : a) up += v;
    total += 8760;
  }
  const double frac = static_cast<double>(up) / static_cast<double>(total);
  CHECK(frac == doctest::Approx(0.98).epsilon(0.005));
}

TEST_CASE("no shortfall when capacity always covers load") {
  rel::OutageModel model;  // no failing units
  auto in = constant_inputs(240, 50.0, 0.0, 100.0);
  auto idx = rel::assess(model, in, {}, 100, 1);
  CHECK(idx.lolh_h_per_year == 0.0);
  CHECK(idx.eens_mwh_per_year == 0.0);
}

TEST_CASE("single-unit analytic oracle at 10000 trials") {
  rel::OutageModel model{{kUnit}};
  auto in = constant_inputs(8760, 50.0, 0.0);
  auto idx = rel::assess(model, in, {}, 10000, 2024);
  // Unavailability 0.02 -> LOLH 175.2 h/y, EENS 8760 MWh/y.
  CHECK(std::abs(idx.lolh_h_per_year - 175.2) <= 0.05 * 175.2);
  CHECK(std::abs(idx.eens_mwh_per_year - 8760.0) <= 0.05 * 8760.0);
  CHECK(idx.eens_mwh_per_year ==
        doctest::Approx(idx.lolh_h_per_year * 50.0).epsilon(1e-9));

  SUBCASE("fixed seed reproduces bitwise") {
    auto again = rel::assess(model, in, {}, 10000, 2024);
    CHECK(again.lolh_h_per_year == idx.lolh_h_per_year);
    CHECK(again.eens_mwh_per_year == idx.eens_mwh_per_year);
    CHECK(again.ci_lolh == idx.ci_lolh);
  }
  SUBCASE("thread count does not change the estimate") {
    auto threaded = rel::assess(model, in, {}, 10000, 2024, 4);
    CHECK(threaded.lolh_h_per_year == idx.lolh_h_per_year);
    CHECK(threaded.eens_mwh_per_year == idx.eens_mwh_per_year);
  }
}

TEST_CASE("full flexibility reproduces the zero-mining baseline exactly") {
  rel::OutageModel model{{kUnit}};
  auto baseline_in = constant_inputs(8760, 80.0, 0.0);
  auto mining_in = constant_inputs(8760, 80.0, 15.0);
  const auto baseline = rel::assess(model, baseline_in, {}, 500, 7);
  rel::CurtailmentPolicy full;
  full.mode = rel::CurtailmentPolicy::Mode::FullFlex;
  const auto flexed = rel::assess(model, mining_in, full, 500, 7);
  CHECK(flexed.lolh_h_per_year == baseline.lolh_h_per_year);
  CHECK(flexed.eens_mwh_per_year == baseline.eens_mwh_per_year);
}

TEST_CASE("policy ordering under common random numbers") {
  rel::OutageModel model{{kUnit}};
  auto in = constant_inputs(8760, 80.0, 15.0);
  rel::CurtailmentPolicy none;
  rel::CurtailmentPolicy partial;
  partial.mode = rel::CurtailmentPolicy::Mode::PartialFlex;
  partial.fraction = 0.5;
  rel::CurtailmentPolicy full;
  full.mode = rel::CurtailmentPolicy::Mode::FullFlex;
  const auto i_none = rel::assess(model, in, none, 500, 7);
  const auto i_partial = rel::assess(model, in, partial, 500, 7);
  const auto i_full = rel::assess(model, in, full, 500, 7);
  CHECK(i_full.lolh_h_per_year <= i_partial.lolh_h_per_year);
  CHECK(i_partial.lolh_h_per_year <= i_none.lolh_h_per_year);
  CHECK(i_full.eens_mwh_per_year <= i_partial.eens_mwh_per_year);
  CHECK(i_partial.eens_mwh_per_year <= i_none.eens_mwh_per_year);
}

TEST_CASE("indices are monotone in non-flexible mining under CRN") {
  rel::OutageModel model{{kUnit}};
  double prev_l = -1.0, prev_e = -1.0;
  for (double mining : {0.0, 10.0, 20.0, 35.0, 60.0}) {
    auto in = constant_inputs(8760, 60.0, mining);
    const auto idx = rel::assess(model, in, {}, 400, 11);
    CHECK(idx.lolh_h_per_year >= prev_l);
    CHECK(idx.eens_mwh_per_year >= prev_e);
    prev_l = idx.lolh_h_per_year;
    prev_e = idx.eens_mwh_per_year;
  }
}

TEST_CASE("confidence interval shrinks like 1/sqrt(trials)") {
  rel::OutageModel model{{kUnit}};
  auto in = constant_inputs(8760, 50.0, 0.0);
  const auto coarse = rel::assess(model, in, {}, 2500, 5);
  const auto fine = rel::assess(model, in, {}, 10000, 5);
  // Quadrupling the trials should halve the half-width, within slack.
  CHECK(fine.ci_lolh > 0.0);
  CHECK(fine.ci_lolh == doctest::Approx(coarse.ci_lolh / 2.0).epsilon(0.25));
  CHECK(fine.ci_eens == doctest::Approx(coarse.ci_eens / 2.0).epsilon(0.25));
}

TEST_CASE("k-year horizon agrees with one-year horizon in expectation") {
  rel::OutageModel model{{kUnit}};
  auto one = constant_inputs(8760, 50.0, 0.0);
  auto three = constant_inputs(3 * 8760, 50.0, 0.0);
  const auto i1 = rel::assess(model, one, {}, 4000, 21);
  const auto i3 = rel::assess(model, three, {}, 4000, 22);
  CHECK(std::abs(i1.lolh_h_per_year - i3.lolh_h_per_year) <=
        1.5 * (i1.ci_lolh + i3.ci_lolh));
}

TEST_CASE("sweep rows cover the grid of scenarios, policies and sizes") {
  auto g = make_case({bus(1), bus(2)}, {line(1, 2, 1000.0)},
                     {gen(1, 1, 20.0, 100.0), wind(2, 2, 50.0)});
  g.generators[0].mttf = 2940.0;
  g.generators[0].mttr = 60.0;
  auto load = flat_load(2, 60.0, 1, 30);
  HourlySeries renew;
  renew.start_day = 1;
  renew.end_day = 30;
  for (auto& v : renew.row(2)) v = 30.0;

  const std::vector<scenario::ScenarioSpec> scen{scenario::preset("current"),
                                                 scenario::preset("future2")};
  std::vector<rel::CurtailmentPolicy> pol{rel::CurtailmentPolicy{},
                                          rel::CurtailmentPolicy::parse("full_flex")};
  const std::vector<double> sizes{0.0, 0.01, 0.02};
  const auto rows = rel::scenario_sweep(g, load, renew, 1, 30, scen, pol, sizes, 300, 9);
  CHECK(rows.size() == 2 * 2 * 3);

  // 0 GW rows agree across policies (nothing to shed).
  CHECK(rows[0].indices.lolh_h_per_year == rows[3].indices.lolh_h_per_year);
  // full_flex stays flat at the baseline for every size.
  CHECK(rows[3].indices.lolh_h_per_year == rows[4].indices.lolh_h_per_year);
  CHECK(rows[4].indices.lolh_h_per_year == rows[5].indices.lolh_h_per_year);
  // non-flexible rows are monotone in size.
  CHECK(rows[0].indices.lolh_h_per_year <= rows[1].indices.lolh_h_per_year);
  CHECK(rows[1].indices.lolh_h_per_year <= rows[2].indices.lolh_h_per_year);

  const std::string csv = rel::sweep_csv(rows);
  CHECK(csv.find("scenario,policy,added_gw,lolh_h_per_y,eens_mwh_per_y,ci_lolh,"
                 "ci_eens,trials,seed") == 0);
  CHECK(csv.find("future2,full_flex") != std::string::npos);
}

TEST_CASE("policy parsing") {
  CHECK(rel::CurtailmentPolicy::parse("none").sheddable() == 0.0);
  CHECK(rel::CurtailmentPolicy::parse("full_flex").sheddable() == 1.0);
  CHECK(rel::CurtailmentPolicy::parse("partial_flex:0.25").sheddable() == 0.25);
  CHECK_THROWS_AS(rel::CurtailmentPolicy::parse("partial_flex:1.5"), ParseError);
  CHECK_THROWS_AS(rel::CurtailmentPolicy::parse("sometimes"), ParseError);
}

TEST_SUITE_END();
