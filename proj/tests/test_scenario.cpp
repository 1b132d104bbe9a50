// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstring>

#include "fixtures.hpp"
#include "lflsim/scenario.hpp"

using namespace lflsim;
using namespace fixtures;

namespace {

scenario::Applied apply(const grid::GridCase& g, const HourlySeries& load,
                        const HourlySeries& renew, double lm, double rm) {
  scenario::ScenarioSpec spec{"custom", lm, rm};
  return scenario::apply_scenario(g, load, renew, spec);
}

}  // namespace

TEST_SUITE_BEGIN("scenario");

TEST_CASE("presets") {
  CHECK(scenario::preset("current").load_multiplier == 1.0);
  CHECK(scenario::preset("current").renewable_capacity_multiplier == 1.0);
  CHECK(scenario::preset("future1").load_multiplier == 1.10);
  CHECK(scenario::preset("future1").renewable_capacity_multiplier == 1.50);
  CHECK(scenario::preset("future2").load_multiplier == 1.20);
  CHECK(scenario::preset("future2").renewable_capacity_multiplier == 2.00);
  CHECK_THROWS_AS(scenario::preset("future9"), ParseError);
}

TEST_CASE("identity preset is a no-op") {
  auto g = make_case({bus(1), bus(2)}, {line(1, 2, 100.0)},
                     {gen(1, 1, 20.0, 200.0), wind(2, 2, 80.0)});
  auto load = flat_load(2, 150.0, 1, 1);
  HourlySeries renew;
  renew.start_day = renew.end_day = 1;
  auto& row = renew.row(2);
  for (auto& v : row) v = 60.0;

  auto out = apply(g, load, renew, 1.0, 1.0);
  CHECK(out.load == load);
  CHECK(out.renewables == renew);
  CHECK(grid::serialize_case(out.grid) == grid::serialize_case(g));
}

TEST_CASE("multipliers land where they should") {
  auto g = make_case({bus(1), bus(2)}, {line(1, 2, 100.0)},
                     {gen(1, 1, 20.0, 200.0), wind(2, 2, 80.0)});
  auto load = flat_load(2, 100.0, 1, 1);
  HourlySeries renew;
  renew.start_day = renew.end_day = 1;
  for (auto& v : renew.row(2)) v = 50.0;

  auto out = apply(g, load, renew, 1.10, 1.50);
  CHECK(out.load.at(2, 1, 1) == doctest::Approx(110.0));
  CHECK(out.renewables.at(2, 1, 1) == doctest::Approx(75.0));
  CHECK(out.grid.generators[1].p_max == doctest::Approx(120.0));
  // Dispatchable fleet untouched, bitwise.
  CHECK(std::memcmp(&out.grid.generators[0].p_max, &g.generators[0].p_max,
                    sizeof(double)) == 0);
  CHECK(out.grid.generators[0].cost_curve[0].slope_usd_per_mwh ==
        g.generators[0].cost_curve[0].slope_usd_per_mwh);
}

TEST_CASE("composition of scenarios multiplies through") {
  auto g = make_case({bus(1), bus(2)}, {line(1, 2, 100.0)},
                     {gen(1, 1, 20.0, 200.0), wind(2, 2, 80.0)});
  auto load = flat_load(2, 100.0, 1, 1);
  HourlySeries renew;
  renew.start_day = renew.end_day = 1;
  for (auto& v : renew.row(2)) v = 50.0;

  auto step1 = apply(g, load, renew, 1.1, 1.5);
  auto step2 = apply(step1.grid, step1.load, step1.renewables, 1.2, 2.0);
  auto direct = apply(g, load, renew, 1.1 * 1.2, 1.5 * 2.0);
  CHECK(step2.load.at(2, 1, 1) == doctest::Approx(direct.load.at(2, 1, 1)).epsilon(1e-12));
  CHECK(step2.renewables.at(2, 1, 1) ==
        doctest::Approx(direct.renewables.at(2, 1, 1)).epsilon(1e-12));
  CHECK(step2.grid.generators[1].p_max ==
        doctest::Approx(direct.grid.generators[1].p_max).epsilon(1e-12));
}

TEST_CASE("non-positive multipliers are rejected") {
  auto g = make_case({bus(1)}, {}, {gen(1, 1, 20.0, 200.0)});
  auto load = flat_load(1, 100.0, 1, 1);
  HourlySeries renew;
  renew.start_day = renew.end_day = 1;
  CHECK_THROWS_AS(apply(g, load, renew, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(apply(g, load, renew, 1.0, -2.0), ValidationError);
}

TEST_SUITE_END();
