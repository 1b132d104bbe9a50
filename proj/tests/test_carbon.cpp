// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "fixtures.hpp"
#include "lflsim/carbon.hpp"

using namespace lflsim;
using namespace fixtures;
namespace dis = lflsim::dispatch;

namespace {

GenOpts phi(double factor) {
  GenOpts o;
  o.emission = factor;
  return o;
}

dis::WindowRun run_with(const grid::GridCase& g, const HourlySeries& load,
                        const mining::MiningDeployment& dep, int d1, int d2) {
  auto renew = empty_series(d1, d2);
  auto run = dis::run_window(g, load, renew, dep, d1, d2);
  REQUIRE(run.result.infeasible_days.empty());
  return run;
}

}  // namespace

TEST_SUITE_BEGIN("carbon");

TEST_CASE("total emissions arithmetic") {
  auto g = make_case({bus(1)}, {}, {gen(1, 1, 20.0, 200.0, phi(0.5))});
  auto load = flat_load(1, 100.0, 1, 1);
  auto run = run_with(g, load, {}, 1, 1);
  // 100 MW x 24 h x 0.5 t/MWh
  CHECK(carbon::total_emissions(run.result, g) == doctest::Approx(1200.0));

  SUBCASE("zero factors give zero") {
    auto g0 = make_case({bus(1)}, {}, {gen(1, 1, 20.0, 200.0, phi(0.0))});
    auto run0 = run_with(g0, load, {}, 1, 1);
    CHECK(carbon::total_emissions(run0.result, g0) == 0.0);
  }
}

TEST_CASE("congested two-bus dispatch emission oracle") {
  // Hand dispatch: cheap bus-1 unit at 100 (line limit), pricey bus-2 at 50.
  auto g = make_case({bus(1), bus(2)}, {line(1, 2, 100.0)},
                     {gen(1, 1, 20.0, 200.0, phi(0.2)), gen(2, 2, 50.0, 200.0, phi(0.9))});
  auto load = flat_load(2, 150.0, 1, 1);
  auto run = run_with(g, load, {}, 1, 1);
  // per hour: 100*0.2 + 50*0.9 = 65 t
  CHECK(carbon::total_emissions(run.result, g) == doctest::Approx(65.0 * 24.0));
}

TEST_CASE("empty deployment yields zero footprint and undefined per-unit") {
  auto g = make_case({bus(1)}, {}, {gen(1, 1, 20.0, 200.0, phi(0.5))});
  auto load = flat_load(1, 100.0, 1, 1);
  auto base = run_with(g, load, {}, 1, 1);
  auto rep = carbon::mining_footprint(base.result, base.result, base.mining, g, "none");
  CHECK(rep.emissions_added_t == 0.0);
  CHECK(rep.base_minus_with_t == 0.0);
  CHECK(!rep.per_unit_mining_t_per_mwh.has_value());
  CHECK(rep.mining_energy_mwh == 0.0);
}

TEST_CASE("single marginal unit: per-unit footprint equals its factor") {
  auto g = make_case({bus(1)}, {}, {gen(1, 1, 20.0, 500.0, phi(0.5))});
  auto load = flat_load(1, 100.0, 1, 1);
  auto base = run_with(g, load, {}, 1, 1);

  mining::MiningDeployment dep;
  dep.sites = {1};
  dep.capacity_mw[1] = 10.0;
  auto with = run_with(g, load, dep, 1, 1);

  auto rep = carbon::mining_footprint(base.result, with.result, with.mining, g, "site1");
  CHECK(rep.mining_energy_mwh == doctest::Approx(240.0));
  CHECK(rep.emissions_added_t == doctest::Approx(120.0).epsilon(1e-9));
  REQUIRE(rep.per_unit_mining_t_per_mwh.has_value());
  CHECK(*rep.per_unit_mining_t_per_mwh == doctest::Approx(0.5).epsilon(1e-9));
  // Both orientations of the difference are reported.
  CHECK(rep.base_minus_with_t == doctest::Approx(-rep.emissions_added_t));
  // Per-unit system footprint uses base-system load only.
  CHECK(rep.base_load_energy_mwh == doctest::Approx(2400.0));
  CHECK(rep.per_unit_system_t_per_mwh == doctest::Approx(0.5));
}

TEST_CASE("locational disparity on the congested toy") {
  auto g = make_case({bus(1), bus(2)}, {line(1, 2, 100.0)},
                     {gen(1, 1, 20.0, 400.0, phi(0.2)), gen(2, 2, 50.0, 400.0, phi(0.9))});
  auto load = flat_load(2, 150.0, 1, 1);
  auto base = run_with(g, load, {}, 1, 1);

  const auto footprint_at = [&](int site) {
    mining::MiningDeployment dep;
    dep.sites = {site};
    dep.capacity_mw[site] = 20.0;
    auto with = run_with(g, load, dep, 1, 1);
    auto rep = carbon::mining_footprint(base.result, with.result, with.mining, g,
                                        "bus" + std::to_string(site));
    REQUIRE(rep.per_unit_mining_t_per_mwh.has_value());
    return *rep.per_unit_mining_t_per_mwh;
  };
  const double cheap_bus = footprint_at(1);
  const double pricey_bus = footprint_at(2);
  CHECK(cheap_bus == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(pricey_bus == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(cheap_bus < pricey_bus);
}

TEST_CASE("footprint is additive over disjoint sub-windows") {
  auto g = make_case({bus(1)}, {}, {gen(1, 1, 20.0, 500.0, phi(0.5))});
  HourlySeries load = flat_load(1, 100.0, 1, 2);
  for (int h = 1; h <= 24; ++h)
    load.row(1)[static_cast<size_t>(load.index(2, h))] = 150.0;

  mining::MiningDeployment dep;
  dep.sites = {1};
  dep.capacity_mw[1] = 10.0;

  auto slice = [&](int d1, int d2) {
    HourlySeries sub;
    sub.start_day = d1;
    sub.end_day = d2;
    auto& row = sub.row(1);
    for (int d = d1; d <= d2; ++d)
      for (int h = 1; h <= 24; ++h)
        row[static_cast<size_t>(sub.index(d, h))] = load.at(1, d, h);
    auto base = run_with(g, sub, {}, d1, d2);
    auto with = run_with(g, sub, dep, d1, d2);
    return carbon::mining_footprint(base.result, with.result, with.mining, g, "w");
  };
  const auto whole = slice(1, 2);
  const auto first = slice(1, 1);
  const auto second = slice(2, 2);
  CHECK(whole.emissions_added_t ==
        doctest::Approx(first.emissions_added_t + second.emissions_added_t).epsilon(1e-12));
}

TEST_CASE("bookkeeping cross-check against raw dispatch tables") {
  auto g = make_case({bus(1), bus(2)}, {line(1, 2, 100.0)},
                     {gen(1, 1, 20.0, 200.0, phi(0.3)), gen(2, 2, 50.0, 200.0, phi(0.7))});
  auto load = flat_load(2, 150.0, 1, 2);
  auto run = run_with(g, load, {}, 1, 2);
  // Independent accumulation straight off the dispatch arrays.
  double direct = 0.0;
  for (size_t gi = 0; gi < g.generators.size(); ++gi)
    for (double mw : run.result.pg[gi]) direct += mw * g.generators[gi].emission_factor;
  CHECK(carbon::total_emissions(run.result, g) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("window mismatch is an alignment error") {
  auto g = make_case({bus(1)}, {}, {gen(1, 1, 20.0, 200.0, phi(0.5))});
  auto a = run_with(g, flat_load(1, 100.0, 1, 1), {}, 1, 1);
  auto b = run_with(g, flat_load(1, 100.0, 1, 2), {}, 1, 2);
  CHECK_THROWS_AS(carbon::mining_footprint(a.result, b.result, b.mining, g, "x"),
                  AnalysisError);
}

TEST_SUITE_END();
