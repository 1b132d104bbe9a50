// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "fixtures.hpp"
#include "lflsim/mining.hpp"
#include "lflsim/rng.hpp"

using namespace lflsim;
using namespace fixtures;

namespace {

mining::MiningDeployment constant_dep(std::vector<int> sites, double cap,
                                      mining::Flexibility flex) {
  mining::MiningDeployment dep;
  dep.sites = sites;
  for (int s : sites) dep.capacity_mw[s] = cap;
  dep.flexibility = flex;
  return dep;
}

HourlySeries price_series(int bus, int day, std::vector<double> hourly) {
  HourlySeries p;
  p.start_day = p.end_day = day;
  auto& row = p.row(bus);
  for (int h = 0; h < 24; ++h)
    row[static_cast<size_t>(h)] = hourly[static_cast<size_t>(h % hourly.size())];
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("mining");

TEST_CASE("no flexibility consumes capacity at every site hour") {
  auto dep = constant_dep({2}, 30.0, mining::Flexibility::None);
  auto sched = mining::evaluate_flexibility(dep, 1, 2, nullptr);
  for (int d = 1; d <= 2; ++d)
    for (int h = 1; h <= 24; ++h) {
      CHECK(sched.at(2, d, h) == 30.0);
      CHECK(sched.at(1, d, h) == 0.0);  // non-site bus
    }
}

TEST_CASE("price-responsive switches on the threshold, inclusive boundary") {
  auto dep = constant_dep({2}, 30.0, mining::Flexibility::PriceResponsive);
  dep.price_threshold = 40.0;
  auto prices = price_series(2, 1, {35.0, 45.0, 40.0, 40.0 + 1e-9});
  auto sched = mining::evaluate_flexibility(dep, 1, 1, &prices);
  CHECK(sched.at(2, 1, 1) == 30.0);  // 35 <= 40
  CHECK(sched.at(2, 1, 2) == 0.0);   // 45 > 40
  CHECK(sched.at(2, 1, 3) == 30.0);  // exactly 40: mines
  CHECK(sched.at(2, 1, 4) == 0.0);   // epsilon above: off
}

TEST_CASE("command following sheds only when participating and commanded") {
  auto dep = constant_dep({1}, 10.0, mining::Flexibility::CommandFollowing);
  mining::CommandSignals sig;
  sig.participating.start_day = sig.participating.end_day = 1;
  sig.commanded.start_day = sig.commanded.end_day = 1;
  auto& ctx = sig.participating.row(1);
  auto& cmd = sig.commanded.row(1);
  ctx[0] = 1; cmd[0] = 1;  // both -> off
  ctx[1] = 0; cmd[1] = 1;  // command without participation -> on
  ctx[2] = 1; cmd[2] = 0;  // participation without command -> on
  dep.signals = sig;
  auto sched = mining::evaluate_flexibility(dep, 1, 1, nullptr);
  CHECK(sched.at(1, 1, 1) == 0.0);
  CHECK(sched.at(1, 1, 2) == 10.0);
  CHECK(sched.at(1, 1, 3) == 10.0);
  CHECK(sched.at(1, 1, 4) == 10.0);
}

TEST_CASE("missing inputs are rejected") {
  auto dep = constant_dep({1}, 10.0, mining::Flexibility::PriceResponsive);
  CHECK_THROWS_AS(mining::evaluate_flexibility(dep, 1, 1, nullptr), ValidationError);
  auto none = constant_dep({1}, 10.0, mining::Flexibility::None);
  auto prices = price_series(1, 1, {10.0});
  CHECK_THROWS_AS(mining::evaluate_flexibility(none, 1, 1, &prices), ValidationError);
  auto cf = constant_dep({1}, 10.0, mining::Flexibility::CommandFollowing);
  CHECK_THROWS_AS(mining::evaluate_flexibility(cf, 1, 1, nullptr), ValidationError);
}

TEST_CASE("schedule entries are binary on/off at capacity") {
  rng::Stream rs(12, 0);
  auto dep = constant_dep({1, 3}, 25.0, mining::Flexibility::PriceResponsive);
  dep.price_threshold = 40.0;
  HourlySeries prices;
  prices.start_day = prices.end_day = 1;
  for (int b : {1, 3}) {
    auto& row = prices.row(b);
    for (auto& v : row) v = 80.0 * rs.uniform01();
  }
  auto sched = mining::evaluate_flexibility(dep, 1, 1, &prices);
  for (int b : {1, 3})
    for (int h = 1; h <= 24; ++h) {
      const double v = sched.at(b, 1, h);
      CHECK((v == 0.0 || v == 25.0));
    }
}

TEST_CASE("raising the threshold never reduces mined energy") {
  rng::Stream rs(13, 0);
  HourlySeries prices;
  prices.start_day = prices.end_day = 1;
  auto& row = prices.row(1);
  for (auto& v : row) v = 100.0 * rs.uniform01();
  double prev_energy = -1.0;
  for (double thr : {10.0, 30.0, 50.0, 70.0, 90.0, 110.0}) {
    auto dep = constant_dep({1}, 20.0, mining::Flexibility::PriceResponsive);
    dep.price_threshold = thr;
    auto sched = mining::evaluate_flexibility(dep, 1, 1, &prices);
    double energy = 0.0;
    for (int h = 1; h <= 24; ++h) energy += sched.at(1, 1, h);
    CHECK(energy >= prev_energy);
    prev_energy = energy;
  }
}

TEST_CASE("site selection") {
  auto g = make_case({[] { auto b = bus(1, "Ward"); b.latitude = 31.0; b.longitude = -103.0; return b; }(),
                      [] { auto b = bus(2, "Ector"); b.latitude = 31.8; b.longitude = -102.3; return b; }(),
                      [] { auto b = bus(3, "Ector"); b.latitude = 35.0; b.longitude = -101.0; return b; }()},
                     {line(1, 2, 100.0), line(2, 3, 100.0)},
                     {gen(1, 1, 20.0, 100.0), wind(2, 2, 50.0)});

  SUBCASE("explicit list passes through validated") {
    mining::SiteParams p;
    p.explicit_sites = {3, 1};
    auto sites = mining::select_sites(g, mining::SiteCriterion::Explicit, p);
    CHECK(sites == std::vector<int>{1, 3});
    p.explicit_sites = {9};
    CHECK_THROWS_AS(mining::select_sites(g, mining::SiteCriterion::Explicit, p),
                    ValidationError);
  }
  SUBCASE("low_lmp picks the cheapest buses with id tie-break") {
    mining::SiteParams p;
    p.count = 2;
    p.mean_lmp = {{1, 20.0}, {2, 50.0}, {3, 20.0}};
    auto sites = mining::select_sites(g, mining::SiteCriterion::LowLmp, p);
    CHECK(sites == std::vector<int>{1, 3});
    p.count = 1;
    sites = mining::select_sites(g, mining::SiteCriterion::LowLmp, p);
    CHECK(sites == std::vector<int>{1});  // tie broken by lower id
  }
  SUBCASE("low_lmp without base prices is a missing prerequisite") {
    mining::SiteParams p;
    p.count = 1;
    CHECK_THROWS_WITH_AS(mining::select_sites(g, mining::SiteCriterion::LowLmp, p),
                         doctest::Contains("base"), ValidationError);
  }
  SUBCASE("real_sites returns all buses of the named counties") {
    mining::SiteParams p;
    p.counties = {"Ector"};
    auto sites = mining::select_sites(g, mining::SiteCriterion::RealSites, p);
    CHECK(sites == std::vector<int>{2, 3});
    p.counties = {};
    CHECK(mining::select_sites(g, mining::SiteCriterion::RealSites, p).empty());
  }
  SUBCASE("close_to_renewable radius filter") {
    mining::SiteParams p;
    p.radius_km = 80.0;  // bus 2 hosts the wind unit; bus 1 is ~90 km away
    auto sites = mining::select_sites(g, mining::SiteCriterion::CloseToRenewable, p);
    CHECK(sites == std::vector<int>{2});
    p.radius_km = 150.0;
    sites = mining::select_sites(g, mining::SiteCriterion::CloseToRenewable, p);
    CHECK(sites == std::vector<int>{1, 2});
  }
  SUBCASE("close_to_city radius filter") {
    mining::SiteParams p;
    p.city_coords = {{35.0, -101.0}};
    p.radius_km = 10.0;
    auto sites = mining::select_sites(g, mining::SiteCriterion::CloseToCity, p);
    CHECK(sites == std::vector<int>{3});
  }
}

TEST_CASE("profile scaling hits the requested peak") {
  std::vector<double> profile{10.0, 40.0, 25.0};
  auto scaled = mining::scale_profile_to_peak(profile, 100.0);
  CHECK(scaled == std::vector<double>{25.0, 100.0, 62.5});
  CHECK_THROWS_AS(mining::scale_profile_to_peak({0.0, 0.0}, 10.0), ValidationError);
}

TEST_SUITE_END();
