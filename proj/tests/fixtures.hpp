// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Hand-sized grid fixtures shared by the dispatch/carbon/market tests.
#pragma once

#include <string>
#include <vector>

#include "lflsim/dispatch.hpp"
#include "lflsim/grid.hpp"

namespace fixtures {

using lflsim::grid::Branch;
using lflsim::grid::Bus;
using lflsim::grid::CostSegment;
using lflsim::grid::FuelType;
using lflsim::grid::Generator;
using lflsim::grid::GridCase;

inline Bus bus(int id, const std::string& county = "X") {
  Bus b;
  b.id = id;
  b.county = county;
  return b;
}

struct GenOpts {
  double p_min = 0.0;
  double no_load = 0.0;
  double startup = 0.0;
  FuelType fuel = FuelType::Gas;
  double emission = 0.0;
  double mttf = 1000.0;
  double mttr = 50.0;
};

// Single-segment unit: constant marginal cost `slope` over [0, p_max].
inline Generator gen(int id, int bus_id, double slope, double p_max,
                     GenOpts opts = {}) {
  Generator g;
  g.id = id;
  g.bus_id = bus_id;
  g.fuel = opts.fuel;
  g.p_min = opts.p_min;
  g.p_max = p_max;
  if (!lflsim::grid::is_renewable(opts.fuel))
    g.cost_curve = {{p_max, slope}};
  g.no_load_cost = opts.no_load;
  g.startup_cost = opts.startup;
  g.mttf = opts.mttf;
  g.mttr = opts.mttr;
  g.emission_factor = opts.emission;
  return g;
}

inline Generator wind(int id, int bus_id, double p_max) {
  GenOpts o;
  o.fuel = FuelType::Wind;
  o.mttf = 0.0;
  o.mttr = 0.0;
  return gen(id, bus_id, 0.0, p_max, o);
}

inline Branch line(int from, int to, double limit, double x = 0.1) {
  Branch b;
  b.from_bus = from;
  b.to_bus = to;
  b.reactance = x;
  b.flow_limit = limit;
  return b;
}

inline GridCase make_case(std::vector<Bus> buses, std::vector<Branch> branches,
                          std::vector<Generator> gens) {
  GridCase g;
  g.buses = std::move(buses);
  g.branches = std::move(branches);
  g.generators = std::move(gens);
  for (const auto& b : g.buses) g.county_map[b.county].push_back(b.id);
  return g;
}

// Uniform one-day inputs: the same load at one bus every hour.
inline lflsim::dispatch::DayInputs flat_day(const GridCase& g, int load_bus,
                                            double load_mw, int hours = 24) {
  lflsim::dispatch::DayInputs day;
  day.hours = hours;
  day.total_load.assign(g.buses.size(), std::vector<double>(hours, 0.0));
  day.renewable_mw.assign(g.generators.size(), std::vector<double>(hours, 0.0));
  if (load_mw != 0.0) {
    const int b = g.bus_index(load_bus);
    for (int h = 0; h < hours; ++h)
      day.total_load[static_cast<size_t>(b)][static_cast<size_t>(h)] = load_mw;
  }
  for (size_t gi = 0; gi < g.generators.size(); ++gi)
    if (g.generators[gi].renewable())
      for (int h = 0; h < hours; ++h)
        day.renewable_mw[gi][static_cast<size_t>(h)] = g.generators[gi].p_max;
  return day;
}

// Constant-load hourly series covering [start_day, end_day] at one bus.
inline lflsim::HourlySeries flat_load(int bus_id, double mw, int start_day,
                                      int end_day) {
  lflsim::HourlySeries s;
  s.start_day = start_day;
  s.end_day = end_day;
  auto& row = s.row(bus_id);
  for (auto& v : row) v = mw;
  return s;
}

inline lflsim::HourlySeries empty_series(int start_day, int end_day) {
  lflsim::HourlySeries s;
  s.start_day = start_day;
  s.end_day = end_day;
  return s;
}

}  // namespace fixtures
