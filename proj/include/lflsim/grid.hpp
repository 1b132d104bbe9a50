// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Grid data model: buses, branches, generators with convex piecewise-linear
// costs, plus hourly load/renewable profiles. Cases are exchanged as a single
// self-describing JSON document; profiles as CSV tables. Instances are
// immutable after validation and safe to share across threads.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lflsim/common.hpp"

namespace lflsim::grid {

using BusId = int;
using GenId = int;

enum class FuelType { Coal, Gas, Nuclear, Hydro, Wind, Solar, Other };

FuelType fuel_from_string(const std::string& s);
std::string to_string(FuelType f);

// Wind and solar are profile-driven zero-marginal-cost units; everything
// else is dispatchable.
bool is_renewable(FuelType f);

struct Bus {
  BusId id = 0;
  std::string county;
  std::optional<double> latitude;
  std::optional<double> longitude;
  bool has_load = true;
};

// One convex piecewise-linear segment: the curve covers [0, p_max] and the
// energy cost of output p is the integral of the slopes up to p.
// breakpoint_mw is the cumulative upper end of the segment.
struct CostSegment {
  double breakpoint_mw = 0.0;
  double slope_usd_per_mwh = 0.0;
};

struct Generator {
  GenId id = 0;
  BusId bus_id = 0;
  FuelType fuel = FuelType::Other;
  double p_min = 0.0;
  double p_max = 0.0;
  std::vector<CostSegment> cost_curve;
  double no_load_cost = 0.0;   // $/h while committed
  double startup_cost = 0.0;   // $ per start
  std::optional<double> ramp_limit;  // MW/h
  std::optional<int> min_up;         // hours
  std::optional<int> min_down;       // hours
  double mttf = 0.0;  // hours
  double mttr = 0.0;  // hours
  double emission_factor = 0.0;  // tCO2e/MWh

  bool renewable() const { return is_renewable(fuel); }
  // Marginal cost of the segment active at output p.
  double marginal_cost_at(double p) const;
  // Integral of segment slopes from 0 to p.
  double energy_cost(double p) const;
};

struct Branch {
  BusId from_bus = 0;
  BusId to_bus = 0;
  double reactance = 0.0;   // per-unit
  double flow_limit = 0.0;  // MW
};

struct GridCase {
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Generator> generators;
  std::map<std::string, std::vector<BusId>> county_map;  // built by validate()

  int bus_index(BusId id) const;  // throws ValidationError when unknown
  const Bus& bus(BusId id) const { return buses[static_cast<size_t>(bus_index(id))]; }
  std::vector<BusId> bus_ids() const;
  std::vector<GenId> gen_ids() const;
};

// Default life-cycle emission factors by fuel (tCO2e/MWh), applied when the
// case omits emission_factor. Values are configurable per generator in the
// case file; see README for provenance.
double default_emission_factor(FuelType f);

// Default outage parameters (MTTF, MTTR hours) by fuel type and size class,
// applied when the case omits them for a dispatchable unit. Mirrors
// data/default_outage_rates.json, which the CLI can override.
std::pair<double, double> default_outage_rates(FuelType f, double p_max);

// Overridable fallback tables for fields the case file may omit.
// JSON shape: {"emission_factors": {"coal": 0.82, ...},
//              "outage_rates": {"gas": [{"max_p_max": 80, "mttf":..., "mttr":...}], ...}}
// Fuels appear under their own key or "default"; bands match by p_max.
struct CaseDefaults {
  std::map<FuelType, double> emission_factors;
  struct Band {
    double max_p_max = 0.0;
    double mttf = 0.0;
    double mttr = 0.0;
  };
  std::map<std::string, std::vector<Band>> outage_bands;  // fuel name or "default"

  double emission_factor(FuelType f) const;
  std::pair<double, double> outage_rates(FuelType f, double p_max) const;
};

CaseDefaults parse_case_defaults(const std::string& json_text);

// Parses and validates a grid case document. Throws ParseError on malformed
// syntax/fields (naming field and line where known) and ValidationError on
// invariant violations (unique ids, endpoint existence, convex cost curves,
// single connected island, county coverage). `defaults` overrides the
// built-in fallback tables.
GridCase parse_case(const std::string& case_text,
                    const CaseDefaults* defaults = nullptr);

// Canonical serialization; parse(serialize(parse(x))) is a fixed point.
std::string serialize_case(const GridCase& g);

// Profile tables: header `entity_id,day,hour,value_mw`, hours 1..24.
// The load table must be complete over its [min day, max day] window for
// every has_load bus; negative loads are rejected.
HourlySeries parse_load_profile(const std::string& csv_text, const GridCase& g);

// Renewable availability per generator. Generators absent from the table
// default to p_max in every hour; present generators must be complete over
// the window and within [0, p_max].
HourlySeries parse_renewable_profile(const std::string& csv_text, const GridCase& g,
                                     int start_day, int end_day);

// Multiplies every load entry in days [first_day, last_day] by factor.
// Other days are untouched (bitwise). Returns the number of scaled entries;
// an empty day range (first > last) is a no-op returning 0.
size_t apply_window_adjustment(HourlySeries& load, int first_day, int last_day,
                               double factor);

}  // namespace lflsim::grid
