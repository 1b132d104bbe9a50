// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// System and mining-attributed emissions. The attributed footprint of a
// deployment is the emission difference between the run with mining and the
// base run; both orientations of that difference are reported, together with
// per-MWh values for the whole system and for the mining energy.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lflsim/common.hpp"
#include "lflsim/dispatch.hpp"
#include "lflsim/grid.hpp"
#include "lflsim/mining.hpp"

namespace lflsim::carbon {

struct CarbonReport {
  double base_emissions_t = 0.0;         // base system total
  double with_mining_emissions_t = 0.0;  // system with mining loads
  double emissions_added_t = 0.0;        // with_mining - base
  double base_minus_with_t = 0.0;        // base - with_mining
  double base_load_energy_mwh = 0.0;
  double mining_energy_mwh = 0.0;
  double per_unit_system_t_per_mwh = 0.0;
  std::optional<double> per_unit_mining_t_per_mwh;  // absent when no mining energy
  int start_day = 0, end_day = 0;
  std::vector<int> excluded_days;  // union of both runs' infeasible days
  std::string label;
};

// Sum over feasible days/hours/generators of output times emission factor.
double total_emissions(const dispatch::DispatchResult& r, const grid::GridCase& g);

// Emission attribution between a base run (no mining) and a run with the
// given deployment schedule. Days infeasible in either run are excluded from
// both sides. Throws AnalysisError when windows or grids do not line up.
CarbonReport mining_footprint(const dispatch::DispatchResult& base,
                              const dispatch::DispatchResult& with_mining,
                              const mining::MiningSchedule& schedule,
                              const grid::GridCase& g, const std::string& label = "");

// Per-location rows for bar-style comparisons:
// `location,energy_mwh,footprint_t,per_unit_t_per_mwh`.
std::string report_csv(const std::vector<CarbonReport>& reports);

std::string report_json(const CarbonReport& r);

}  // namespace lflsim::carbon
