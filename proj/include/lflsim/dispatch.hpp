// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Market-clearing engine: day-ahead unit commitment (MILP), real-time
// economic dispatch (LP with nodal price duals), and the day-by-day
// alternation that feeds commitments from each day into the next.
//
// Formulation: lossless DC network in B-theta form with the lowest-id bus as
// angle reference; convex piecewise-linear energy costs via segment
// variables; startup costs through nonnegative start indicators linked to
// commitment transitions; min-up/down and ramp constraints individually
// switchable. Renewables are zero-cost units bounded by their availability
// profile and are always committed.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lflsim/common.hpp"
#include "lflsim/grid.hpp"
#include "lflsim/lp.hpp"
#include "lflsim/mining.hpp"

namespace lflsim::dispatch {

using grid::BusId;
using grid::GenId;

struct Features {
  bool ramp = true;
  bool min_up_down = true;
};

// One day's inputs, already merged (firm load + mining) per bus and hour.
struct DayInputs {
  int hours = 24;
  std::vector<std::vector<double>> total_load;    // [bus_index][h]
  std::vector<std::vector<double>> renewable_mw;  // [gen_index][h]; dispatchables ignored
};

// Built optimization problem plus the variable/row bookkeeping needed to
// extract dispatch and prices. `commitment_fixed` distinguishes SCED.
struct UcModel {
  lp::Problem problem;
  int hours = 0;
  bool commitment_fixed = false;
  std::vector<int> disp;  // indices into grid.generators
  std::vector<int> ren;
  // Variable ids (-1 where absent).
  std::vector<std::vector<int>> seg_vars;  // [disp][h] -> first of seg_counts[disp]
  std::vector<int> seg_counts;             // per disp
  std::vector<std::vector<int>> u_var, v_var, w_var;  // [disp][h]
  std::vector<std::vector<int>> ren_var;              // [ren][h]
  std::vector<std::vector<int>> flow_var;             // [branch][h]
  std::vector<std::vector<int>> balance_row;          // [bus][h]
};

struct ScucSolution {
  lp::SolveStatus status = lp::SolveStatus::Infeasible;
  std::vector<std::vector<std::uint8_t>> commit;  // [disp][h]
  std::vector<std::vector<double>> pg;            // [generator_index][h]
  std::vector<std::vector<double>> ref_price;     // [bus][h], duals with binaries fixed
  double objective = 0.0;
  long nodes = 0;
};

struct ScedSolution {
  lp::SolveStatus status = lp::SolveStatus::Infeasible;
  std::vector<std::vector<double>> pg;    // [generator_index][h]
  std::vector<std::vector<double>> lmp;   // [bus][h]
  std::vector<std::vector<double>> flow;  // [branch][h]
  double objective = 0.0;  // energy cost only (commitment costs are sunk)
};

// Day-ahead problem. u0 holds the previous day's terminal commitment per
// dispatchable unit.
UcModel build_scuc(const grid::GridCase& g, const DayInputs& day,
                   const std::vector<std::uint8_t>& u0, const Features& features);

// Solves the MILP, then re-solves the LP with binaries fixed at the incumbent
// to obtain reference prices.
ScucSolution solve_scuc(const grid::GridCase& g, const DayInputs& day,
                        const std::vector<std::uint8_t>& u0, const Features& features,
                        const lp::Options& opt);

// Real-time problem with commitments fixed.
UcModel build_sced(const grid::GridCase& g, const DayInputs& day,
                   const std::vector<std::vector<std::uint8_t>>& commit,
                   const Features& features);

ScedSolution solve_sced(const grid::GridCase& g, const DayInputs& day,
                        const std::vector<std::vector<std::uint8_t>>& commit,
                        const Features& features, const lp::Options& opt);

struct InfeasibleDay {
  int day = 0;
  std::string reason;
};

struct DispatchResult {
  int start_day = 1, end_day = 0;
  std::vector<GenId> gen_ids;
  std::vector<BusId> bus_ids;
  // Indexed [entity][(day-start)*24 + hour-1]; zero-filled on skipped days.
  std::vector<std::vector<std::uint8_t>> commit;
  std::vector<std::vector<double>> pg;
  std::vector<std::vector<double>> lmp;
  HourlySeries total_load;  // per bus, the demand the dispatch actually served
  std::vector<InfeasibleDay> infeasible_days;
  std::vector<std::uint8_t> day_ok;

  int days() const { return end_day - start_day + 1; }
  bool day_feasible(int day) const {
    return day_ok[static_cast<size_t>(day - start_day)] != 0;
  }
};

struct WindowRun {
  DispatchResult result;
  mining::MiningSchedule mining;  // consumption the real-time market saw
};

struct RunOptions {
  Features features;
  lp::Options solver;
  // Initial-day commitment; defaults to all dispatchable units on.
  std::optional<std::vector<std::uint8_t>> initial_commit;
};

// The alternating day loop. Per day: previous terminal commitments seed the
// day-ahead run with mining at full capacity; price-responsive deployments
// are re-evaluated against the day-ahead reference prices before the
// real-time dispatch, whose output and prices are what downstream analyses
// consume. Infeasible days are logged and skipped; the next day starts from
// the last feasible day's terminal state.
WindowRun run_window(const grid::GridCase& g, const HourlySeries& load,
                     const HourlySeries& renewables,
                     const mining::MiningDeployment& dep, int start_day, int end_day,
                     const RunOptions& options = {});

// Mean real-time price per bus over feasible days (low-price site ranking).
std::map<BusId, double> mean_lmp(const DispatchResult& r);

}  // namespace lflsim::dispatch
