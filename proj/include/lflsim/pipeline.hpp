// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// End-to-end orchestration behind the CLI: manifest parsing, input loading,
// deployment resolution, result-directory layout, and the composed
// base-vs-deployment run with carbon, reliability and market analyses.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lflsim/carbon.hpp"
#include "lflsim/common.hpp"
#include "lflsim/dispatch.hpp"
#include "lflsim/grid.hpp"
#include "lflsim/mining.hpp"
#include "lflsim/reliability.hpp"
#include "lflsim/scenario.hpp"

namespace lflsim::pipeline {

struct WindowAdjustment {
  int first_day = 0;
  int last_day = 0;
  double factor = 1.0;
};

struct DeploymentSpec {
  mining::SiteCriterion criterion = mining::SiteCriterion::Explicit;
  std::vector<grid::BusId> sites;
  int count = 0;
  double radius_km = 0.0;
  std::vector<std::pair<double, double>> city_coords;
  std::vector<std::string> counties;
  double capacity_mw = 0.0;                       // uniform per site
  std::map<grid::BusId, double> site_capacity_mw; // per-site override
  std::string capacity_profile_path;              // county,day,hour,mw table
  mining::Flexibility flexibility = mining::Flexibility::None;
  double price_threshold = 40.0;
  std::string signals_path;
  bool empty() const;
};

struct ReliabilityConfig {
  long trials = 10000;
  std::vector<std::string> policies = {"none"};
  std::vector<double> added_gw = {0.0};
  std::vector<std::string> scenarios;  // defaults to the manifest scenario
  bool use_schedule = false;           // extra row driven by dispatched mining
};

struct Manifest {
  std::string case_path;
  std::string load_profile_path;
  std::string renewable_profile_path;  // optional
  int start_day = 0, end_day = 0;
  std::vector<WindowAdjustment> adjustments;
  scenario::ScenarioSpec scenario_spec;
  std::optional<DeploymentSpec> deployment;
  dispatch::Features features;
  lp::Options solver;
  std::string initial_commit_mode = "all_on";  // all_on | all_off | explicit
  std::vector<std::uint8_t> initial_commit_bits;
  std::vector<std::string> analyses = {"carbon", "reliability", "market"};
  ReliabilityConfig reliability;
  std::uint64_t seed = 0;
};

// Reads a manifest document; relative input paths resolve against the
// manifest's directory.
Manifest load_manifest(const std::string& path);
Manifest parse_manifest(const std::string& json_text, const std::string& base_dir);

struct LoadedInputs {
  grid::GridCase grid_case;
  HourlySeries load;
  HourlySeries renewables;
};

// Case + profiles + window adjustments + scenario, ready to dispatch.
LoadedInputs load_inputs(const Manifest& m);

// Resolves the manifest deployment to concrete sites/capacities. base_prices
// feeds the low-LMP ranking and may be null for other criteria.
mining::MiningDeployment resolve_deployment(const DeploymentSpec& spec,
                                            const grid::GridCase& g,
                                            const std::map<grid::BusId, double>* base_prices);

// Result-directory I/O. A dispatch directory holds lmp.csv, dispatch.csv,
// commitment.csv, mining_schedule.csv, total_load.csv and run_manifest.json.
void write_dispatch_dir(const std::string& dir, const Manifest& m,
                        const grid::GridCase& g, const dispatch::WindowRun& run,
                        const mining::MiningDeployment& dep);

struct StoredRun {
  dispatch::DispatchResult result;
  mining::MiningSchedule mining;
  std::string case_path;
};

StoredRun read_dispatch_dir(const std::string& dir);

// Post-processing entry points shared by the subcommands.
carbon::CarbonReport carbon_from_dirs(const std::string& base_dir,
                                      const std::string& variant_dir,
                                      const std::string& out_dir);
void market_from_dir(const std::string& dir, const std::string& out_dir,
                     const std::string& base_dir = "");
std::vector<reliability::SweepRow> reliability_sweep_for(const Manifest& m,
                                                         const LoadedInputs& in,
                                                         const mining::MiningDeployment& dep,
                                                         const mining::MiningSchedule* schedule,
                                                         unsigned threads);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  unsigned threads = 1;
};

// The full pipeline: base run, deployment run, then every enabled analysis.
// Creates out_dir (which must not already contain files) and removes it
// again if anything fails. Returns the process exit code.
int run_pipeline(const Manifest& m, const std::string& out_dir,
                 const RunOverrides& overrides = {});

// Per-metric deltas between two result directories; compare(x, x) is all
// zeros. Writes delta_report.json into out_dir.
void compare_dirs(const std::string& base_dir, const std::string& variant_dir,
                  const std::string& out_dir);

// Maps exceptions to the CLI exit-code contract: 2 input errors, 3 solver
// infeasibility, 4 analysis errors, 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace lflsim::pipeline
