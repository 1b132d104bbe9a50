// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Monte-Carlo generation adequacy. Dispatchable units alternate exponential
// up/down durations drawn from MTTF/MTTR substreams; renewables follow their
// profile with no failure state. Adequacy is copper-plate: aggregate
// available capacity against aggregate demand, hour by hour. Trials use
// counter-based substreams, so results are bit-identical for a given seed
// regardless of execution order or thread count.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lflsim/common.hpp"
#include "lflsim/grid.hpp"
#include "lflsim/mining.hpp"
#include "lflsim/scenario.hpp"

namespace lflsim::reliability {

struct OutageUnit {
  grid::GenId id = 0;
  double p_max = 0.0;
  double mttf = 0.0;
  double mttr = 0.0;
};

struct OutageModel {
  std::vector<OutageUnit> units;  // dispatchable fleet only
};

OutageModel outage_model_from_grid(const grid::GridCase& g);

// Hourly availability over the horizon: alternating exponential up/down
// durations, starting up, sampled at hour starts. Substream (seed, stream)
// fully determines the series.
std::vector<std::uint8_t> sample_availability(const OutageUnit& unit,
                                              int horizon_hours, std::uint64_t seed,
                                              std::uint64_t stream);

struct CurtailmentPolicy {
  enum class Mode { None, FullFlex, PartialFlex };
  Mode mode = Mode::None;
  double fraction = 0.0;  // sheddable share of mining load, PartialFlex only

  // During a shortfall hour, mining load sheds up to `sheddable()` of itself.
  double sheddable() const {
    switch (mode) {
      case Mode::None: return 0.0;
      case Mode::FullFlex: return 1.0;
      case Mode::PartialFlex: return fraction;
    }
    return 0.0;
  }

  static CurtailmentPolicy parse(const std::string& text);
  std::string name() const;
};

struct ReliabilityIndices {
  double lolh_h_per_year = 0.0;
  double eens_mwh_per_year = 0.0;
  double ci_lolh = 0.0;  // 95% half-width
  double ci_eens = 0.0;
  long trials = 0;
  std::uint64_t seed = 0;
};

// Hourly demand/supply inputs over an arbitrary horizon.
struct AdequacyInputs {
  std::vector<double> firm_mw;       // bus-aggregated non-mining load
  std::vector<double> mining_mw;     // mining load before curtailment
  std::vector<double> renewable_mw;  // available renewable output
};

// Builds the horizon series from profiles; mining either from a schedule or
// as a constant capacity.
AdequacyInputs build_inputs(const HourlySeries& load, const HourlySeries& renewables,
                            int start_day, int end_day);

ReliabilityIndices assess(const OutageModel& model, const AdequacyInputs& in,
                          const CurtailmentPolicy& policy, long trials,
                          std::uint64_t seed, unsigned threads = 1);

struct SweepRow {
  std::string scenario;
  std::string policy;
  double added_gw = 0.0;
  ReliabilityIndices indices;
};

// Cross product of scenarios x policies x added mining sizes, with common
// random numbers across the whole sweep.
std::vector<SweepRow> scenario_sweep(const grid::GridCase& g,
                                     const HourlySeries& load,
                                     const HourlySeries& renewables,
                                     int start_day, int end_day,
                                     const std::vector<scenario::ScenarioSpec>& scenarios,
                                     const std::vector<CurtailmentPolicy>& policies,
                                     const std::vector<double>& added_gw, long trials,
                                     std::uint64_t seed, unsigned threads = 1);

// `scenario,policy,added_gw,lolh_h_per_y,eens_mwh_per_y,ci_lolh,ci_eens,trials,seed`
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace lflsim::reliability
