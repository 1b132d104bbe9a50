// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include "lflsim/scenario.hpp"

namespace lflsim::scenario {

ScenarioSpec preset(const std::string& name) {
  if (name == "current") return {"current", 1.0, 1.0};
  if (name == "future1") return {"future1", 1.10, 1.50};
  if (name == "future2") return {"future2", 1.20, 2.00};
  throw ParseError("unknown scenario preset '" + name +
                   "' (expected current, future1 or future2)");
}

Applied apply_scenario(const grid::GridCase& g, const HourlySeries& load,
                       const HourlySeries& renewables, const ScenarioSpec& spec) {
  if (!(spec.load_multiplier > 0.0) || !(spec.renewable_capacity_multiplier > 0.0))
    throw ValidationError("scenario multipliers must be > 0");

  Applied out{g, load, renewables};
  if (spec.load_multiplier != 1.0)
    for (auto& [bus, row] : out.load.values)
      for (double& v : row) v *= spec.load_multiplier;
  if (spec.renewable_capacity_multiplier != 1.0) {
    for (auto& gen : out.grid.generators)
      if (gen.renewable()) gen.p_max *= spec.renewable_capacity_multiplier;
    for (auto& [gen_id, row] : out.renewables.values)
      for (double& v : row) v *= spec.renewable_capacity_multiplier;
  }
  return out;
}

}  // namespace lflsim::scenario
