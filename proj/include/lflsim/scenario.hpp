// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Current/future system variants: uniform load growth and renewable
// capacity scaling applied to an existing case and its profiles.
#pragma once

#include <string>

#include "lflsim/common.hpp"
#include "lflsim/grid.hpp"

namespace lflsim::scenario {

struct ScenarioSpec {
  std::string name = "current";
  double load_multiplier = 1.0;
  double renewable_capacity_multiplier = 1.0;
};

// Named presets: current (1.0, 1.0), future1 (1.10, 1.50), future2 (1.20, 2.00).
ScenarioSpec preset(const std::string& name);

struct Applied {
  grid::GridCase grid;
  HourlySeries load;
  HourlySeries renewables;
};

// Scales every load entry by load_multiplier and every renewable unit's
// p_max and availability by renewable_capacity_multiplier. Dispatchable
// units are untouched.
Applied apply_scenario(const grid::GridCase& g, const HourlySeries& load,
                       const HourlySeries& renewables, const ScenarioSpec& spec);

}  // namespace lflsim::scenario
