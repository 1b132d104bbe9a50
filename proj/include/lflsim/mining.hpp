// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Mining deployments: site selection by the four supported criteria, per-site
// capacities (constant or profile-shaped), and the binary on/off consumption
// schedule produced by the flexibility mechanisms.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lflsim/common.hpp"
#include "lflsim/grid.hpp"

namespace lflsim::mining {

using grid::BusId;

enum class Flexibility { None, PriceResponsive, CommandFollowing };

Flexibility flexibility_from_string(const std::string& s);
std::string to_string(Flexibility f);

// Boolean per (site, day, hour): participation in demand response, and
// operator shutdown commands. Nonzero series value = true.
struct CommandSignals {
  HourlySeries participating;
  HourlySeries commanded;
};

struct MiningDeployment {
  std::vector<BusId> sites;
  std::map<BusId, double> capacity_mw;            // constant capacity per site
  std::optional<HourlySeries> capacity_series;    // time-varying (real-site mode)
  Flexibility flexibility = Flexibility::None;
  double price_threshold = 40.0;                  // $/MWh, price-responsive only
  std::optional<CommandSignals> signals;

  double capacity_at(BusId bus, int day, int hour) const;
  bool is_site(BusId bus) const;
};

// On/off schedule: every entry is either 0 or the site capacity for that hour.
using MiningSchedule = HourlySeries;

enum class SiteCriterion { Explicit, LowLmp, CloseToRenewable, CloseToCity, RealSites };

SiteCriterion criterion_from_string(const std::string& s);

struct SiteParams {
  std::vector<BusId> explicit_sites;           // Explicit (or manual geographic pick)
  int count = 0;                               // LowLmp: number of buses
  std::map<BusId, double> mean_lmp;            // LowLmp: base-system mean price per bus
  double radius_km = 0.0;                      // geographic criteria
  std::vector<std::pair<double, double>> city_coords;  // CloseToCity centers
  std::vector<std::string> counties;           // RealSites
};

// Resolves the site set for a criterion. LowLmp ranks buses by mean base
// price (ties to the lower id) and requires mean_lmp from a base-system run;
// geographic criteria take an explicit list or a great-circle radius filter;
// RealSites returns all buses of the named counties.
std::vector<BusId> select_sites(const grid::GridCase& g, SiteCriterion criterion,
                                const SiteParams& params);

// Applies the selected flexibility mechanism over the window:
//   none             -> capacity at every site hour
//   price_responsive -> capacity where price(bus,hour) <= threshold, else 0
//   command_following-> capacity unless participating && commanded
// Non-site buses are always 0. Prices are required exactly for
// price_responsive, signals exactly for command_following.
MiningSchedule evaluate_flexibility(const MiningDeployment& dep, int start_day,
                                    int end_day, const HourlySeries* prices);

// Scales a county telemetry profile so its peak equals peak_capacity_mw,
// yielding a per-site time-varying capacity series.
std::vector<double> scale_profile_to_peak(const std::vector<double>& profile,
                                          double peak_capacity_mw);

double haversine_km(double lat1, double lon1, double lat2, double lon2);

}  // namespace lflsim::mining
