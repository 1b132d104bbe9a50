// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include "lflsim/carbon.hpp"

#include <json.hpp>

#include "lflsim/csv.hpp"

namespace lflsim::carbon {

namespace {

double emissions_over(const dispatch::DispatchResult& r, const grid::GridCase& g,
                      const std::vector<std::uint8_t>& day_mask) {
  double total = 0.0;
  for (size_t gi = 0; gi < g.generators.size(); ++gi) {
    const double phi = g.generators[gi].emission_factor;
    if (phi == 0.0) continue;
    double energy = 0.0;
    for (int d = r.start_day; d <= r.end_day; ++d) {
      if (!day_mask[static_cast<size_t>(d - r.start_day)]) continue;
      const int base = (d - r.start_day) * 24;
      for (int h = 0; h < 24; ++h) energy += r.pg[gi][static_cast<size_t>(base + h)];
    }
    total += energy * phi;
  }
  return total;
}

}  // namespace

double total_emissions(const dispatch::DispatchResult& r, const grid::GridCase& g) {
  if (r.gen_ids != g.gen_ids())
    throw AnalysisError("dispatch result does not match the grid's generator set");
  return emissions_over(r, g, r.day_ok);
}

CarbonReport mining_footprint(const dispatch::DispatchResult& base,
                              const dispatch::DispatchResult& with_mining,
                              const mining::MiningSchedule& schedule,
                              const grid::GridCase& g, const std::string& label) {
  if (base.start_day != with_mining.start_day || base.end_day != with_mining.end_day)
    throw AnalysisError("carbon comparison: windows differ (" +
                        std::to_string(base.start_day) + ".." +
                        std::to_string(base.end_day) + " vs " +
                        std::to_string(with_mining.start_day) + ".." +
                        std::to_string(with_mining.end_day) + ")");
  if (base.gen_ids != with_mining.gen_ids || base.bus_ids != with_mining.bus_ids)
    throw AnalysisError("carbon comparison: runs use different grids");
  if (base.gen_ids != g.gen_ids())
    throw AnalysisError("carbon comparison: grid does not match the runs");

  CarbonReport rep;
  rep.start_day = base.start_day;
  rep.end_day = base.end_day;
  rep.label = label;

  // Exclude days infeasible in either run from both sides.
  const int days = base.days();
  std::vector<std::uint8_t> mask(static_cast<size_t>(days), 0);
  for (int i = 0; i < days; ++i) {
    mask[static_cast<size_t>(i)] = base.day_ok[static_cast<size_t>(i)] &&
                                   with_mining.day_ok[static_cast<size_t>(i)];
    if (!mask[static_cast<size_t>(i)]) rep.excluded_days.push_back(base.start_day + i);
  }

  rep.base_emissions_t = emissions_over(base, g, mask);
  rep.with_mining_emissions_t = emissions_over(with_mining, g, mask);
  rep.emissions_added_t = rep.with_mining_emissions_t - rep.base_emissions_t;
  rep.base_minus_with_t = rep.base_emissions_t - rep.with_mining_emissions_t;

  // Base-system served load and the mining energy actually consumed.
  for (int d = base.start_day; d <= base.end_day; ++d) {
    if (!mask[static_cast<size_t>(d - base.start_day)]) continue;
    for (int h = 1; h <= 24; ++h) {
      rep.base_load_energy_mwh += base.total_load.total(d, h);
      rep.mining_energy_mwh += schedule.total(d, h);
    }
  }
  if (rep.base_load_energy_mwh > 0.0)
    rep.per_unit_system_t_per_mwh = rep.base_emissions_t / rep.base_load_energy_mwh;
  if (rep.mining_energy_mwh > 0.0)
    rep.per_unit_mining_t_per_mwh = rep.emissions_added_t / rep.mining_energy_mwh;
  return rep;
}

std::string report_csv(const std::vector<CarbonReport>& reports) {
  std::string out = "location,energy_mwh,footprint_t,per_unit_t_per_mwh\n";
  for (const auto& r : reports) {
    out += r.label + "," + csv::fmt(r.mining_energy_mwh) + "," +
           csv::fmt(r.emissions_added_t) + ",";
    out += r.per_unit_mining_t_per_mwh ? csv::fmt(*r.per_unit_mining_t_per_mwh)
                                       : std::string("undefined");
    out += "\n";
  }
  return out;
}

std::string report_json(const CarbonReport& r) {
  nlohmann::json j;
  j["label"] = r.label;
  j["window"] = {{"start_day", r.start_day}, {"end_day", r.end_day}};
  j["excluded_days"] = r.excluded_days;
  j["base_emissions_t"] = r.base_emissions_t;
  j["with_mining_emissions_t"] = r.with_mining_emissions_t;
  j["emissions_added_t"] = r.emissions_added_t;
  j["base_minus_with_t"] = r.base_minus_with_t;
  j["base_load_energy_mwh"] = r.base_load_energy_mwh;
  j["mining_energy_mwh"] = r.mining_energy_mwh;
  j["per_unit_system_t_per_mwh"] = r.per_unit_system_t_per_mwh;
  if (r.per_unit_mining_t_per_mwh)
    j["per_unit_mining_t_per_mwh"] = *r.per_unit_mining_t_per_mwh;
  else
    j["per_unit_mining_t_per_mwh"] = nullptr;
  return j.dump(2) + "\n";
}

}  // namespace lflsim::carbon
