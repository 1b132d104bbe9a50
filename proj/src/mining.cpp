// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include "lflsim/mining.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace lflsim::mining {

Flexibility flexibility_from_string(const std::string& s) {
  if (s == "none") return Flexibility::None;
  if (s == "price_responsive") return Flexibility::PriceResponsive;
  if (s == "command_following") return Flexibility::CommandFollowing;
  throw ParseError("unknown flexibility '" + s + "'");
}

std::string to_string(Flexibility f) {
  switch (f) {
    case Flexibility::None: return "none";
    case Flexibility::PriceResponsive: return "price_responsive";
    case Flexibility::CommandFollowing: return "command_following";
  }
  return "none";
}

SiteCriterion criterion_from_string(const std::string& s) {
  if (s == "explicit") return SiteCriterion::Explicit;
  if (s == "low_lmp") return SiteCriterion::LowLmp;
  if (s == "close_to_renewable") return SiteCriterion::CloseToRenewable;
  if (s == "close_to_city") return SiteCriterion::CloseToCity;
  if (s == "real_sites") return SiteCriterion::RealSites;
  throw ParseError("unknown site criterion '" + s + "'");
}

double MiningDeployment::capacity_at(BusId bus, int day, int hour) const {
  if (!is_site(bus)) return 0.0;
  if (capacity_series) return capacity_series->at(bus, day, hour);
  const auto it = capacity_mw.find(bus);
  return it == capacity_mw.end() ? 0.0 : it->second;
}

bool MiningDeployment::is_site(BusId bus) const {
  return std::find(sites.begin(), sites.end(), bus) != sites.end();
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadiusKm = 6371.0;
  constexpr double kDeg = 3.14159265358979323846 / 180.0;
  const double dlat = (lat2 - lat1) * kDeg;
  const double dlon = (lon2 - lon1) * kDeg;
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(lat1 * kDeg) * std::cos(lat2 * kDeg) *
                       std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

namespace {

std::vector<BusId> radius_filter(const grid::GridCase& g,
                                 const std::vector<std::pair<double, double>>& centers,
                                 double radius_km) {
  std::vector<BusId> out;
  for (const auto& b : g.buses) {
    if (!b.latitude || !b.longitude) continue;
    for (const auto& [lat, lon] : centers) {
      if (haversine_km(*b.latitude, *b.longitude, lat, lon) <= radius_km) {
        out.push_back(b.id);
        break;
      }
    }
  }
  return out;
}

}  // namespace

std::vector<BusId> select_sites(const grid::GridCase& g, SiteCriterion criterion,
                                const SiteParams& params) {
  std::vector<BusId> sites;
  switch (criterion) {
    case SiteCriterion::Explicit:
      sites = params.explicit_sites;
      break;
    case SiteCriterion::LowLmp: {
      if (params.mean_lmp.empty())
        throw ValidationError(
            "low_lmp site selection requires base-system prices; run the base "
            "dispatch first");
      std::vector<std::pair<double, BusId>> ranked;
      for (const auto& b : g.buses) {
        const auto it = params.mean_lmp.find(b.id);
        if (it == params.mean_lmp.end())
          throw ValidationError("low_lmp selection: no base price for bus " +
                                std::to_string(b.id));
        ranked.emplace_back(it->second, b.id);
      }
      std::sort(ranked.begin(), ranked.end());  // price, then lower id
      const int n = std::min<int>(params.count, static_cast<int>(ranked.size()));
      for (int i = 0; i < n; ++i) sites.push_back(ranked[static_cast<size_t>(i)].second);
      break;
    }
    case SiteCriterion::CloseToRenewable: {
      if (!params.explicit_sites.empty()) {
        sites = params.explicit_sites;
        break;
      }
      std::vector<std::pair<double, double>> centers;
      for (const auto& gen : g.generators) {
        if (!gen.renewable()) continue;
        const auto& b = g.bus(gen.bus_id);
        if (b.latitude && b.longitude) centers.emplace_back(*b.latitude, *b.longitude);
      }
      sites = radius_filter(g, centers, params.radius_km);
      break;
    }
    case SiteCriterion::CloseToCity: {
      if (!params.explicit_sites.empty()) {
        sites = params.explicit_sites;
        break;
      }
      sites = radius_filter(g, params.city_coords, params.radius_km);
      break;
    }
    case SiteCriterion::RealSites: {
      for (const auto& county : params.counties) {
        const auto it = g.county_map.find(county);
        if (it == g.county_map.end())
          throw ValidationError("real_sites: county '" + county + "' not in case");
        sites.insert(sites.end(), it->second.begin(), it->second.end());
      }
      break;
    }
  }
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  for (BusId s : sites) g.bus_index(s);  // throws on unknown ids
  return sites;
}

MiningSchedule evaluate_flexibility(const MiningDeployment& dep, int start_day,
                                    int end_day, const HourlySeries* prices) {
  if (dep.flexibility == Flexibility::PriceResponsive && prices == nullptr)
    throw ValidationError("price_responsive flexibility requires prices");
  if (dep.flexibility != Flexibility::PriceResponsive && prices != nullptr)
    throw ValidationError("prices supplied but flexibility is " +
                          to_string(dep.flexibility));
  if (dep.flexibility == Flexibility::CommandFollowing && !dep.signals)
    throw ValidationError("command_following flexibility requires signals");

  MiningSchedule schedule;
  schedule.start_day = start_day;
  schedule.end_day = end_day;
  for (BusId site : dep.sites) {
    auto& row = schedule.row(site);
    for (int d = start_day; d <= end_day; ++d) {
      for (int h = 1; h <= 24; ++h) {
        const double cap = dep.capacity_at(site, d, h);
        double mw = cap;
        switch (dep.flexibility) {
          case Flexibility::None:
            break;
          case Flexibility::PriceResponsive:
            // Consume iff price <= threshold; the boundary price mines.
            if (prices->at(site, d, h) > dep.price_threshold) mw = 0.0;
            break;
          case Flexibility::CommandFollowing: {
            const bool ctx = dep.signals->participating.at(site, d, h) != 0.0;
            const bool cmd = dep.signals->commanded.at(site, d, h) != 0.0;
            if (ctx && cmd) mw = 0.0;
            break;
          }
        }
        row[static_cast<size_t>(schedule.index(d, h))] = mw;
      }
    }
  }
  return schedule;
}

std::vector<double> scale_profile_to_peak(const std::vector<double>& profile,
                                          double peak_capacity_mw) {
  if (profile.empty()) throw ValidationError("cannot scale an empty profile");
  const double peak = *std::max_element(profile.begin(), profile.end());
  if (!(peak > 0.0))
    throw ValidationError("profile peak must be positive to scale to capacity");
  std::vector<double> out = profile;
  const double k = peak_capacity_mw / peak;
  for (double& v : out) v *= k;
  return out;
}

}  // namespace lflsim::mining
