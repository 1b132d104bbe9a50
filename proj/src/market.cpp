// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include "lflsim/market.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "lflsim/csv.hpp"
#include "lflsim/scada.hpp"

namespace lflsim::market {

NamedSeries county_lmp(const dispatch::DispatchResult& r, const grid::GridCase& g) {
  if (r.bus_ids != g.bus_ids())
    throw AnalysisError("dispatch result does not match the grid's bus set");
  NamedSeries out;
  out.start_day = r.start_day;
  out.end_day = r.end_day;
  for (const auto& [county, ids] : g.county_map) {
    if (ids.empty()) continue;
    auto& row = out.row(county);
    for (int d = r.start_day; d <= r.end_day; ++d) {
      if (!r.day_feasible(d)) continue;
      for (int h = 1; h <= 24; ++h) {
        double sum = 0.0;
        for (grid::BusId id : ids)
          sum += r.lmp[static_cast<size_t>(g.bus_index(id))]
                      [static_cast<size_t>(out.index(d, h))];
        row[static_cast<size_t>(out.index(d, h))] = sum / static_cast<double>(ids.size());
      }
    }
  }
  return out;
}

namespace {

double quantile(std::vector<double>& sorted, double q) {
  // Linear interpolation between order statistics.
  const size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = q * static_cast<double>(n - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, n - 1);
  const double w = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

}  // namespace

std::array<PriceStats, 24> price_statistics(const dispatch::DispatchResult& r) {
  std::array<PriceStats, 24> out{};
  for (int h = 1; h <= 24; ++h) {
    std::vector<double> pool;
    for (int d = r.start_day; d <= r.end_day; ++d) {
      if (!r.day_feasible(d)) continue;
      const size_t i = static_cast<size_t>((d - r.start_day) * 24 + h - 1);
      for (const auto& bus_prices : r.lmp) pool.push_back(bus_prices[i]);
    }
    if (pool.empty()) throw AnalysisError("no feasible days: price statistics undefined");
    std::sort(pool.begin(), pool.end());
    PriceStats st;
    double sum = 0.0;
    for (double v : pool) sum += v;
    st.mean = sum / static_cast<double>(pool.size());
    st.median = quantile(pool, 0.5);
    st.q10 = quantile(pool, 0.1);
    st.q90 = quantile(pool, 0.9);
    out[static_cast<size_t>(h - 1)] = st;
  }
  return out;
}

std::string price_statistics_csv(const dispatch::DispatchResult& r,
                                 const dispatch::DispatchResult* base) {
  const auto stats = price_statistics(r);
  std::string out = "metric,hour_of_day,value\n";
  const auto emit = [&](const std::string& metric, int h, double v) {
    out += metric + "," + std::to_string(h) + "," + csv::fmt(v) + "\n";
  };
  for (int h = 1; h <= 24; ++h) {
    const auto& st = stats[static_cast<size_t>(h - 1)];
    emit("lmp_mean", h, st.mean);
    emit("lmp_median", h, st.median);
    emit("lmp_q10", h, st.q10);
    emit("lmp_q90", h, st.q90);
  }
  if (base != nullptr) {
    const auto bs = price_statistics(*base);
    for (int h = 1; h <= 24; ++h)
      emit("lmp_mean_delta_vs_base", h,
           stats[static_cast<size_t>(h - 1)].mean - bs[static_cast<size_t>(h - 1)].mean);
  }
  return out;
}

SystemSeries system_series(const dispatch::DispatchResult& r,
                           const mining::MiningSchedule& schedule,
                           const grid::GridCase& g) {
  if (r.bus_ids != g.bus_ids())
    throw AnalysisError("dispatch result does not match the grid's bus set");
  SystemSeries s;
  const size_t n_bus = r.bus_ids.size();
  for (int d = r.start_day; d <= r.end_day; ++d) {
    if (!r.day_feasible(d)) continue;
    for (int h = 1; h <= 24; ++h) {
      const size_t i = static_cast<size_t>((d - r.start_day) * 24 + h - 1);
      double lmp_sum = 0.0, weighted = 0.0;
      double total = 0.0;
      for (size_t b = 0; b < n_bus; ++b) {
        const double load = r.total_load.at(r.bus_ids[b], d, h);
        lmp_sum += r.lmp[b][i];
        weighted += r.lmp[b][i] * load;
        total += load;
      }
      double renewable = 0.0;
      for (size_t gi = 0; gi < g.generators.size(); ++gi)
        if (g.generators[gi].renewable()) renewable += r.pg[gi][i];
      const double mining = schedule.total(d, h);
      s.day.push_back(d);
      s.hour.push_back(h);
      s.avg_lmp.push_back(lmp_sum / static_cast<double>(n_bus));
      s.load_weighted_lmp.push_back(total > 0.0 ? weighted / total : 0.0);
      s.total_load_mw.push_back(total);
      s.mining_mw.push_back(mining);
      s.non_mining_mw.push_back(total - mining);
      s.renewable_gen_mw.push_back(renewable);
      s.net_load_mw.push_back(total - renewable);
      s.net_non_mining_mw.push_back(total - mining - renewable);
    }
  }
  return s;
}

std::string system_series_csv(const SystemSeries& s) {
  std::string out =
      "day,hour,avg_lmp,load_weighted_lmp,total_load_mw,mining_mw,non_mining_mw,"
      "renewable_gen_mw,net_load_mw,net_non_mining_mw\n";
  for (size_t i = 0; i < s.day.size(); ++i) {
    out += std::to_string(s.day[i]) + "," + std::to_string(s.hour[i]) + "," +
           csv::fmt(s.avg_lmp[i]) + "," + csv::fmt(s.load_weighted_lmp[i]) + "," +
           csv::fmt(s.total_load_mw[i]) + "," + csv::fmt(s.mining_mw[i]) + "," +
           csv::fmt(s.non_mining_mw[i]) + "," + csv::fmt(s.renewable_gen_mw[i]) + "," +
           csv::fmt(s.net_load_mw[i]) + "," + csv::fmt(s.net_non_mining_mw[i]) + "\n";
  }
  return out;
}

std::string correlation_report_json(const SystemSeries& s) {
  nlohmann::json j;
  j["samples"] = s.day.size();
  const auto corr_or_null = [&](const std::vector<double>& a,
                                const std::vector<double>& b) -> nlohmann::json {
    try {
      return scada::pearson(a, b);
    } catch (const AnalysisError&) {
      return nullptr;  // constant series: undefined
    }
  };
  j["mining_vs_avg_lmp"] = corr_or_null(s.mining_mw, s.avg_lmp);
  j["mining_vs_total_load"] = corr_or_null(s.mining_mw, s.total_load_mw);
  j["mining_vs_net_load"] = corr_or_null(s.mining_mw, s.net_load_mw);
  j["non_mining_vs_avg_lmp"] = corr_or_null(s.non_mining_mw, s.avg_lmp);
  j["non_mining_vs_total_load"] = corr_or_null(s.non_mining_mw, s.total_load_mw);
  j["non_mining_vs_net_load"] = corr_or_null(s.non_mining_mw, s.net_load_mw);
  return j.dump(2) + "\n";
}

}  // namespace lflsim::market
