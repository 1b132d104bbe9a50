// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Price post-processing: county-average price series, hour-of-day price
// statistics, and the system-wide series (average price, total/mining/
// non-mining load, net load) that feed the correlation reports.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "lflsim/common.hpp"
#include "lflsim/dispatch.hpp"
#include "lflsim/grid.hpp"
#include "lflsim/mining.hpp"

namespace lflsim::market {

// Unweighted mean bus price per (county, day, hour); counties without buses
// are skipped. Only feasible days carry values (skipped days stay zero and
// are listed in the result's infeasible log).
NamedSeries county_lmp(const dispatch::DispatchResult& r, const grid::GridCase& g);

struct PriceStats {
  double mean = 0.0;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
};

// Per hour-of-day statistics pooled across feasible days and buses.
std::array<PriceStats, 24> price_statistics(const dispatch::DispatchResult& r);

// `metric,hour_of_day,value` rows; with a base result added, also per-hour
// mean deltas (variant minus base).
std::string price_statistics_csv(const dispatch::DispatchResult& r,
                                 const dispatch::DispatchResult* base = nullptr);

// Hour-indexed series over feasible days, aligned across all members.
struct SystemSeries {
  std::vector<int> day;           // day id per sample
  std::vector<int> hour;          // 1..24
  std::vector<double> avg_lmp;    // unweighted bus mean
  std::vector<double> load_weighted_lmp;
  std::vector<double> total_load_mw;
  std::vector<double> mining_mw;
  std::vector<double> non_mining_mw;
  std::vector<double> renewable_gen_mw;
  std::vector<double> net_load_mw;         // total - renewable generation
  std::vector<double> net_non_mining_mw;   // non-mining - renewable generation
};

SystemSeries system_series(const dispatch::DispatchResult& r,
                           const mining::MiningSchedule& schedule,
                           const grid::GridCase& g);

std::string system_series_csv(const SystemSeries& s);

// Pairwise correlation rows between the mining/non-mining series and the
// system price and load series, with both total- and net-load variants.
std::string correlation_report_json(const SystemSeries& s);

}  // namespace lflsim::market
