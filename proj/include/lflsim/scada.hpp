// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Cleaning and aggregation of large-flexible-load telemetry: 5-minute meter
// readings per facility in, hourly county series out, plus the Pearson
// correlation used by the price/load association reports.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lflsim/common.hpp"

namespace lflsim::scada {

struct RawMeterSeries {
  std::string facility_id;
  std::string county;
  std::int64_t start_epoch_s = 0;  // first sample timestamp (UTC)
  int step_s = 300;                // enforced uniform spacing
  std::vector<double> mw;
};

struct CountyMiningSeries {
  std::string county;
  std::int64_t start_epoch_s = 0;  // first full hour
  std::vector<double> hourly_mw;
};

// Input table `facility_id,county,timestamp_iso8601,mw`, rows grouped by
// facility in any order. Timestamps must be strictly increasing at uniform
// 5-minute spacing per facility.
std::vector<RawMeterSeries> parse_scada_csv(const std::string& csv_text);

// Cleaning rules, applied in order per reading: negatives become zero;
// readings above spike_threshold_mw are replaced by the previous retained
// value (zero when the first sample spikes). Total and idempotent.
RawMeterSeries clean_series(const RawMeterSeries& raw, double spike_threshold_mw);

// Fallback spike threshold when no installed capacity is known:
// 4x the series' 99th percentile.
double default_spike_threshold(const RawMeterSeries& raw);

// Per county and hour: mean over the 12 five-minute samples of the summed
// facility readings. All series must share start, spacing and length, with
// the window aligned to full hours. Counties reading zero everywhere are
// dropped. Throws IngestError on misalignment.
std::vector<CountyMiningSeries> aggregate_hourly(
    const std::vector<RawMeterSeries>& cleaned);

// Mean consumption per hour-of-window as `county,day,hour,mw` rows, day 1
// being the calendar day of the first sample.
std::string county_series_csv(const std::vector<CountyMiningSeries>& series);

// Reads a `county,day,hour,mw` table back into day-indexed series (used to
// shape time-varying mining capacities).
NamedSeries parse_county_series_csv(const std::string& csv_text);

// Pearson correlation coefficient in [-1, 1]. Throws AnalysisError when the
// series are shorter than 2 or either has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

// ISO-8601 `YYYY-MM-DDTHH:MM:SS[Z]` to Unix seconds (UTC).
std::int64_t parse_iso8601(const std::string& ts);

}  // namespace lflsim::scada
