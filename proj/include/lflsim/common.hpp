// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lflsim {

// Error taxonomy. The CLI maps these onto distinct exit codes.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Malformed input documents (syntax, missing fields, bad values).
struct ParseError : Error {
  using Error::Error;
};
// Structurally well-formed input that violates a model invariant.
struct ValidationError : Error {
  using Error::Error;
};
// Telemetry ingestion problems (missing cells, misaligned timestamps).
struct IngestError : Error {
  using Error::Error;
};
// Optimization failures that make a whole run unusable.
struct SolveError : Error {
  using Error::Error;
};
// Post-processing failures (misaligned windows, undefined statistics).
struct AnalysisError : Error {
  using Error::Error;
};

// Dense hourly time series over an inclusive day window, one row of
// `days()*24` values per entity. Hours are 1..24 within each day.
// Entities absent from the map read as all-zero.
template <class Key>
struct SeriesT {
  int start_day = 1;
  int end_day = 0;  // end_day < start_day means empty
  std::map<Key, std::vector<double>> values;

  int days() const { return end_day < start_day ? 0 : end_day - start_day + 1; }
  int hours() const { return days() * 24; }

  int index(int day, int hour) const {
    if (day < start_day || day > end_day || hour < 1 || hour > 24)
      throw AnalysisError("series index out of window: day " + std::to_string(day) +
                          " hour " + std::to_string(hour));
    return (day - start_day) * 24 + (hour - 1);
  }

  double at(const Key& entity, int day, int hour) const {
    auto it = values.find(entity);
    if (it == values.end()) return 0.0;
    return it->second[static_cast<size_t>(index(day, hour))];
  }

  std::vector<double>& row(const Key& entity) {
    auto& v = values[entity];
    if (v.empty()) v.assign(static_cast<size_t>(hours()), 0.0);
    return v;
  }

  // Column sum across entities for one (day, hour).
  double total(int day, int hour) const {
    double s = 0.0;
    const size_t i = static_cast<size_t>(index(day, hour));
    for (const auto& [k, v] : values) s += v[i];
    return s;
  }

  bool operator==(const SeriesT&) const = default;
};

using HourlySeries = SeriesT<int>;          // keyed by bus or generator id
using NamedSeries = SeriesT<std::string>;   // keyed by county or label

}  // namespace lflsim
