// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include "lflsim/scada.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lflsim/csv.hpp"
#include "lflsim/kernels.hpp"

namespace lflsim::scada {

namespace {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

}  // namespace

std::int64_t parse_iso8601(const std::string& ts) {
  // YYYY-MM-DDTHH:MM:SS with optional trailing Z.
  std::string s = ts;
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.pop_back();
  int y, mo, d, h, mi, sec;
  char t;
  if (std::sscanf(s.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &t, &h, &mi, &sec) != 7 ||
      (t != 'T' && t != ' '))
    throw ParseError("bad ISO-8601 timestamp '" + ts + "'");
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 ||
      sec < 0 || sec > 60)
    throw ParseError("out-of-range timestamp '" + ts + "'");
  return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + sec;
}

std::vector<RawMeterSeries> parse_scada_csv(const std::string& csv_text) {
  struct Accum {
    std::string county;
    std::vector<std::pair<std::int64_t, double>> samples;
  };
  std::map<std::string, Accum> by_facility;
  csv::for_each_row(
      csv_text, "facility_id,county,timestamp_iso8601,mw",
      [&](int line_no, const std::vector<std::string_view>& f) {
        if (f.size() != 4)
          throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields");
        const std::string fac(f[0]);
        auto& acc = by_facility[fac];
        if (acc.county.empty())
          acc.county = std::string(f[1]);
        else if (acc.county != f[1])
          throw IngestError("line " + std::to_string(line_no) + ": facility " + fac +
                            " switches county from " + acc.county);
        acc.samples.emplace_back(parse_iso8601(std::string(f[2])),
                                 csv::to_double(f[3], line_no, "mw"));
      });

  std::vector<RawMeterSeries> out;
  for (auto& [fac, acc] : by_facility) {
    if (acc.samples.empty()) continue;
    RawMeterSeries s;
    s.facility_id = fac;
    s.county = acc.county;
    s.start_epoch_s = acc.samples.front().first;
    s.mw.reserve(acc.samples.size());
    std::int64_t prev = 0;
    for (size_t i = 0; i < acc.samples.size(); ++i) {
      const auto [ts, mw] = acc.samples[i];
      if (i > 0) {
        if (ts <= prev)
          throw IngestError("facility " + fac + ": timestamps not strictly increasing");
        if (ts - prev != s.step_s)
          throw IngestError("facility " + fac + ": timestamps not uniformly spaced at " +
                            std::to_string(s.step_s) + " s");
      }
      prev = ts;
      s.mw.push_back(mw);
    }
    out.push_back(std::move(s));
  }
  return out;
}

RawMeterSeries clean_series(const RawMeterSeries& raw, double spike_threshold_mw) {
  if (raw.mw.empty()) throw IngestError("facility " + raw.facility_id + ": empty series");
  RawMeterSeries out = raw;
  double prev_retained = 0.0;  // first-sample spikes fall back to zero
  for (size_t i = 0; i < out.mw.size(); ++i) {
    double v = out.mw[i];
    if (v < 0.0) v = 0.0;
    if (v > spike_threshold_mw) v = prev_retained;
    out.mw[i] = v;
    prev_retained = v;
  }
  return out;
}

double default_spike_threshold(const RawMeterSeries& raw) {
  std::vector<double> sorted = raw.mw;
  std::sort(sorted.begin(), sorted.end());
  const size_t idx = static_cast<size_t>(
      std::min(sorted.size() - 1.0, std::ceil(0.99 * sorted.size()) - 1.0));
  const double p99 = sorted[std::max<size_t>(idx, 0)];
  return 4.0 * std::max(p99, 1.0);
}

std::vector<CountyMiningSeries> aggregate_hourly(
    const std::vector<RawMeterSeries>& cleaned) {
  if (cleaned.empty()) return {};
  const std::int64_t start = cleaned.front().start_epoch_s;
  const size_t len = cleaned.front().mw.size();
  for (const auto& s : cleaned) {
    if (s.start_epoch_s != start || s.mw.size() != len || s.step_s != 300)
      throw IngestError("facility " + s.facility_id +
                        ": series not aligned with the rest of the data set");
  }
  if (start % 3600 != 0)
    throw IngestError("series must start on a full hour for hourly aggregation");
  if (len % 12 != 0)
    throw IngestError("series length must cover whole hours (12 samples each)");

  std::map<std::string, std::vector<double>> summed;  // county -> per-sample sum
  for (const auto& s : cleaned) {
    auto& acc = summed[s.county];
    if (acc.empty()) acc.assign(len, 0.0);
    for (size_t i = 0; i < len; ++i) acc[i] += s.mw[i];
  }

  std::vector<CountyMiningSeries> out;
  for (auto& [county, acc] : summed) {
    const bool all_zero = std::all_of(acc.begin(), acc.end(),
                                      [](double v) { return v == 0.0; });
    if (all_zero) continue;  // dead meters: drop the county entirely
    CountyMiningSeries cs;
    cs.county = county;
    cs.start_epoch_s = start;
    cs.hourly_mw.reserve(len / 12);
    for (size_t h = 0; h < len / 12; ++h)
      cs.hourly_mw.push_back(kernels::sum(acc.data() + h * 12, 12) / 12.0);
    out.push_back(std::move(cs));
  }
  return out;
}

std::string county_series_csv(const std::vector<CountyMiningSeries>& series) {
  std::string out = "county,day,hour,mw\n";
  for (const auto& cs : series) {
    const std::int64_t day0 = cs.start_epoch_s - (cs.start_epoch_s % 86400);
    for (size_t h = 0; h < cs.hourly_mw.size(); ++h) {
      const std::int64_t t = cs.start_epoch_s + static_cast<std::int64_t>(h) * 3600;
      const std::int64_t day = (t - day0) / 86400 + 1;
      const std::int64_t hour = (t % 86400) / 3600 + 1;
      out += cs.county + "," + std::to_string(day) + "," + std::to_string(hour) + "," +
             csv::fmt(cs.hourly_mw[h]) + "\n";
    }
  }
  return out;
}

NamedSeries parse_county_series_csv(const std::string& csv_text) {
  struct Cell {
    std::string county;
    int day, hour;
    double mw;
  };
  std::vector<Cell> cells;
  int min_day = 1 << 30, max_day = -(1 << 30);
  csv::for_each_row(csv_text, "county,day,hour,mw",
                    [&](int line_no, const std::vector<std::string_view>& f) {
                      if (f.size() != 4)
                        throw ParseError("line " + std::to_string(line_no) +
                                         ": expected 4 fields");
                      Cell c;
                      c.county = std::string(f[0]);
                      c.day = static_cast<int>(csv::to_long(f[1], line_no, "day"));
                      c.hour = static_cast<int>(csv::to_long(f[2], line_no, "hour"));
                      c.mw = csv::to_double(f[3], line_no, "mw");
                      if (c.hour < 1 || c.hour > 24)
                        throw ParseError("line " + std::to_string(line_no) +
                                         ": hour must be in 1..24");
                      min_day = std::min(min_day, c.day);
                      max_day = std::max(max_day, c.day);
                      cells.push_back(std::move(c));
                    });
  if (cells.empty()) throw IngestError("county series table has no data rows");
  NamedSeries out;
  out.start_day = min_day;
  out.end_day = max_day;
  for (const auto& c : cells)
    out.row(c.county)[static_cast<size_t>(out.index(c.day, c.hour))] = c.mw;
  return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw AnalysisError("correlation inputs differ in length: " +
                        std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  const size_t n = a.size();
  if (n < 2) throw AnalysisError("correlation needs at least 2 points");
  const double ma = kernels::sum(a.data(), n) / static_cast<double>(n);
  const double mb = kernels::sum(b.data(), n) / static_cast<double>(n);
  std::vector<double> da(n), db(n);
  for (size_t i = 0; i < n; ++i) {
    da[i] = a[i] - ma;
    db[i] = b[i] - mb;
  }
  const double va = kernels::dot(da.data(), da.data(), n);
  const double vb = kernels::dot(db.data(), db.data(), n);
  if (va <= 0.0 || vb <= 0.0)
    throw AnalysisError("correlation undefined: a series has zero variance");
  return kernels::dot(da.data(), db.data(), n) / std::sqrt(va * vb);
}

}  // namespace lflsim::scada
