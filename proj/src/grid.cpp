// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include "lflsim/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <queue>
#include <set>

#include <json.hpp>

#include "lflsim/csv.hpp"

namespace lflsim::csv {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t p = line.find(sep, start);
    if (p == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, p - start));
    start = p + 1;
  }
  return out;
}

double to_double(std::string_view s, int line_no, std::string_view field) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError("line " + std::to_string(line_no) + ": field '" +
                     std::string(field) + "' is not a number: '" + std::string(s) + "'");
  return v;
}

long to_long(std::string_view s, int line_no, std::string_view field) {
  long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ParseError("line " + std::to_string(line_no) + ": field '" +
                     std::string(field) + "' is not an integer: '" + std::string(s) + "'");
  return v;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace lflsim::csv

namespace lflsim::grid {

using nlohmann::json;

FuelType fuel_from_string(const std::string& s) {
  if (s == "coal") return FuelType::Coal;
  if (s == "gas") return FuelType::Gas;
  if (s == "nuclear") return FuelType::Nuclear;
  if (s == "hydro") return FuelType::Hydro;
  if (s == "wind") return FuelType::Wind;
  if (s == "solar") return FuelType::Solar;
  if (s == "other") return FuelType::Other;
  throw ParseError("unknown fuel_type '" + s + "'");
}

std::string to_string(FuelType f) {
  switch (f) {
    case FuelType::Coal: return "coal";
    case FuelType::Gas: return "gas";
    case FuelType::Nuclear: return "nuclear";
    case FuelType::Hydro: return "hydro";
    case FuelType::Wind: return "wind";
    case FuelType::Solar: return "solar";
    case FuelType::Other: return "other";
  }
  return "other";
}

bool is_renewable(FuelType f) {
  return f == FuelType::Wind || f == FuelType::Solar;
}

double Generator::marginal_cost_at(double p) const {
  for (const auto& seg : cost_curve)
    if (p <= seg.breakpoint_mw) return seg.slope_usd_per_mwh;
  return cost_curve.empty() ? 0.0 : cost_curve.back().slope_usd_per_mwh;
}

double Generator::energy_cost(double p) const {
  double cost = 0.0, prev = 0.0;
  for (const auto& seg : cost_curve) {
    const double width = std::min(p, seg.breakpoint_mw) - prev;
    if (width <= 0.0) break;
    cost += width * seg.slope_usd_per_mwh;
    prev += width;
  }
  return cost;
}

int GridCase::bus_index(BusId id) const {
  for (size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == id) return static_cast<int>(i);
  throw ValidationError("unknown bus id " + std::to_string(id));
}

std::vector<BusId> GridCase::bus_ids() const {
  std::vector<BusId> v;
  v.reserve(buses.size());
  for (const auto& b : buses) v.push_back(b.id);
  return v;
}

std::vector<GenId> GridCase::gen_ids() const {
  std::vector<GenId> v;
  v.reserve(generators.size());
  for (const auto& g : generators) v.push_back(g.id);
  return v;
}

double default_emission_factor(FuelType f) {
  // Life-cycle medians by technology; see README for the source table.
  switch (f) {
    case FuelType::Coal: return 0.820;
    case FuelType::Gas: return 0.490;
    case FuelType::Nuclear: return 0.012;
    case FuelType::Hydro: return 0.024;
    case FuelType::Wind: return 0.011;
    case FuelType::Solar: return 0.048;
    case FuelType::Other: return 0.700;
  }
  return 0.700;
}

std::pair<double, double> default_outage_rates(FuelType f, double p_max) {
  // Size-banded (MTTF, MTTR) hours in the style of the standard reliability
  // test system generator table; data/default_outage_rates.json matches.
  if (is_renewable(f)) return {0.0, 0.0};  // no failure model
  if (f == FuelType::Hydro) return {1980.0, 40.0};
  if (f == FuelType::Nuclear) return {1100.0, 150.0};
  if (p_max <= 20.0) return {450.0, 50.0};
  if (p_max <= 80.0) return {1960.0, 40.0};
  if (p_max <= 100.0) return {1200.0, 50.0};
  if (p_max <= 160.0) return {960.0, 40.0};
  if (p_max <= 200.0) return {950.0, 50.0};
  if (p_max <= 360.0) return {1150.0, 100.0};
  return {1100.0, 150.0};
}

double CaseDefaults::emission_factor(FuelType f) const {
  const auto it = emission_factors.find(f);
  return it != emission_factors.end() ? it->second : default_emission_factor(f);
}

std::pair<double, double> CaseDefaults::outage_rates(FuelType f, double p_max) const {
  auto it = outage_bands.find(to_string(f));
  if (it == outage_bands.end()) it = outage_bands.find("default");
  if (it == outage_bands.end()) return default_outage_rates(f, p_max);
  for (const auto& band : it->second)
    if (p_max <= band.max_p_max) return {band.mttf, band.mttr};
  if (!it->second.empty())
    return {it->second.back().mttf, it->second.back().mttr};
  return default_outage_rates(f, p_max);
}

CaseDefaults parse_case_defaults(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("defaults document: ") + e.what());
  }
  CaseDefaults d;
  if (doc.contains("emission_factors"))
    for (const auto& [fuel, v] : doc.at("emission_factors").items())
      d.emission_factors[fuel_from_string(fuel)] = v.get<double>();
  if (doc.contains("outage_rates")) {
    for (const auto& [fuel, bands] : doc.at("outage_rates").items()) {
      if (fuel != "default") fuel_from_string(fuel);  // validate the key
      for (const auto& jb : bands) {
        CaseDefaults::Band band;
        band.max_p_max = jb.at("max_p_max").get<double>();
        band.mttf = jb.at("mttf").get<double>();
        band.mttr = jb.at("mttr").get<double>();
        d.outage_bands[fuel].push_back(band);
      }
    }
  }
  return d;
}

namespace {

[[noreturn]] void field_error(const std::string& where, const std::string& field,
                              const std::string& what) {
  throw ParseError(where + ": field '" + field + "' " + what);
}

template <class T>
T require(const json& obj, const std::string& where, const std::string& field) {
  if (!obj.contains(field)) field_error(where, field, "is missing");
  try {
    return obj.at(field).get<T>();
  } catch (const json::exception&) {
    field_error(where, field, "has wrong type");
  }
}

template <class T>
std::optional<T> optional_field(const json& obj, const std::string& where,
                                const std::string& field) {
  if (!obj.contains(field) || obj.at(field).is_null()) return std::nullopt;
  try {
    return obj.at(field).get<T>();
  } catch (const json::exception&) {
    field_error(where, field, "has wrong type");
  }
}

void check_connected(const GridCase& g) {
  if (g.buses.empty()) throw ValidationError("case has no buses");
  std::map<BusId, std::vector<BusId>> adj;
  for (const auto& br : g.branches) {
    adj[br.from_bus].push_back(br.to_bus);
    adj[br.to_bus].push_back(br.from_bus);
  }
  std::set<BusId> seen;
  std::queue<BusId> q;
  q.push(g.buses.front().id);
  seen.insert(g.buses.front().id);
  while (!q.empty()) {
    const BusId b = q.front();
    q.pop();
    for (BusId nb : adj[b])
      if (seen.insert(nb).second) q.push(nb);
  }
  if (seen.size() != g.buses.size()) {
    std::string msg = "network is not a single island; unreachable buses:";
    int listed = 0;
    for (const auto& b : g.buses) {
      if (seen.count(b.id)) continue;
      if (listed++ < 8) msg += " " + std::to_string(b.id);
    }
    if (listed > 8) msg += " ...";
    throw ValidationError(msg);
  }
}

void validate(GridCase& g) {
  std::set<BusId> bus_ids;
  for (const auto& b : g.buses) {
    if (b.id <= 0)
      throw ValidationError("bus id " + std::to_string(b.id) + " must be positive");
    if (!bus_ids.insert(b.id).second)
      throw ValidationError("duplicate bus id " + std::to_string(b.id));
    if (b.county.empty())
      throw ValidationError("bus " + std::to_string(b.id) + " has empty county");
  }
  for (size_t i = 0; i < g.branches.size(); ++i) {
    const auto& br = g.branches[i];
    const std::string where = "branches[" + std::to_string(i) + "]";
    for (BusId e : {br.from_bus, br.to_bus})
      if (!bus_ids.count(e))
        throw ValidationError(where + ": endpoint bus " + std::to_string(e) +
                              " is not defined");
    if (br.from_bus == br.to_bus)
      throw ValidationError(where + ": self-loop at bus " + std::to_string(br.from_bus));
    if (!(br.reactance > 0.0)) throw ValidationError(where + ": reactance must be > 0");
    if (!(br.flow_limit > 0.0)) throw ValidationError(where + ": flow_limit must be > 0");
  }
  std::set<GenId> gen_ids;
  for (auto& gen : g.generators) {
    const std::string where = "generator " + std::to_string(gen.id);
    if (!gen_ids.insert(gen.id).second)
      throw ValidationError("duplicate generator id " + std::to_string(gen.id));
    if (!bus_ids.count(gen.bus_id))
      throw ValidationError(where + ": bus_id " + std::to_string(gen.bus_id) +
                            " is not defined");
    if (gen.p_min < 0.0 || gen.p_min > gen.p_max)
      throw ValidationError(where + ": requires 0 <= p_min <= p_max");
    if (gen.cost_curve.empty() && !gen.renewable())
      throw ValidationError(where + ": dispatchable unit needs a cost_curve");
    double prev_slope = -1e300, prev_bp = 0.0;
    for (size_t s = 0; s < gen.cost_curve.size(); ++s) {
      const auto& seg = gen.cost_curve[s];
      if (seg.slope_usd_per_mwh < prev_slope)
        throw ValidationError(where + ": cost curve is not convex (slope " +
                              csv::fmt(seg.slope_usd_per_mwh) + " after " +
                              csv::fmt(prev_slope) + " at segment " + std::to_string(s) + ")");
      if (seg.breakpoint_mw <= prev_bp)
        throw ValidationError(where + ": cost curve breakpoints must increase");
      prev_slope = seg.slope_usd_per_mwh;
      prev_bp = seg.breakpoint_mw;
    }
    if (!gen.cost_curve.empty() && prev_bp < gen.p_max - 1e-9)
      throw ValidationError(where + ": cost curve ends at " + csv::fmt(prev_bp) +
                            " MW, below p_max " + csv::fmt(gen.p_max));
    if (gen.emission_factor < 0.0)
      throw ValidationError(where + ": emission_factor must be >= 0");
    if (!gen.renewable() && (gen.mttf <= 0.0 || gen.mttr <= 0.0))
      throw ValidationError(where + ": dispatchable unit needs mttf > 0 and mttr > 0");
  }

  g.county_map.clear();
  for (const auto& b : g.buses) g.county_map[b.county].push_back(b.id);
  for (auto& [county, ids] : g.county_map) std::sort(ids.begin(), ids.end());

  check_connected(g);
}

}  // namespace

GridCase parse_case(const std::string& case_text, const CaseDefaults* defaults) {
  static const CaseDefaults kBuiltin;
  const CaseDefaults& fallback = defaults ? *defaults : kBuiltin;
  json doc;
  try {
    doc = json::parse(case_text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number.
    size_t line = 1;
    for (size_t i = 0; i < e.byte && i < case_text.size(); ++i)
      if (case_text[i] == '\n') ++line;
    throw ParseError("case document: syntax error at line " + std::to_string(line) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("case document: top level must be an object");

  GridCase g;
  g.base_mva = doc.value("base_mva", 100.0);
  if (!(g.base_mva > 0.0)) throw ParseError("case document: base_mva must be > 0");

  for (const std::string section : {"buses", "branches", "generators"})
    if (!doc.contains(section))
      throw ParseError("case document: missing section '" + section + "'");

  size_t idx = 0;
  for (const auto& jb : doc.at("buses")) {
    const std::string where = "buses[" + std::to_string(idx++) + "]";
    Bus b;
    b.id = require<int>(jb, where, "id");
    b.county = require<std::string>(jb, where, "county");
    b.latitude = optional_field<double>(jb, where, "latitude");
    b.longitude = optional_field<double>(jb, where, "longitude");
    b.has_load = jb.value("has_load", true);
    g.buses.push_back(std::move(b));
  }
  idx = 0;
  for (const auto& jb : doc.at("branches")) {
    const std::string where = "branches[" + std::to_string(idx++) + "]";
    Branch br;
    br.from_bus = require<int>(jb, where, "from_bus");
    br.to_bus = require<int>(jb, where, "to_bus");
    br.reactance = require<double>(jb, where, "reactance");
    br.flow_limit = require<double>(jb, where, "flow_limit");
    g.branches.push_back(br);
  }
  idx = 0;
  for (const auto& jg : doc.at("generators")) {
    const std::string where = "generators[" + std::to_string(idx++) + "]";
    Generator gen;
    gen.id = require<int>(jg, where, "id");
    gen.bus_id = require<int>(jg, where, "bus_id");
    gen.fuel = fuel_from_string(require<std::string>(jg, where, "fuel_type"));
    gen.p_min = jg.value("p_min", 0.0);
    gen.p_max = require<double>(jg, where, "p_max");
    if (jg.contains("cost_curve")) {
      for (const auto& js : jg.at("cost_curve")) {
        CostSegment seg;
        seg.breakpoint_mw = require<double>(js, where + ".cost_curve", "breakpoint_mw");
        seg.slope_usd_per_mwh =
            require<double>(js, where + ".cost_curve", "slope_usd_per_mwh");
        gen.cost_curve.push_back(seg);
      }
    }
    gen.no_load_cost = jg.value("no_load_cost", 0.0);
    gen.startup_cost = jg.value("startup_cost", 0.0);
    gen.ramp_limit = optional_field<double>(jg, where, "ramp_limit");
    gen.min_up = optional_field<int>(jg, where, "min_up");
    gen.min_down = optional_field<int>(jg, where, "min_down");
    const auto defaults = default_outage_rates(gen.fuel, gen.p_max);
    gen.mttf = jg.value("mttf", defaults.first);
    gen.mttr = jg.value("mttr", defaults.second);
    gen.emission_factor =
        jg.value("emission_factor", default_emission_factor(gen.fuel));
    g.generators.push_back(std::move(gen));
  }

  validate(g);

  // Optional counties section; when present it must agree with the per-bus
  // county fields.
  if (doc.contains("counties")) {
    const auto& jc = doc.at("counties");
    if (!jc.is_object()) throw ParseError("counties: must map county -> bus id list");
    std::map<std::string, std::vector<BusId>> listed;
    for (const auto& [county, ids] : jc.items()) {
      for (const auto& jid : ids) listed[county].push_back(jid.get<int>());
      std::sort(listed[county].begin(), listed[county].end());
    }
    if (listed != g.county_map)
      throw ValidationError(
          "counties section disagrees with per-bus county assignments");
  }
  return g;
}

std::string serialize_case(const GridCase& g) {
  json doc;
  doc["base_mva"] = g.base_mva;
  doc["buses"] = json::array();
  for (const auto& b : g.buses) {
    json jb;
    jb["id"] = b.id;
    jb["county"] = b.county;
    if (b.latitude) jb["latitude"] = *b.latitude;
    if (b.longitude) jb["longitude"] = *b.longitude;
    jb["has_load"] = b.has_load;
    doc["buses"].push_back(std::move(jb));
  }
  doc["branches"] = json::array();
  for (const auto& br : g.branches) {
    json jb;
    jb["from_bus"] = br.from_bus;
    jb["to_bus"] = br.to_bus;
    jb["reactance"] = br.reactance;
    jb["flow_limit"] = br.flow_limit;
    doc["branches"].push_back(std::move(jb));
  }
  doc["generators"] = json::array();
  for (const auto& gen : g.generators) {
    json jg;
    jg["id"] = gen.id;
    jg["bus_id"] = gen.bus_id;
    jg["fuel_type"] = to_string(gen.fuel);
    jg["p_min"] = gen.p_min;
    jg["p_max"] = gen.p_max;
    jg["cost_curve"] = json::array();
    for (const auto& seg : gen.cost_curve)
      jg["cost_curve"].push_back({{"breakpoint_mw", seg.breakpoint_mw},
                                  {"slope_usd_per_mwh", seg.slope_usd_per_mwh}});
    jg["no_load_cost"] = gen.no_load_cost;
    jg["startup_cost"] = gen.startup_cost;
    if (gen.ramp_limit) jg["ramp_limit"] = *gen.ramp_limit;
    if (gen.min_up) jg["min_up"] = *gen.min_up;
    if (gen.min_down) jg["min_down"] = *gen.min_down;
    jg["mttf"] = gen.mttf;
    jg["mttr"] = gen.mttr;
    jg["emission_factor"] = gen.emission_factor;
    doc["generators"].push_back(std::move(jg));
  }
  doc["counties"] = json::object();
  for (const auto& [county, ids] : g.county_map) doc["counties"][county] = ids;
  return doc.dump(2) + "\n";
}

namespace {

struct ProfileAccum {
  HourlySeries series;
  std::map<int, std::map<long, double>> raw;  // entity -> day*24+hour-1 -> mw
  int min_day = 1 << 30, max_day = -(1 << 30);
};

ProfileAccum read_profile_table(const std::string& csv_text, bool reject_negative) {
  ProfileAccum acc;
  csv::for_each_row(
      csv_text, "entity_id,day,hour,value_mw",
      [&](int line_no, const std::vector<std::string_view>& f) {
        if (f.size() != 4)
          throw ParseError("line " + std::to_string(line_no) + ": expected 4 fields");
        const int entity = static_cast<int>(csv::to_long(f[0], line_no, "entity_id"));
        const int day = static_cast<int>(csv::to_long(f[1], line_no, "day"));
        const int hour = static_cast<int>(csv::to_long(f[2], line_no, "hour"));
        const double mw = csv::to_double(f[3], line_no, "value_mw");
        if (hour < 1 || hour > 24)
          throw ParseError("line " + std::to_string(line_no) + ": hour must be in 1..24");
        if (reject_negative && mw < 0.0)
          throw IngestError("line " + std::to_string(line_no) + ": negative load " +
                            csv::fmt(mw) + " MW at entity " + std::to_string(entity) +
                            " day " + std::to_string(day) + " hour " + std::to_string(hour));
        const long key = static_cast<long>(day) * 24 + (hour - 1);
        if (!acc.raw[entity].emplace(key, mw).second)
          throw IngestError("line " + std::to_string(line_no) +
                            ": duplicate entry for entity " + std::to_string(entity) +
                            " day " + std::to_string(day) + " hour " + std::to_string(hour));
        acc.min_day = std::min(acc.min_day, day);
        acc.max_day = std::max(acc.max_day, day);
      });
  return acc;
}

void densify(ProfileAccum& acc, int start_day, int end_day) {
  acc.series.start_day = start_day;
  acc.series.end_day = end_day;
  for (auto& [entity, cells] : acc.raw) {
    auto& row = acc.series.row(entity);
    for (int d = start_day; d <= end_day; ++d)
      for (int h = 1; h <= 24; ++h) {
        const auto it = cells.find(static_cast<long>(d) * 24 + (h - 1));
        if (it == cells.end())
          throw IngestError("missing entry for entity " + std::to_string(entity) +
                            " day " + std::to_string(d) + " hour " + std::to_string(h));
        row[static_cast<size_t>(acc.series.index(d, h))] = it->second;
      }
  }
}

}  // namespace

HourlySeries parse_load_profile(const std::string& csv_text, const GridCase& g) {
  ProfileAccum acc = read_profile_table(csv_text, /*reject_negative=*/true);
  if (acc.raw.empty()) throw IngestError("load profile has no data rows");
  std::set<BusId> known;
  for (const auto& b : g.buses) known.insert(b.id);
  for (const auto& [entity, cells] : acc.raw)
    if (!known.count(entity))
      throw IngestError("load profile references unknown bus " + std::to_string(entity));
  for (const auto& b : g.buses)
    if (b.has_load && !acc.raw.count(b.id))
      throw IngestError("load profile has no rows for load bus " + std::to_string(b.id));
  densify(acc, acc.min_day, acc.max_day);
  return std::move(acc.series);
}

HourlySeries parse_renewable_profile(const std::string& csv_text, const GridCase& g,
                                     int start_day, int end_day) {
  HourlySeries series;
  series.start_day = start_day;
  series.end_day = end_day;
  std::map<GenId, const Generator*> renewables;
  for (const auto& gen : g.generators)
    if (gen.renewable()) renewables[gen.id] = &gen;

  if (!csv_text.empty()) {
    ProfileAccum acc = read_profile_table(csv_text, /*reject_negative=*/true);
    densify(acc, start_day, end_day);
    for (const auto& [entity, row] : acc.series.values) {
      const auto it = renewables.find(entity);
      if (it == renewables.end())
        throw IngestError("renewable profile references non-renewable generator " +
                          std::to_string(entity));
      for (double v : row)
        if (v > it->second->p_max + 1e-9)
          throw IngestError("renewable availability " + csv::fmt(v) +
                            " MW exceeds p_max of generator " + std::to_string(entity));
      series.values[entity] = row;
    }
  }
  // Units without a profile are available at p_max in every hour.
  for (const auto& [id, gen] : renewables)
    if (!series.values.count(id))
      series.values[id].assign(static_cast<size_t>(series.hours()), gen->p_max);
  return series;
}

size_t apply_window_adjustment(HourlySeries& load, int first_day, int last_day,
                               double factor) {
  if (!(factor > 0.0)) throw ValidationError("window adjustment factor must be > 0");
  if (first_day > last_day) return 0;  // empty range: no-op
  if (first_day < load.start_day || last_day > load.end_day)
    throw ValidationError("adjustment days " + std::to_string(first_day) + ".." +
                          std::to_string(last_day) + " fall outside the profile window " +
                          std::to_string(load.start_day) + ".." +
                          std::to_string(load.end_day));
  size_t touched = 0;
  const int lo = load.index(first_day, 1);
  const int hi = load.index(last_day, 24);
  for (auto& [entity, row] : load.values) {
    for (int i = lo; i <= hi; ++i) row[static_cast<size_t>(i)] *= factor;
    touched += static_cast<size_t>(hi - lo + 1);
  }
  return touched;
}

}  // namespace lflsim::grid
