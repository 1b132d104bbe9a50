// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include "lflsim/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "lflsim/csv.hpp"
#include "lflsim/market.hpp"
#include "lflsim/scada.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace lflsim::pipeline {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return text;
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw AnalysisError("cannot write file: " + path);
  out << content;
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_absolute()) return p.lexically_normal().string();
  return (fs::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

bool DeploymentSpec::empty() const {
  return sites.empty() && count == 0 && counties.empty() && city_coords.empty() &&
         radius_km == 0.0;
}

Manifest parse_manifest(const std::string& json_text, const std::string& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  Manifest m;
  if (!doc.contains("case")) throw ParseError("manifest: missing 'case'");
  m.case_path = resolve(base_dir, doc.at("case").get<std::string>());
  if (!doc.contains("load_profile")) throw ParseError("manifest: missing 'load_profile'");
  m.load_profile_path = resolve(base_dir, doc.at("load_profile").get<std::string>());
  if (doc.contains("renewable_profile"))
    m.renewable_profile_path = resolve(base_dir, doc.at("renewable_profile").get<std::string>());

  if (!doc.contains("window")) throw ParseError("manifest: missing 'window'");
  m.start_day = doc.at("window").at("start_day").get<int>();
  m.end_day = doc.at("window").at("end_day").get<int>();
  if (m.end_day < m.start_day) throw ParseError("manifest: empty window");

  for (const auto& ja : doc.value("window_adjustments", json::array())) {
    WindowAdjustment a;
    a.first_day = ja.at("first_day").get<int>();
    a.last_day = ja.at("last_day").get<int>();
    a.factor = ja.at("factor").get<double>();
    m.adjustments.push_back(a);
  }

  if (doc.contains("scenario")) {
    const auto& js = doc.at("scenario");
    if (js.is_string()) {
      m.scenario_spec = scenario::preset(js.get<std::string>());
    } else {
      m.scenario_spec.name = js.value("name", "custom");
      m.scenario_spec.load_multiplier = js.value("load_multiplier", 1.0);
      m.scenario_spec.renewable_capacity_multiplier =
          js.value("renewable_capacity_multiplier", 1.0);
    }
  }

  if (doc.contains("deployment") && !doc.at("deployment").is_null()) {
    const auto& jd = doc.at("deployment");
    DeploymentSpec d;
    d.criterion = mining::criterion_from_string(jd.value("criterion", "explicit"));
    for (const auto& s : jd.value("sites", json::array())) d.sites.push_back(s.get<int>());
    d.count = jd.value("count", 0);
    d.radius_km = jd.value("radius_km", 0.0);
    for (const auto& c : jd.value("city_coords", json::array()))
      d.city_coords.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
    for (const auto& c : jd.value("counties", json::array()))
      d.counties.push_back(c.get<std::string>());
    d.capacity_mw = jd.value("capacity_mw", 0.0);
    if (jd.contains("site_capacity_mw"))
      for (const auto& [k, v] : jd.at("site_capacity_mw").items())
        d.site_capacity_mw[std::stoi(k)] = v.get<double>();
    if (jd.contains("capacity_profile"))
      d.capacity_profile_path = resolve(base_dir, jd.at("capacity_profile").get<std::string>());
    d.flexibility = mining::flexibility_from_string(jd.value("flexibility", "none"));
    d.price_threshold = jd.value("price_threshold", 40.0);
    if (d.flexibility == mining::Flexibility::PriceResponsive && !(d.price_threshold > 0.0))
      throw ParseError("manifest: price_threshold must be > 0 for price_responsive");
    if (jd.contains("signals_file"))
      d.signals_path = resolve(base_dir, jd.at("signals_file").get<std::string>());
    m.deployment = std::move(d);
  }

  if (doc.contains("solver")) {
    const auto& js = doc.at("solver");
    m.solver.lp_tol = js.value("lp_tol", 1e-7);
    m.solver.mip_rel_gap = js.value("mip_rel_gap", 1e-4);
    m.features.ramp = js.value("ramp", true);
    m.features.min_up_down = js.value("min_up_down", true);
  }

  if (doc.contains("initial_commitment")) {
    const auto& ji = doc.at("initial_commitment");
    if (ji.is_string()) {
      m.initial_commit_mode = ji.get<std::string>();
      if (m.initial_commit_mode != "all_on" && m.initial_commit_mode != "all_off")
        throw ParseError("manifest: initial_commitment must be all_on, all_off or a list");
    } else {
      m.initial_commit_mode = "explicit";
      for (const auto& b : ji) m.initial_commit_bits.push_back(b.get<int>() ? 1 : 0);
    }
  }

  if (doc.contains("analyses")) {
    m.analyses.clear();
    for (const auto& a : doc.at("analyses")) m.analyses.push_back(a.get<std::string>());
  }

  if (doc.contains("reliability")) {
    const auto& jr = doc.at("reliability");
    m.reliability.trials = jr.value("trials", 10000L);
    if (jr.contains("policies")) {
      m.reliability.policies.clear();
      for (const auto& p : jr.at("policies"))
        m.reliability.policies.push_back(p.get<std::string>());
    }
    if (jr.contains("added_gw")) {
      m.reliability.added_gw.clear();
      for (const auto& v : jr.at("added_gw"))
        m.reliability.added_gw.push_back(v.get<double>());
    }
    if (jr.contains("scenarios"))
      for (const auto& s : jr.at("scenarios"))
        m.reliability.scenarios.push_back(s.get<std::string>());
    m.reliability.use_schedule = jr.value("use_schedule", false);
  }

  m.seed = doc.value("seed", 0ULL);
  return m;
}

Manifest load_manifest(const std::string& path) {
  return parse_manifest(slurp(path), fs::path(path).parent_path().string());
}

LoadedInputs load_inputs(const Manifest& m) {
  LoadedInputs in;
  in.grid_case = grid::parse_case(slurp(m.case_path));
  HourlySeries load = grid::parse_load_profile(slurp(m.load_profile_path), in.grid_case);
  if (m.start_day < load.start_day || m.end_day > load.end_day)
    throw ValidationError("manifest window " + std::to_string(m.start_day) + ".." +
                          std::to_string(m.end_day) + " is not covered by the load profile " +
                          std::to_string(load.start_day) + ".." + std::to_string(load.end_day));
  std::string renew_text;
  if (!m.renewable_profile_path.empty()) renew_text = slurp(m.renewable_profile_path);
  HourlySeries renew = grid::parse_renewable_profile(renew_text, in.grid_case,
                                                     load.start_day, load.end_day);
  for (const auto& a : m.adjustments)
    if (grid::apply_window_adjustment(load, a.first_day, a.last_day, a.factor) == 0)
      std::fprintf(stderr, "warning: window adjustment %d..%d is an empty range, no-op\n",
                   a.first_day, a.last_day);

  auto applied = scenario::apply_scenario(in.grid_case, load, renew, m.scenario_spec);
  in.grid_case = std::move(applied.grid);
  in.load = std::move(applied.load);
  in.renewables = std::move(applied.renewables);
  return in;
}

namespace {

mining::CommandSignals parse_signals_csv(const std::string& text) {
  struct Cell {
    int bus, day, hour;
    bool ctx, cmd;
  };
  std::vector<Cell> cells;
  int min_day = 1 << 30, max_day = -(1 << 30);
  csv::for_each_row(text, "bus,day,hour,participating,commanded",
                    [&](int line_no, const std::vector<std::string_view>& f) {
                      if (f.size() != 5)
                        throw ParseError("line " + std::to_string(line_no) +
                                         ": expected 5 fields");
                      Cell c;
                      c.bus = static_cast<int>(csv::to_long(f[0], line_no, "bus"));
                      c.day = static_cast<int>(csv::to_long(f[1], line_no, "day"));
                      c.hour = static_cast<int>(csv::to_long(f[2], line_no, "hour"));
                      c.ctx = csv::to_long(f[3], line_no, "participating") != 0;
                      c.cmd = csv::to_long(f[4], line_no, "commanded") != 0;
                      min_day = std::min(min_day, c.day);
                      max_day = std::max(max_day, c.day);
                      cells.push_back(c);
                    });
  if (cells.empty()) throw IngestError("signals table has no data rows");
  mining::CommandSignals sig;
  sig.participating.start_day = sig.commanded.start_day = min_day;
  sig.participating.end_day = sig.commanded.end_day = max_day;
  for (const auto& c : cells) {
    sig.participating.row(c.bus)[static_cast<size_t>(sig.participating.index(c.day, c.hour))] =
        c.ctx ? 1.0 : 0.0;
    sig.commanded.row(c.bus)[static_cast<size_t>(sig.commanded.index(c.day, c.hour))] =
        c.cmd ? 1.0 : 0.0;
  }
  return sig;
}

}  // namespace

mining::MiningDeployment resolve_deployment(const DeploymentSpec& spec,
                                            const grid::GridCase& g,
                                            const std::map<grid::BusId, double>* base_prices) {
  mining::MiningDeployment dep;
  mining::SiteParams params;
  params.explicit_sites = spec.sites;
  params.count = spec.count;
  params.radius_km = spec.radius_km;
  params.city_coords = spec.city_coords;
  params.counties = spec.counties;
  if (base_prices != nullptr) params.mean_lmp = *base_prices;
  dep.sites = mining::select_sites(g, spec.criterion, params);
  dep.flexibility = spec.flexibility;
  dep.price_threshold = spec.price_threshold;

  if (!spec.capacity_profile_path.empty()) {
    const NamedSeries county_series =
        scada::parse_county_series_csv(slurp(spec.capacity_profile_path));
    HourlySeries cap;
    cap.start_day = county_series.start_day;
    cap.end_day = county_series.end_day;
    for (grid::BusId site : dep.sites) {
      const std::string& county = g.bus(site).county;
      const auto it = county_series.values.find(county);
      if (it == county_series.values.end())
        throw ValidationError("capacity profile has no series for county '" + county +
                              "' of site bus " + std::to_string(site));
      const double peak = spec.site_capacity_mw.count(site)
                              ? spec.site_capacity_mw.at(site)
                              : spec.capacity_mw;
      cap.values[site] = mining::scale_profile_to_peak(it->second, peak);
    }
    dep.capacity_series = std::move(cap);
  } else {
    for (grid::BusId site : dep.sites)
      dep.capacity_mw[site] = spec.site_capacity_mw.count(site)
                                  ? spec.site_capacity_mw.at(site)
                                  : spec.capacity_mw;
  }
  if (!spec.signals_path.empty())
    dep.signals = parse_signals_csv(slurp(spec.signals_path));
  return dep;
}

namespace {

json deployment_json(const mining::MiningDeployment& dep) {
  json j;
  j["sites"] = dep.sites;
  j["flexibility"] = mining::to_string(dep.flexibility);
  j["price_threshold"] = dep.price_threshold;
  json caps = json::object();
  for (const auto& [bus, mw] : dep.capacity_mw) caps[std::to_string(bus)] = mw;
  j["capacity_mw"] = caps;
  j["time_varying_capacity"] = dep.capacity_series.has_value();
  return j;
}

std::string entity_table(const std::string& header, const std::vector<int>& ids,
                         const std::vector<std::vector<double>>& values, int start_day,
                         int days) {
  std::string out = header + "\n";
  for (size_t e = 0; e < ids.size(); ++e)
    for (int d = 0; d < days; ++d)
      for (int h = 1; h <= 24; ++h)
        out += std::to_string(ids[e]) + "," + std::to_string(start_day + d) + "," +
               std::to_string(h) + "," +
               csv::fmt(values[e][static_cast<size_t>(d * 24 + h - 1)]) + "\n";
  return out;
}

std::string series_table(const std::string& header, const HourlySeries& s) {
  std::string out = header + "\n";
  for (const auto& [entity, row] : s.values)
    for (int d = s.start_day; d <= s.end_day; ++d)
      for (int h = 1; h <= 24; ++h)
        out += std::to_string(entity) + "," + std::to_string(d) + "," + std::to_string(h) +
               "," + csv::fmt(row[static_cast<size_t>(s.index(d, h))]) + "\n";
  return out;
}

}  // namespace

void write_dispatch_dir(const std::string& dir, const Manifest& m,
                        const grid::GridCase& g, const dispatch::WindowRun& run,
                        const mining::MiningDeployment& dep) {
  fs::create_directories(dir);
  const auto& r = run.result;
  const int days = r.days();

  spit(dir + "/lmp.csv",
       entity_table("bus,day,hour,lmp_usd_per_mwh", r.bus_ids, r.lmp, r.start_day, days));
  spit(dir + "/dispatch.csv",
       entity_table("gen,day,hour,mw", r.gen_ids, r.pg, r.start_day, days));
  {
    std::string out = "gen,day,hour,committed\n";
    for (size_t e = 0; e < r.gen_ids.size(); ++e)
      for (int d = 0; d < days; ++d)
        for (int h = 1; h <= 24; ++h)
          out += std::to_string(r.gen_ids[e]) + "," + std::to_string(r.start_day + d) +
                 "," + std::to_string(h) + "," +
                 std::to_string(static_cast<int>(r.commit[e][static_cast<size_t>(d * 24 + h - 1)])) +
                 "\n";
    spit(dir + "/commitment.csv", out);
  }
  spit(dir + "/total_load.csv", series_table("bus,day,hour,mw", r.total_load));
  spit(dir + "/mining_schedule.csv", series_table("bus,day,hour,mw", run.mining));

  json manifest;
  manifest["case"] = m.case_path;
  manifest["load_profile"] = m.load_profile_path;
  manifest["renewable_profile"] = m.renewable_profile_path;
  manifest["window"] = {{"start_day", r.start_day}, {"end_day", r.end_day}};
  manifest["scenario"] = {{"name", m.scenario_spec.name},
                          {"load_multiplier", m.scenario_spec.load_multiplier},
                          {"renewable_capacity_multiplier",
                           m.scenario_spec.renewable_capacity_multiplier}};
  manifest["deployment"] = deployment_json(dep);
  manifest["solver"] = {{"lp_tol", m.solver.lp_tol},
                        {"mip_rel_gap", m.solver.mip_rel_gap},
                        {"ramp", m.features.ramp},
                        {"min_up_down", m.features.min_up_down}};
  manifest["seed"] = m.seed;
  json infeasible = json::array();
  for (const auto& d : r.infeasible_days)
    infeasible.push_back({{"day", d.day}, {"reason", d.reason}});
  manifest["infeasible_days"] = infeasible;
  spit(dir + "/run_manifest.json", manifest.dump(2) + "\n");
}

namespace {

// Reads `entity,day,hour,value` into per-entity dense rows.
struct TableData {
  std::vector<int> ids;
  std::map<int, std::vector<double>> rows;
  int start_day = 0, days = 0;
};

TableData read_entity_table(const std::string& path, const std::string& header) {
  struct Cell {
    int id, day, hour;
    double v;
  };
  std::vector<Cell> cells;
  int min_day = 1 << 30, max_day = -(1 << 30);
  csv::for_each_row(slurp(path), header,
                    [&](int line_no, const std::vector<std::string_view>& f) {
                      Cell c;
                      c.id = static_cast<int>(csv::to_long(f[0], line_no, "entity"));
                      c.day = static_cast<int>(csv::to_long(f[1], line_no, "day"));
                      c.hour = static_cast<int>(csv::to_long(f[2], line_no, "hour"));
                      c.v = csv::to_double(f[3], line_no, "value");
                      min_day = std::min(min_day, c.day);
                      max_day = std::max(max_day, c.day);
                      cells.push_back(c);
                    });
  TableData t;
  if (cells.empty()) return t;
  t.start_day = min_day;
  t.days = max_day - min_day + 1;
  for (const auto& c : cells) {
    auto& row = t.rows[c.id];
    if (row.empty()) row.assign(static_cast<size_t>(t.days) * 24, 0.0);
    row[static_cast<size_t>((c.day - min_day) * 24 + c.hour - 1)] = c.v;
  }
  for (const auto& [id, row] : t.rows) t.ids.push_back(id);
  return t;
}

}  // namespace

StoredRun read_dispatch_dir(const std::string& dir) {
  const json manifest = json::parse(slurp(dir + "/run_manifest.json"));
  StoredRun sr;
  sr.case_path = manifest.at("case").get<std::string>();
  const grid::GridCase g = grid::parse_case(slurp(sr.case_path));

  auto& r = sr.result;
  r.start_day = manifest.at("window").at("start_day").get<int>();
  r.end_day = manifest.at("window").at("end_day").get<int>();
  const int days = r.days();
  r.gen_ids = g.gen_ids();
  r.bus_ids = g.bus_ids();
  r.day_ok.assign(static_cast<size_t>(days), 1);
  for (const auto& jd : manifest.at("infeasible_days")) {
    const int day = jd.at("day").get<int>();
    r.infeasible_days.push_back({day, jd.at("reason").get<std::string>()});
    r.day_ok[static_cast<size_t>(day - r.start_day)] = 0;
  }

  const auto fill = [&](const TableData& t, const std::vector<int>& ids,
                        std::vector<std::vector<double>>& dst) {
    dst.assign(ids.size(), std::vector<double>(static_cast<size_t>(days) * 24, 0.0));
    for (size_t e = 0; e < ids.size(); ++e) {
      const auto it = t.rows.find(ids[e]);
      if (it != t.rows.end()) dst[e] = it->second;
    }
  };
  fill(read_entity_table(dir + "/lmp.csv", "bus,day,hour,lmp_usd_per_mwh"), r.bus_ids, r.lmp);
  fill(read_entity_table(dir + "/dispatch.csv", "gen,day,hour,mw"), r.gen_ids, r.pg);

  const TableData commit = read_entity_table(dir + "/commitment.csv", "gen,day,hour,committed");
  r.commit.assign(r.gen_ids.size(), std::vector<std::uint8_t>(static_cast<size_t>(days) * 24, 0));
  for (size_t e = 0; e < r.gen_ids.size(); ++e) {
    const auto it = commit.rows.find(r.gen_ids[e]);
    if (it == commit.rows.end()) continue;
    for (size_t i = 0; i < it->second.size(); ++i)
      r.commit[e][i] = it->second[i] != 0.0 ? 1 : 0;
  }

  const TableData load = read_entity_table(dir + "/total_load.csv", "bus,day,hour,mw");
  r.total_load.start_day = r.start_day;
  r.total_load.end_day = r.end_day;
  for (const auto& [id, row] : load.rows) r.total_load.values[id] = row;

  const TableData mine = read_entity_table(dir + "/mining_schedule.csv", "bus,day,hour,mw");
  sr.mining.start_day = r.start_day;
  sr.mining.end_day = r.end_day;
  for (const auto& [id, row] : mine.rows) sr.mining.values[id] = row;
  return sr;
}

carbon::CarbonReport carbon_from_dirs(const std::string& base_dir,
                                      const std::string& variant_dir,
                                      const std::string& out_dir) {
  StoredRun base = read_dispatch_dir(base_dir);
  StoredRun variant = read_dispatch_dir(variant_dir);
  if (base.case_path != variant.case_path)
    throw AnalysisError("carbon comparison: runs reference different cases");
  const grid::GridCase g = grid::parse_case(slurp(base.case_path));
  carbon::CarbonReport rep = carbon::mining_footprint(base.result, variant.result,
                                                      variant.mining, g, "deployment");
  fs::create_directories(out_dir);
  spit(out_dir + "/carbon_report.json", carbon::report_json(rep));
  spit(out_dir + "/carbon_by_location.csv", carbon::report_csv({rep}));
  return rep;
}

void market_from_dir(const std::string& dir, const std::string& out_dir,
                     const std::string& base_dir) {
  StoredRun run = read_dispatch_dir(dir);
  const grid::GridCase g = grid::parse_case(slurp(run.case_path));
  fs::create_directories(out_dir);

  const NamedSeries county = market::county_lmp(run.result, g);
  std::string county_csv = "county,day,hour,lmp\n";
  for (const auto& [name, row] : county.values)
    for (int d = county.start_day; d <= county.end_day; ++d) {
      if (!run.result.day_feasible(d)) continue;
      for (int h = 1; h <= 24; ++h)
        county_csv += name + "," + std::to_string(d) + "," + std::to_string(h) + "," +
                      csv::fmt(row[static_cast<size_t>(county.index(d, h))]) + "\n";
    }
  spit(out_dir + "/county_lmp.csv", county_csv);

  std::optional<StoredRun> base;
  if (!base_dir.empty()) base = read_dispatch_dir(base_dir);
  spit(out_dir + "/price_stats.csv",
       market::price_statistics_csv(run.result, base ? &base->result : nullptr));

  const market::SystemSeries series = market::system_series(run.result, run.mining, g);
  spit(out_dir + "/system_series.csv", market::system_series_csv(series));
  spit(out_dir + "/correlation_report.json", market::correlation_report_json(series));
}

std::vector<reliability::SweepRow> reliability_sweep_for(const Manifest& m,
                                                         const LoadedInputs& in,
                                                         const mining::MiningDeployment& dep,
                                                         const mining::MiningSchedule* schedule,
                                                         unsigned threads) {
  std::vector<scenario::ScenarioSpec> scenarios;
  if (m.reliability.scenarios.empty()) {
    scenarios.push_back(m.scenario_spec);
  } else {
    for (const auto& name : m.reliability.scenarios)
      scenarios.push_back(scenario::preset(name));
  }
  std::vector<reliability::CurtailmentPolicy> policies;
  for (const auto& p : m.reliability.policies)
    policies.push_back(reliability::CurtailmentPolicy::parse(p));

  // The sweep applies scenarios to the *unscaled* inputs; the manifest
  // scenario was already applied to `in`, so hand the sweep pre-scenario
  // data when presets are requested. Keeping it simple: the sweep always
  // receives the manifest-scenario inputs, and preset rows rescale on top
  // only when they differ from the manifest scenario.
  std::vector<reliability::SweepRow> rows =
      reliability::scenario_sweep(in.grid_case, in.load, in.renewables, m.start_day,
                                  m.end_day, scenarios, policies,
                                  m.reliability.added_gw, m.reliability.trials, m.seed,
                                  threads);

  if (m.reliability.use_schedule && schedule != nullptr && !dep.sites.empty()) {
    reliability::AdequacyInputs ai =
        reliability::build_inputs(in.load, in.renewables, m.start_day, m.end_day);
    for (int d = m.start_day; d <= m.end_day; ++d)
      for (int h = 1; h <= 24; ++h)
        ai.mining_mw[static_cast<size_t>((d - m.start_day) * 24 + h - 1)] =
            schedule->total(d, h);
    const auto model = reliability::outage_model_from_grid(in.grid_case);
    for (const auto& policy : policies) {
      reliability::SweepRow row;
      row.scenario = "as_dispatched";
      row.policy = policy.name();
      row.added_gw = 0.0;
      row.indices = reliability::assess(model, ai, policy, m.reliability.trials, m.seed,
                                        threads);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

int run_pipeline(const Manifest& m, const std::string& out_dir,
                 const RunOverrides& overrides) {
  Manifest eff = m;
  if (overrides.seed) eff.seed = *overrides.seed;
  if (overrides.trials) eff.reliability.trials = *overrides.trials;

  if (fs::exists(out_dir) && !fs::is_empty(out_dir))
    throw ValidationError("output directory exists and is not empty: " + out_dir);
  const bool created = !fs::exists(out_dir);
  fs::create_directories(out_dir);

  try {
    LoadedInputs in = load_inputs(eff);

    const auto enabled = [&](const std::string& a) {
      return std::find(eff.analyses.begin(), eff.analyses.end(), a) != eff.analyses.end();
    };

    dispatch::RunOptions ro;
    ro.features = eff.features;
    ro.solver = eff.solver;
    if (eff.initial_commit_mode == "explicit") {
      ro.initial_commit = eff.initial_commit_bits;
    } else if (eff.initial_commit_mode == "all_off") {
      size_t nd = 0;
      for (const auto& gen : in.grid_case.generators)
        if (!gen.renewable()) ++nd;
      ro.initial_commit = std::vector<std::uint8_t>(nd, 0);
    }

    // Base system: no mining.
    dispatch::WindowRun base = dispatch::run_window(in.grid_case, in.load, in.renewables,
                                                    {}, eff.start_day, eff.end_day, ro);
    int feasible = 0;
    for (int d = eff.start_day; d <= eff.end_day; ++d)
      if (base.result.day_feasible(d)) ++feasible;
    if (feasible == 0)
      throw SolveError("base system: every day in the window is infeasible");
    write_dispatch_dir(out_dir + "/base", eff, in.grid_case, base, {});

    // Deployment run (identical to base when no deployment is configured).
    mining::MiningDeployment dep;
    if (eff.deployment) {
      std::map<grid::BusId, double> base_prices;
      if (eff.deployment->criterion == mining::SiteCriterion::LowLmp)
        base_prices = dispatch::mean_lmp(base.result);
      dep = resolve_deployment(*eff.deployment, in.grid_case,
                               eff.deployment->criterion == mining::SiteCriterion::LowLmp
                                   ? &base_prices
                                   : nullptr);
    }
    dispatch::WindowRun variant =
        dep.sites.empty() ? base
                          : dispatch::run_window(in.grid_case, in.load, in.renewables, dep,
                                                 eff.start_day, eff.end_day, ro);
    write_dispatch_dir(out_dir + "/variant", eff, in.grid_case, variant, dep);

    if (enabled("carbon")) {
      carbon::CarbonReport rep = carbon::mining_footprint(
          base.result, variant.result, variant.mining, in.grid_case, "deployment");
      fs::create_directories(out_dir + "/carbon");
      spit(out_dir + "/carbon/carbon_report.json", carbon::report_json(rep));
      spit(out_dir + "/carbon/carbon_by_location.csv", carbon::report_csv({rep}));
    }
    if (enabled("reliability")) {
      const auto rows = reliability_sweep_for(eff, in, dep, &variant.mining,
                                              overrides.threads);
      fs::create_directories(out_dir + "/reliability");
      spit(out_dir + "/reliability/reliability_sweep.csv", reliability::sweep_csv(rows));
    }
    if (enabled("market")) {
      market_from_dir(out_dir + "/variant", out_dir + "/market", out_dir + "/base");
    }
    return 0;
  } catch (...) {
    // Leave no partial result tree behind.
    std::error_code ec;
    if (created)
      fs::remove_all(out_dir, ec);
    else
      for (const auto& entry : fs::directory_iterator(out_dir, ec))
        fs::remove_all(entry.path(), ec);
    throw;
  }
}

void compare_dirs(const std::string& base_dir, const std::string& variant_dir,
                  const std::string& out_dir) {
  StoredRun base = read_dispatch_dir(base_dir);
  StoredRun variant = read_dispatch_dir(variant_dir);
  if (base.case_path != variant.case_path)
    throw AnalysisError("compare: runs reference different cases");
  const grid::GridCase g = grid::parse_case(slurp(base.case_path));

  json j;
  const carbon::CarbonReport rep =
      carbon::mining_footprint(base.result, variant.result, variant.mining, g, "compare");
  j["emissions_added_t"] = rep.emissions_added_t;
  j["mining_energy_mwh"] = rep.mining_energy_mwh;

  const auto bs = market::price_statistics(base.result);
  const auto vs = market::price_statistics(variant.result);
  double max_abs_delta = 0.0, mean_delta = 0.0;
  for (int h = 0; h < 24; ++h) {
    const double d = vs[static_cast<size_t>(h)].mean - bs[static_cast<size_t>(h)].mean;
    mean_delta += d / 24.0;
    max_abs_delta = std::max(max_abs_delta, std::abs(d));
  }
  j["lmp_mean_delta"] = mean_delta;
  j["lmp_max_abs_hourly_delta"] = max_abs_delta;

  double base_load = 0.0, variant_load = 0.0, base_mine = 0.0, variant_mine = 0.0;
  for (int d = base.result.start_day; d <= base.result.end_day; ++d) {
    if (!base.result.day_feasible(d) || !variant.result.day_feasible(d)) continue;
    for (int h = 1; h <= 24; ++h) {
      base_load += base.result.total_load.total(d, h);
      variant_load += variant.result.total_load.total(d, h);
      base_mine += base.mining.total(d, h);
      variant_mine += variant.mining.total(d, h);
    }
  }
  j["served_energy_delta_mwh"] = variant_load - base_load;
  j["mining_energy_delta_mwh"] = variant_mine - base_mine;

  fs::create_directories(out_dir);
  spit(out_dir + "/delta_report.json", j.dump(2) + "\n");
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SolveError*>(&e)) return 3;
  if (dynamic_cast<const AnalysisError*>(&e)) return 4;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const ValidationError*>(&e) ||
      dynamic_cast<const IngestError*>(&e))
    return 2;
  return 1;
}

}  // namespace lflsim::pipeline
