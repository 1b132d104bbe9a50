// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// lflsim command line: ingest | deploy | dispatch | carbon | reliability |
// market | run | compare. One manifest document drives the simulation
// subcommands; see README for the format.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lflsim/csv.hpp"
#include "lflsim/kernels.hpp"
#include "lflsim/pipeline.hpp"
#include "lflsim/scada.hpp"

namespace fs = std::filesystem;
using namespace lflsim;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw AnalysisError("cannot write file: " + path);
  out << content;
}

void set_kernel_backend(const std::string& name) {
  if (name == "auto") return kernels::set_backend(kernels::Backend::Auto);
  if (name == "scalar") return kernels::set_backend(kernels::Backend::Scalar);
  if (name == "avx2") return kernels::set_backend(kernels::Backend::Avx2);
  throw ParseError("unknown kernel backend '" + name + "'");
}

int cmd_ingest(const std::string& scada_path, const std::string& out_dir,
               double spike_threshold, const std::string& resolution) {
  const auto raws = scada::parse_scada_csv(slurp(scada_path));
  if (raws.empty()) throw IngestError("no facilities in " + scada_path);
  std::vector<scada::RawMeterSeries> cleaned;
  cleaned.reserve(raws.size());
  for (const auto& r : raws) {
    const double thr =
        spike_threshold > 0.0 ? spike_threshold : scada::default_spike_threshold(r);
    cleaned.push_back(scada::clean_series(r, thr));
  }
  const auto counties = scada::aggregate_hourly(cleaned);
  fs::create_directories(out_dir);
  spit(out_dir + "/county_series.csv", scada::county_series_csv(counties));

  // Pairwise county correlations at the requested resolution.
  nlohmann::json corr = nlohmann::json::object();
  const auto series_at = [&](const scada::CountyMiningSeries& cs,
                             const std::string& county) -> std::vector<double> {
    if (resolution == "hourly") return cs.hourly_mw;
    // 5-minute resolution: sum facility readings per sample.
    std::vector<double> v;
    for (const auto& c : cleaned)
      if (c.county == county) {
        if (v.empty()) v.assign(c.mw.size(), 0.0);
        for (size_t i = 0; i < c.mw.size(); ++i) v[i] += c.mw[i];
      }
    return v;
  };
  for (size_t i = 0; i < counties.size(); ++i)
    for (size_t j = i + 1; j < counties.size(); ++j) {
      try {
        corr[counties[i].county + "_vs_" + counties[j].county] =
            scada::pearson(series_at(counties[i], counties[i].county),
                           series_at(counties[j], counties[j].county));
      } catch (const AnalysisError&) {
        corr[counties[i].county + "_vs_" + counties[j].county] = nullptr;
      }
    }
  nlohmann::json rep;
  rep["resolution"] = resolution;
  rep["counties"] = nlohmann::json::array();
  for (const auto& c : counties) rep["counties"].push_back(c.county);
  rep["correlations"] = corr;
  spit(out_dir + "/correlation_report.json", rep.dump(2) + "\n");
  std::printf("ingest: %zu facilities -> %zu county series\n", raws.size(),
              counties.size());
  return 0;
}

int cmd_deploy(const std::string& manifest_path, const std::string& out_dir,
               const std::string& base_dir) {
  const pipeline::Manifest m = pipeline::load_manifest(manifest_path);
  if (!m.deployment) throw ValidationError("manifest has no deployment block");
  pipeline::LoadedInputs in = pipeline::load_inputs(m);

  std::map<grid::BusId, double> base_prices;
  const bool needs_prices =
      m.deployment->criterion == mining::SiteCriterion::LowLmp;
  if (needs_prices) {
    if (!base_dir.empty()) {
      const auto stored = pipeline::read_dispatch_dir(base_dir);
      base_prices = dispatch::mean_lmp(stored.result);
    } else {
      dispatch::RunOptions ro;
      ro.features = m.features;
      ro.solver = m.solver;
      const auto base = dispatch::run_window(in.grid_case, in.load, in.renewables, {},
                                             m.start_day, m.end_day, ro);
      base_prices = dispatch::mean_lmp(base.result);
    }
  }
  const auto dep = pipeline::resolve_deployment(*m.deployment, in.grid_case,
                                                needs_prices ? &base_prices : nullptr);
  fs::create_directories(out_dir);
  nlohmann::json j;
  j["sites"] = dep.sites;
  j["flexibility"] = mining::to_string(dep.flexibility);
  j["price_threshold"] = dep.price_threshold;
  nlohmann::json caps = nlohmann::json::object();
  for (const auto& [busv, mw] : dep.capacity_mw) caps[std::to_string(busv)] = mw;
  j["capacity_mw"] = caps;
  j["time_varying_capacity"] = dep.capacity_series.has_value();
  spit(out_dir + "/deployment_resolved.json", j.dump(2) + "\n");

  if (dep.flexibility != mining::Flexibility::PriceResponsive) {
    const auto schedule =
        mining::evaluate_flexibility(dep, m.start_day, m.end_day, nullptr);
    std::string csv = "bus,day,hour,mw\n";
    for (const auto& [busv, row] : schedule.values)
      for (int d = schedule.start_day; d <= schedule.end_day; ++d)
        for (int h = 1; h <= 24; ++h)
          csv += std::to_string(busv) + "," + std::to_string(d) + "," +
                 std::to_string(h) + "," +
                 csv::fmt(row[static_cast<size_t>(schedule.index(d, h))]) + "\n";
    spit(out_dir + "/mining_schedule.csv", csv);
  }
  std::printf("deploy: %zu sites\n", dep.sites.size());
  return 0;
}

int cmd_dispatch(const std::string& manifest_path, const std::string& out_dir) {
  const pipeline::Manifest m = pipeline::load_manifest(manifest_path);
  pipeline::LoadedInputs in = pipeline::load_inputs(m);
  dispatch::RunOptions ro;
  ro.features = m.features;
  ro.solver = m.solver;

  mining::MiningDeployment dep;
  if (m.deployment) {
    std::map<grid::BusId, double> base_prices;
    const bool needs_prices = m.deployment->criterion == mining::SiteCriterion::LowLmp;
    if (needs_prices) {
      const auto base = dispatch::run_window(in.grid_case, in.load, in.renewables, {},
                                             m.start_day, m.end_day, ro);
      base_prices = dispatch::mean_lmp(base.result);
    }
    dep = pipeline::resolve_deployment(*m.deployment, in.grid_case,
                                       needs_prices ? &base_prices : nullptr);
  }
  const auto run = dispatch::run_window(in.grid_case, in.load, in.renewables, dep,
                                        m.start_day, m.end_day, ro);
  pipeline::write_dispatch_dir(out_dir, m, in.grid_case, run, dep);
  std::printf("dispatch: %d days, %zu infeasible\n", run.result.days(),
              run.result.infeasible_days.size());
  return 0;
}

int cmd_reliability(const std::string& manifest_path, const std::string& out_dir,
                    long trials_override, std::uint64_t seed_override, bool has_seed,
                    unsigned threads) {
  pipeline::Manifest m = pipeline::load_manifest(manifest_path);
  if (trials_override > 0) m.reliability.trials = trials_override;
  if (has_seed) m.seed = seed_override;
  pipeline::LoadedInputs in = pipeline::load_inputs(m);
  const auto rows = pipeline::reliability_sweep_for(m, in, {}, nullptr, threads);
  fs::create_directories(out_dir);
  spit(out_dir + "/reliability_sweep.csv", reliability::sweep_csv(rows));
  std::printf("reliability: %zu sweep rows, %ld trials each\n", rows.size(),
              m.reliability.trials);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grid impact simulator for large flexible (mining) loads"};
  app.require_subcommand(1);

  std::string kernel_backend = "auto";
  app.add_option("--kernels", kernel_backend,
                 "numeric kernel backend: auto|scalar|avx2");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "clean and aggregate meter telemetry");
  std::string scada_path, out_dir, resolution = "hourly";
  double spike_threshold = 0.0;
  ingest->add_option("--scada", scada_path, "facility telemetry csv")->required();
  ingest->add_option("--out-dir", out_dir, "output directory")->required();
  ingest->add_option("--spike-threshold", spike_threshold,
                     "absolute spike threshold in MW (default: 4x p99 per series)");
  ingest->add_option("--resolution", resolution,
                     "correlation resolution: hourly|5min");

  // deploy
  auto* deploy = app.add_subcommand("deploy", "resolve a mining deployment");
  std::string manifest_path, base_dir;
  deploy->add_option("--manifest", manifest_path, "run manifest")->required();
  deploy->add_option("--out-dir", out_dir, "output directory")->required();
  deploy->add_option("--base-dir", base_dir,
                     "existing base dispatch directory (for low_lmp ranking)");

  // dispatch
  auto* dispatch_cmd = app.add_subcommand("dispatch", "run day-ahead/real-time clearing");
  dispatch_cmd->add_option("--manifest", manifest_path, "run manifest")->required();
  dispatch_cmd->add_option("--out-dir", out_dir, "output directory")->required();

  // carbon
  auto* carbon_cmd = app.add_subcommand("carbon", "emission attribution between runs");
  std::string variant_dir;
  carbon_cmd->add_option("--base-dir", base_dir, "base dispatch directory")->required();
  carbon_cmd->add_option("--variant-dir", variant_dir, "deployment dispatch directory")
      ->required();
  carbon_cmd->add_option("--out-dir", out_dir, "output directory")->required();

  // reliability
  auto* rel = app.add_subcommand("reliability", "Monte-Carlo adequacy sweep");
  long trials = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  rel->add_option("--manifest", manifest_path, "run manifest")->required();
  rel->add_option("--out-dir", out_dir, "output directory")->required();
  rel->add_option("--trials", trials, "override trial count");
  auto* seed_opt = rel->add_option("--seed", seed, "override seed");
  rel->add_option("--threads", threads, "worker threads");

  // market
  auto* market_cmd = app.add_subcommand("market", "price statistics and series");
  market_cmd->add_option("--dir", variant_dir, "dispatch directory")->required();
  market_cmd->add_option("--out-dir", out_dir, "output directory")->required();
  market_cmd->add_option("--base-dir", base_dir, "optional base for deltas");

  // run
  auto* run_cmd = app.add_subcommand("run", "full pipeline from a manifest");
  run_cmd->add_option("--manifest", manifest_path, "run manifest")->required();
  run_cmd->add_option("--out-dir", out_dir, "output directory")->required();
  run_cmd->add_option("--trials", trials, "override reliability trials");
  auto* run_seed_opt = run_cmd->add_option("--seed", seed, "override seed");
  run_cmd->add_option("--threads", threads, "worker threads");

  // compare
  auto* compare_cmd = app.add_subcommand("compare", "delta report between two runs");
  compare_cmd->add_option("--base-dir", base_dir, "base run directory")->required();
  compare_cmd->add_option("--variant-dir", variant_dir, "variant run directory")
      ->required();
  compare_cmd->add_option("--out-dir", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    set_kernel_backend(kernel_backend);
    if (*ingest) return cmd_ingest(scada_path, out_dir, spike_threshold, resolution);
    if (*deploy) return cmd_deploy(manifest_path, out_dir, base_dir);
    if (*dispatch_cmd) return cmd_dispatch(manifest_path, out_dir);
    if (*carbon_cmd) {
      pipeline::carbon_from_dirs(base_dir, variant_dir, out_dir);
      std::printf("carbon: report written to %s\n", out_dir.c_str());
      return 0;
    }
    if (*rel)
      return cmd_reliability(manifest_path, out_dir, trials, seed,
                             seed_opt->count() > 0, threads);
    if (*market_cmd) {
      pipeline::market_from_dir(variant_dir, out_dir, base_dir);
      std::printf("market: tables written to %s\n", out_dir.c_str());
      return 0;
    }
    if (*run_cmd) {
      const pipeline::Manifest m = pipeline::load_manifest(manifest_path);
      pipeline::RunOverrides ov;
      if (run_seed_opt->count() > 0) ov.seed = seed;
      if (trials > 0) ov.trials = trials;
      ov.threads = threads;
      const int rc = pipeline::run_pipeline(m, out_dir, ov);
      std::printf("run: results in %s\n", out_dir.c_str());
      return rc;
    }
    if (*compare_cmd) {
      pipeline::compare_dirs(base_dir, variant_dir, out_dir);
      std::printf("compare: delta report written to %s\n", out_dir.c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return pipeline::exit_code_for(e);
  }
  return 1;
}
