// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include "lflsim/reliability.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "lflsim/csv.hpp"
#include "lflsim/kernels.hpp"
#include "lflsim/rng.hpp"

namespace lflsim::reliability {

OutageModel outage_model_from_grid(const grid::GridCase& g) {
  OutageModel m;
  for (const auto& gen : g.generators) {
    if (gen.renewable()) continue;
    m.units.push_back({gen.id, gen.p_max, gen.mttf, gen.mttr});
  }
  return m;
}

std::vector<std::uint8_t> sample_availability(const OutageUnit& unit,
                                              int horizon_hours, std::uint64_t seed,
                                              std::uint64_t stream) {
  std::vector<std::uint8_t> avail(static_cast<size_t>(horizon_hours), 1);
  if (unit.mttf <= 0.0 || unit.mttr <= 0.0)
    throw ValidationError("unit " + std::to_string(unit.id) +
                          ": outage sampling needs mttf > 0 and mttr > 0");
  rng::Stream rs(seed, stream);
  double t = 0.0;
  bool up = true;
  while (t < horizon_hours) {
    const double dur = rs.exponential(up ? unit.mttf : unit.mttr);
    const double end = t + dur;
    if (!up) {
      // Hours whose start falls inside [t, end) read as down.
      const int first = static_cast<int>(std::ceil(t));
      const int last = std::min(horizon_hours, static_cast<int>(std::ceil(end)));
      for (int h = first; h < last; ++h) avail[static_cast<size_t>(h)] = 0;
    }
    t = end;
    up = !up;
  }
  return avail;
}

CurtailmentPolicy CurtailmentPolicy::parse(const std::string& text) {
  CurtailmentPolicy p;
  if (text == "none") {
    p.mode = Mode::None;
  } else if (text == "full_flex") {
    p.mode = Mode::FullFlex;
  } else if (text.rfind("partial_flex:", 0) == 0) {
    p.mode = Mode::PartialFlex;
    p.fraction = std::stod(text.substr(13));
    if (p.fraction < 0.0 || p.fraction > 1.0)
      throw ParseError("partial_flex fraction must be in [0, 1]");
  } else {
    throw ParseError("unknown curtailment policy '" + text +
                     "' (none | full_flex | partial_flex:<f>)");
  }
  return p;
}

std::string CurtailmentPolicy::name() const {
  switch (mode) {
    case Mode::None: return "none";
    case Mode::FullFlex: return "full_flex";
    case Mode::PartialFlex: return "partial_flex:" + csv::fmt(fraction);
  }
  return "none";
}

AdequacyInputs build_inputs(const HourlySeries& load, const HourlySeries& renewables,
                            int start_day, int end_day) {
  if (end_day < start_day) throw ValidationError("empty adequacy window");
  const int hours = (end_day - start_day + 1) * 24;
  AdequacyInputs in;
  in.firm_mw.assign(static_cast<size_t>(hours), 0.0);
  in.mining_mw.assign(static_cast<size_t>(hours), 0.0);
  in.renewable_mw.assign(static_cast<size_t>(hours), 0.0);
  for (int d = start_day; d <= end_day; ++d)
    for (int h = 1; h <= 24; ++h) {
      const size_t i = static_cast<size_t>((d - start_day) * 24 + h - 1);
      in.firm_mw[i] = load.total(d, h);
      in.renewable_mw[i] = renewables.total(d, h);
    }
  return in;
}

namespace {

struct TrialOutcome {
  double lolh = 0.0;
  double eens = 0.0;
};

TrialOutcome run_trial(const OutageModel& model, const AdequacyInputs& in,
                       double keep_frac, std::uint64_t seed, long trial,
                       std::vector<double>& cap_scratch) {
  const size_t hours = in.firm_mw.size();
  cap_scratch.assign(in.renewable_mw.begin(), in.renewable_mw.end());
  for (size_t u = 0; u < model.units.size(); ++u) {
    const auto& unit = model.units[u];
    const std::uint64_t stream =
        (static_cast<std::uint64_t>(trial) << 20) | static_cast<std::uint64_t>(u);
    const auto avail = sample_availability(unit, static_cast<int>(hours), seed, stream);
    for (size_t h = 0; h < hours; ++h)
      if (avail[h]) cap_scratch[h] += unit.p_max;
  }
  const auto stats = kernels::adequacy_scan(in.firm_mw.data(), in.mining_mw.data(),
                                            cap_scratch.data(), keep_frac, hours);
  const double annualize = 8760.0 / static_cast<double>(hours);
  return {static_cast<double>(stats.loss_hours) * annualize,
          stats.unserved_mwh * annualize};
}

}  // namespace

ReliabilityIndices assess(const OutageModel& model, const AdequacyInputs& in,
                          const CurtailmentPolicy& policy, long trials,
                          std::uint64_t seed, unsigned threads) {
  if (trials < 1) throw ValidationError("assess needs at least 1 trial");
  if (in.firm_mw.size() != in.mining_mw.size() ||
      in.firm_mw.size() != in.renewable_mw.size() || in.firm_mw.empty())
    throw ValidationError("adequacy inputs must be equal-length and non-empty");
  const double keep_frac = 1.0 - policy.sheddable();

  std::vector<TrialOutcome> per_trial(static_cast<size_t>(trials));
  const unsigned n_threads = std::max(1u, threads);
  const auto worker = [&](long lo, long hi) {
    std::vector<double> scratch;
    for (long t = lo; t < hi; ++t)
      per_trial[static_cast<size_t>(t)] = run_trial(model, in, keep_frac, seed, t, scratch);
  };
  if (n_threads == 1 || trials < 64) {
    worker(0, trials);
  } else {
    std::vector<std::thread> pool;
    const long chunk = (trials + n_threads - 1) / n_threads;
    for (unsigned k = 0; k < n_threads; ++k) {
      const long lo = static_cast<long>(k) * chunk;
      const long hi = std::min<long>(trials, lo + chunk);
      if (lo < hi) pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // Sequential reduction in trial order keeps results independent of the
  // thread count.
  ReliabilityIndices out;
  out.trials = trials;
  out.seed = seed;
  double sum_l = 0.0, sum_e = 0.0;
  for (const auto& t : per_trial) {
    sum_l += t.lolh;
    sum_e += t.eens;
  }
  out.lolh_h_per_year = sum_l / static_cast<double>(trials);
  out.eens_mwh_per_year = sum_e / static_cast<double>(trials);
  if (trials > 1) {
    double ssl = 0.0, sse = 0.0;
    for (const auto& t : per_trial) {
      ssl += (t.lolh - out.lolh_h_per_year) * (t.lolh - out.lolh_h_per_year);
      sse += (t.eens - out.eens_mwh_per_year) * (t.eens - out.eens_mwh_per_year);
    }
    const double n = static_cast<double>(trials);
    out.ci_lolh = 1.96 * std::sqrt(ssl / (n - 1.0) / n);
    out.ci_eens = 1.96 * std::sqrt(sse / (n - 1.0) / n);
  }
  return out;
}

std::vector<SweepRow> scenario_sweep(const grid::GridCase& g,
                                     const HourlySeries& load,
                                     const HourlySeries& renewables,
                                     int start_day, int end_day,
                                     const std::vector<scenario::ScenarioSpec>& scenarios,
                                     const std::vector<CurtailmentPolicy>& policies,
                                     const std::vector<double>& added_gw, long trials,
                                     std::uint64_t seed, unsigned threads) {
  std::vector<SweepRow> rows;
  for (const auto& spec : scenarios) {
    const auto applied = scenario::apply_scenario(g, load, renewables, spec);
    const OutageModel model = outage_model_from_grid(applied.grid);
    AdequacyInputs in = build_inputs(applied.load, applied.renewables, start_day, end_day);
    for (const auto& policy : policies) {
      for (double gw : added_gw) {
        AdequacyInputs sized = in;
        std::fill(sized.mining_mw.begin(), sized.mining_mw.end(), gw * 1000.0);
        SweepRow row;
        row.scenario = spec.name;
        row.policy = policy.name();
        row.added_gw = gw;
        row.indices = assess(model, sized, policy, trials, seed, threads);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "scenario,policy,added_gw,lolh_h_per_y,eens_mwh_per_y,ci_lolh,ci_eens,"
      "trials,seed\n";
  for (const auto& r : rows) {
    out += r.scenario + "," + r.policy + "," + csv::fmt(r.added_gw) + "," +
           csv::fmt(r.indices.lolh_h_per_year) + "," +
           csv::fmt(r.indices.eens_mwh_per_year) + "," + csv::fmt(r.indices.ci_lolh) +
           "," + csv::fmt(r.indices.ci_eens) + "," + std::to_string(r.indices.trials) +
           "," + std::to_string(r.indices.seed) + "\n";
  }
  return out;
}

}  // namespace lflsim::reliability
