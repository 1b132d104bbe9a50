// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include "lflsim/dispatch.hpp"

#include <algorithm>
#include <cmath>

namespace lflsim::dispatch {

namespace {

// Usable segment widths up to p_max (the curve may extend beyond it).
std::vector<std::pair<double, double>> segment_widths(const grid::Generator& gen) {
  std::vector<std::pair<double, double>> out;  // (width, slope)
  double prev = 0.0;
  for (const auto& seg : gen.cost_curve) {
    const double top = std::min(seg.breakpoint_mw, gen.p_max);
    if (top > prev) out.emplace_back(top - prev, seg.slope_usd_per_mwh);
    prev = seg.breakpoint_mw;
    if (prev >= gen.p_max) break;
  }
  return out;
}

int slack_bus_index(const grid::GridCase& g) {
  int best = 0;
  for (size_t i = 1; i < g.buses.size(); ++i)
    if (g.buses[i].id < g.buses[static_cast<size_t>(best)].id) best = static_cast<int>(i);
  return best;
}

// Shared constructor for the day-ahead MILP and the real-time LP. When
// `fixed` is non-null the commitment binaries become constants from it.
UcModel build_model(const grid::GridCase& g, const DayInputs& day,
                    const std::vector<std::uint8_t>* u0,
                    const std::vector<std::vector<std::uint8_t>>* fixed,
                    const Features& features) {
  const int H = day.hours;
  if (H < 1) throw ValidationError("day model needs at least one hour");
  const int n_bus = static_cast<int>(g.buses.size());
  const int n_br = static_cast<int>(g.branches.size());
  if (static_cast<int>(day.total_load.size()) != n_bus)
    throw ValidationError("day inputs: total_load must cover every bus");

  UcModel m;
  m.hours = H;
  m.commitment_fixed = fixed != nullptr;
  for (size_t i = 0; i < g.generators.size(); ++i)
    (g.generators[i].renewable() ? m.ren : m.disp).push_back(static_cast<int>(i));

  auto& p = m.problem;
  const int nd = static_cast<int>(m.disp.size());
  const int nr = static_cast<int>(m.ren.size());

  const auto commit_value = [&](int di, int h) -> double {
    return (*fixed)[static_cast<size_t>(di)][static_cast<size_t>(h)] ? 1.0 : 0.0;
  };

  // Variables.
  m.seg_vars.assign(static_cast<size_t>(nd), std::vector<int>(static_cast<size_t>(H), -1));
  m.seg_counts.assign(static_cast<size_t>(nd), 0);
  m.u_var.assign(static_cast<size_t>(nd), std::vector<int>(static_cast<size_t>(H), -1));
  m.v_var = m.u_var;
  m.w_var = m.u_var;
  m.ren_var.assign(static_cast<size_t>(nr), std::vector<int>(static_cast<size_t>(H), -1));
  m.flow_var.assign(static_cast<size_t>(n_br), std::vector<int>(static_cast<size_t>(H), -1));
  std::vector<std::vector<int>> theta(static_cast<size_t>(n_bus),
                                      std::vector<int>(static_cast<size_t>(H), -1));

  std::vector<std::vector<std::pair<double, double>>> widths(static_cast<size_t>(nd));
  for (int di = 0; di < nd; ++di) {
    const auto& gen = g.generators[static_cast<size_t>(m.disp[static_cast<size_t>(di)])];
    widths[static_cast<size_t>(di)] = segment_widths(gen);
    m.seg_counts[static_cast<size_t>(di)] =
        static_cast<int>(widths[static_cast<size_t>(di)].size());
  }

  for (int h = 0; h < H; ++h) {
    for (int di = 0; di < nd; ++di) {
      const auto& gen = g.generators[static_cast<size_t>(m.disp[static_cast<size_t>(di)])];
      const bool on = fixed == nullptr || commit_value(di, h) > 0.5;
      int first = -1;
      for (const auto& [w, slope] : widths[static_cast<size_t>(di)]) {
        const int var = p.add_var(0.0, on ? w : 0.0, slope);
        if (first < 0) first = var;
      }
      m.seg_vars[static_cast<size_t>(di)][static_cast<size_t>(h)] = first;
      if (fixed == nullptr) {
        m.u_var[static_cast<size_t>(di)][static_cast<size_t>(h)] =
            p.add_var(0.0, 1.0, gen.no_load_cost, /*integer=*/true);
        m.v_var[static_cast<size_t>(di)][static_cast<size_t>(h)] =
            p.add_var(0.0, 1.0, gen.startup_cost);
        m.w_var[static_cast<size_t>(di)][static_cast<size_t>(h)] = p.add_var(0.0, 1.0, 0.0);
      }
    }
    for (int ri = 0; ri < nr; ++ri) {
      const int gi = m.ren[static_cast<size_t>(ri)];
      const double avail = day.renewable_mw.empty()
                               ? g.generators[static_cast<size_t>(gi)].p_max
                               : day.renewable_mw[static_cast<size_t>(gi)][static_cast<size_t>(h)];
      m.ren_var[static_cast<size_t>(ri)][static_cast<size_t>(h)] =
          p.add_var(0.0, std::max(0.0, avail), 0.0);
    }
    const int slack = slack_bus_index(g);
    for (int b = 0; b < n_bus; ++b)
      theta[static_cast<size_t>(b)][static_cast<size_t>(h)] =
          b == slack ? p.add_var(0.0, 0.0, 0.0) : p.add_var(-lp::kInf, lp::kInf, 0.0);
    for (int l = 0; l < n_br; ++l) {
      const auto& br = g.branches[static_cast<size_t>(l)];
      m.flow_var[static_cast<size_t>(l)][static_cast<size_t>(h)] =
          p.add_var(-br.flow_limit, br.flow_limit, 0.0);
    }
  }

  // Rows.
  m.balance_row.assign(static_cast<size_t>(n_bus), std::vector<int>(static_cast<size_t>(H), -1));
  for (int h = 0; h < H; ++h) {
    // Power balance per bus: generation + inflow - outflow = load.
    for (int b = 0; b < n_bus; ++b) {
      const int row =
          p.add_row(lp::RowSense::EQ, day.total_load[static_cast<size_t>(b)][static_cast<size_t>(h)]);
      m.balance_row[static_cast<size_t>(b)][static_cast<size_t>(h)] = row;
      for (int di = 0; di < nd; ++di) {
        const int gi = m.disp[static_cast<size_t>(di)];
        if (g.bus_index(g.generators[static_cast<size_t>(gi)].bus_id) != b) continue;
        const int first = m.seg_vars[static_cast<size_t>(di)][static_cast<size_t>(h)];
        for (int s = 0; s < m.seg_counts[static_cast<size_t>(di)]; ++s)
          p.add_term(row, first + s, 1.0);
      }
      for (int ri = 0; ri < nr; ++ri) {
        const int gi = m.ren[static_cast<size_t>(ri)];
        if (g.bus_index(g.generators[static_cast<size_t>(gi)].bus_id) != b) continue;
        p.add_term(row, m.ren_var[static_cast<size_t>(ri)][static_cast<size_t>(h)], 1.0);
      }
      for (int l = 0; l < n_br; ++l) {
        const auto& br = g.branches[static_cast<size_t>(l)];
        const int f = m.flow_var[static_cast<size_t>(l)][static_cast<size_t>(h)];
        if (g.bus_index(br.to_bus) == b) p.add_term(row, f, 1.0);
        if (g.bus_index(br.from_bus) == b) p.add_term(row, f, -1.0);
      }
    }
    // DC flow definition: f = base_mva/x * (theta_from - theta_to).
    for (int l = 0; l < n_br; ++l) {
      const auto& br = g.branches[static_cast<size_t>(l)];
      const double b_susceptance = g.base_mva / br.reactance;
      const int row = p.add_row(lp::RowSense::EQ, 0.0);
      p.add_term(row, m.flow_var[static_cast<size_t>(l)][static_cast<size_t>(h)], 1.0);
      p.add_term(row, theta[static_cast<size_t>(g.bus_index(br.from_bus))][static_cast<size_t>(h)],
                 -b_susceptance);
      p.add_term(row, theta[static_cast<size_t>(g.bus_index(br.to_bus))][static_cast<size_t>(h)],
                 b_susceptance);
    }
  }

  for (int di = 0; di < nd; ++di) {
    const auto& gen = g.generators[static_cast<size_t>(m.disp[static_cast<size_t>(di)])];
    const auto seg_sum_terms = [&](int row, int h, double coeff) {
      const int first = m.seg_vars[static_cast<size_t>(di)][static_cast<size_t>(h)];
      for (int s = 0; s < m.seg_counts[static_cast<size_t>(di)]; ++s)
        p.add_term(row, first + s, coeff);
    };
    for (int h = 0; h < H; ++h) {
      if (fixed == nullptr) {
        const int u = m.u_var[static_cast<size_t>(di)][static_cast<size_t>(h)];
        // Output window gated by commitment.
        if (gen.p_min > 0.0) {
          const int row = p.add_row(lp::RowSense::GE, 0.0);
          seg_sum_terms(row, h, 1.0);
          p.add_term(row, u, -gen.p_min);
        }
        {
          const int row = p.add_row(lp::RowSense::LE, 0.0);
          seg_sum_terms(row, h, 1.0);
          p.add_term(row, u, -gen.p_max);
        }
        // Commitment transition: v - w = u_h - u_{h-1}.
        const int row = p.add_row(
            lp::RowSense::EQ,
            h == 0 ? -static_cast<double>((*u0)[static_cast<size_t>(di)]) : 0.0);
        p.add_term(row, m.v_var[static_cast<size_t>(di)][static_cast<size_t>(h)], 1.0);
        p.add_term(row, m.w_var[static_cast<size_t>(di)][static_cast<size_t>(h)], -1.0);
        p.add_term(row, u, -1.0);
        if (h > 0)
          p.add_term(row, m.u_var[static_cast<size_t>(di)][static_cast<size_t>(h - 1)], 1.0);
      } else {
        // Fixed commitment: minimum output when on (max is via bounds).
        if (gen.p_min > 0.0 && commit_value(di, h) > 0.5) {
          const int row = p.add_row(lp::RowSense::GE, gen.p_min);
          seg_sum_terms(row, h, 1.0);
        }
      }
    }
    if (fixed == nullptr && features.min_up_down) {
      // In-day minimum run/rest windows; pre-window history is taken as
      // satisfied at the day boundary.
      const int tu = gen.min_up.value_or(1);
      for (int h = 0; tu > 1 && h < H; ++h) {
        const int row = p.add_row(lp::RowSense::LE, 0.0);
        for (int s = std::max(0, h - tu + 1); s <= h; ++s)
          p.add_term(row, m.v_var[static_cast<size_t>(di)][static_cast<size_t>(s)], 1.0);
        p.add_term(row, m.u_var[static_cast<size_t>(di)][static_cast<size_t>(h)], -1.0);
      }
      const int td = gen.min_down.value_or(1);
      for (int h = 0; td > 1 && h < H; ++h) {
        const int row = p.add_row(lp::RowSense::LE, 1.0);
        for (int s = std::max(0, h - td + 1); s <= h; ++s)
          p.add_term(row, m.w_var[static_cast<size_t>(di)][static_cast<size_t>(s)], 1.0);
        p.add_term(row, m.u_var[static_cast<size_t>(di)][static_cast<size_t>(h)], 1.0);
      }
    }
    if (features.ramp && gen.ramp_limit) {
      const double r = *gen.ramp_limit;
      for (int h = 1; h < H; ++h) {
        if (fixed == nullptr) {
          // ramp binds only while the unit stays on: delta <= r when
          // committed on the relevant side, relaxed to p_max across starts
          // and stops. Written against u so a costless startup indicator
          // cannot loosen it.
          int row = p.add_row(lp::RowSense::LE, gen.p_max);
          seg_sum_terms(row, h, 1.0);
          seg_sum_terms(row, h - 1, -1.0);
          p.add_term(row, m.u_var[static_cast<size_t>(di)][static_cast<size_t>(h - 1)],
                     gen.p_max - r);
          row = p.add_row(lp::RowSense::LE, gen.p_max);
          seg_sum_terms(row, h - 1, 1.0);
          seg_sum_terms(row, h, -1.0);
          p.add_term(row, m.u_var[static_cast<size_t>(di)][static_cast<size_t>(h)],
                     gen.p_max - r);
        } else {
          const bool on_now = commit_value(di, h) > 0.5;
          const bool on_prev = commit_value(di, h - 1) > 0.5;
          int row = p.add_row(lp::RowSense::LE,
                              r + (on_now && !on_prev ? gen.p_max : 0.0));
          seg_sum_terms(row, h, 1.0);
          seg_sum_terms(row, h - 1, -1.0);
          row = p.add_row(lp::RowSense::LE,
                          r + (!on_now && on_prev ? gen.p_max : 0.0));
          seg_sum_terms(row, h - 1, 1.0);
          seg_sum_terms(row, h, -1.0);
        }
      }
    }
  }
  return m;
}

std::vector<std::vector<double>> extract_pg(const grid::GridCase& g, const UcModel& m,
                                            const std::vector<double>& x) {
  std::vector<std::vector<double>> pg(
      g.generators.size(), std::vector<double>(static_cast<size_t>(m.hours), 0.0));
  for (size_t di = 0; di < m.disp.size(); ++di) {
    for (int h = 0; h < m.hours; ++h) {
      double sum = 0.0;
      const int first = m.seg_vars[di][static_cast<size_t>(h)];
      for (int s = 0; s < m.seg_counts[di]; ++s)
        sum += x[static_cast<size_t>(first + s)];
      pg[static_cast<size_t>(m.disp[di])][static_cast<size_t>(h)] = sum;
    }
  }
  for (size_t ri = 0; ri < m.ren.size(); ++ri)
    for (int h = 0; h < m.hours; ++h)
      pg[static_cast<size_t>(m.ren[ri])][static_cast<size_t>(h)] =
          x[static_cast<size_t>(m.ren_var[ri][static_cast<size_t>(h)])];
  return pg;
}

}  // namespace

UcModel build_scuc(const grid::GridCase& g, const DayInputs& day,
                   const std::vector<std::uint8_t>& u0, const Features& features) {
  return build_model(g, day, &u0, nullptr, features);
}

UcModel build_sced(const grid::GridCase& g, const DayInputs& day,
                   const std::vector<std::vector<std::uint8_t>>& commit,
                   const Features& features) {
  return build_model(g, day, nullptr, &commit, features);
}

ScucSolution solve_scuc(const grid::GridCase& g, const DayInputs& day,
                        const std::vector<std::uint8_t>& u0, const Features& features,
                        const lp::Options& opt) {
  ScucSolution out;
  UcModel m = build_scuc(g, day, u0, features);
  lp::Solution mip = lp::solve_mip(m.problem, opt);
  out.status = mip.status;
  out.nodes = mip.nodes;
  if (mip.status != lp::SolveStatus::Optimal) return out;

  out.commit.assign(m.disp.size(), std::vector<std::uint8_t>(static_cast<size_t>(m.hours), 0));
  for (size_t di = 0; di < m.disp.size(); ++di)
    for (int h = 0; h < m.hours; ++h)
      out.commit[di][static_cast<size_t>(h)] =
          mip.x[static_cast<size_t>(m.u_var[di][static_cast<size_t>(h)])] > 0.5 ? 1 : 0;

  // Reference prices: duals of the LP with the incumbent commitments fixed.
  UcModel fixed = build_sced(g, day, out.commit, features);
  lp::Solution ref = lp::solve_lp(fixed.problem, opt);
  if (ref.status != lp::SolveStatus::Optimal)
    throw SolveError("pricing LP with fixed commitments unexpectedly " +
                     lp::to_string(ref.status));
  out.objective = mip.objective;
  out.pg = extract_pg(g, fixed, ref.x);
  out.ref_price.assign(g.buses.size(), std::vector<double>(static_cast<size_t>(m.hours), 0.0));
  for (size_t b = 0; b < g.buses.size(); ++b)
    for (int h = 0; h < m.hours; ++h)
      out.ref_price[b][static_cast<size_t>(h)] =
          ref.row_dual[static_cast<size_t>(fixed.balance_row[b][static_cast<size_t>(h)])];
  return out;
}

ScedSolution solve_sced(const grid::GridCase& g, const DayInputs& day,
                        const std::vector<std::vector<std::uint8_t>>& commit,
                        const Features& features, const lp::Options& opt) {
  ScedSolution out;
  UcModel m = build_sced(g, day, commit, features);
  lp::Solution sol = lp::solve_lp(m.problem, opt);
  out.status = sol.status;
  if (sol.status != lp::SolveStatus::Optimal) return out;
  out.objective = sol.objective;
  out.pg = extract_pg(g, m, sol.x);
  out.lmp.assign(g.buses.size(), std::vector<double>(static_cast<size_t>(m.hours), 0.0));
  for (size_t b = 0; b < g.buses.size(); ++b)
    for (int h = 0; h < m.hours; ++h)
      out.lmp[b][static_cast<size_t>(h)] =
          sol.row_dual[static_cast<size_t>(m.balance_row[b][static_cast<size_t>(h)])];
  out.flow.assign(g.branches.size(), std::vector<double>(static_cast<size_t>(m.hours), 0.0));
  for (size_t l = 0; l < g.branches.size(); ++l)
    for (int h = 0; h < m.hours; ++h)
      out.flow[l][static_cast<size_t>(h)] =
          sol.x[static_cast<size_t>(m.flow_var[l][static_cast<size_t>(h)])];
  return out;
}

WindowRun run_window(const grid::GridCase& g, const HourlySeries& load,
                     const HourlySeries& renewables,
                     const mining::MiningDeployment& dep, int start_day, int end_day,
                     const RunOptions& options) {
  if (end_day < start_day) throw ValidationError("empty dispatch window");
  if (start_day < load.start_day || end_day > load.end_day)
    throw ValidationError("dispatch window exceeds the load profile window");
  if (dep.flexibility == mining::Flexibility::CommandFollowing)
    throw ValidationError(
        "command_following deployments are not used in market simulation; "
        "evaluate them directly or via the reliability curtailment policy");

  const int n_bus = static_cast<int>(g.buses.size());
  const int days = end_day - start_day + 1;

  std::vector<int> disp_idx;
  for (size_t i = 0; i < g.generators.size(); ++i)
    if (!g.generators[i].renewable()) disp_idx.push_back(static_cast<int>(i));

  WindowRun run;
  DispatchResult& res = run.result;
  res.start_day = start_day;
  res.end_day = end_day;
  res.gen_ids = g.gen_ids();
  res.bus_ids = g.bus_ids();
  res.commit.assign(g.generators.size(),
                    std::vector<std::uint8_t>(static_cast<size_t>(days * 24), 0));
  res.pg.assign(g.generators.size(), std::vector<double>(static_cast<size_t>(days * 24), 0.0));
  res.lmp.assign(g.buses.size(), std::vector<double>(static_cast<size_t>(days * 24), 0.0));
  res.total_load.start_day = start_day;
  res.total_load.end_day = end_day;
  res.day_ok.assign(static_cast<size_t>(days), 0);
  run.mining.start_day = start_day;
  run.mining.end_day = end_day;

  // Renewables are always committed in reported results.
  for (size_t gi = 0; gi < g.generators.size(); ++gi)
    if (g.generators[gi].renewable())
      std::fill(res.commit[gi].begin(), res.commit[gi].end(), 1);

  std::vector<std::uint8_t> u0;
  if (options.initial_commit) {
    u0 = *options.initial_commit;
    if (u0.size() != disp_idx.size())
      throw ValidationError("initial_commit must have one entry per dispatchable unit");
  } else {
    u0.assign(disp_idx.size(), 1);  // all-on default
  }

  mining::MiningDeployment flat = dep;
  flat.flexibility = mining::Flexibility::None;
  flat.signals.reset();

  for (int d = start_day; d <= end_day; ++d) {
    const int day_base = (d - start_day) * 24;

    // Day-ahead assumes mining at capacity whatever the flexibility mode.
    mining::MiningSchedule da_mining =
        mining::evaluate_flexibility(flat, d, d, nullptr);

    DayInputs day;
    day.hours = 24;
    day.total_load.assign(static_cast<size_t>(n_bus), std::vector<double>(24, 0.0));
    day.renewable_mw.assign(g.generators.size(), std::vector<double>(24, 0.0));
    const auto fill_loads = [&](const mining::MiningSchedule& mine) {
      for (int b = 0; b < n_bus; ++b) {
        const BusId id = g.buses[static_cast<size_t>(b)].id;
        for (int h = 1; h <= 24; ++h)
          day.total_load[static_cast<size_t>(b)][static_cast<size_t>(h - 1)] =
              load.at(id, d, h) + mine.at(id, d, h);
      }
    };
    fill_loads(da_mining);
    for (size_t gi = 0; gi < g.generators.size(); ++gi) {
      if (!g.generators[gi].renewable()) continue;
      for (int h = 1; h <= 24; ++h)
        day.renewable_mw[gi][static_cast<size_t>(h - 1)] =
            renewables.at(g.generators[gi].id, d, h);
    }

    ScucSolution da = solve_scuc(g, day, u0, options.features, options.solver);
    if (da.status != lp::SolveStatus::Optimal) {
      res.infeasible_days.push_back({d, "SCUC " + lp::to_string(da.status)});
      continue;
    }

    // Price-responsive loads reconsider against day-ahead reference prices.
    mining::MiningSchedule rt_mining = std::move(da_mining);
    if (dep.flexibility == mining::Flexibility::PriceResponsive) {
      HourlySeries prices;
      prices.start_day = prices.end_day = d;
      for (int b = 0; b < n_bus; ++b) {
        auto& row = prices.row(g.buses[static_cast<size_t>(b)].id);
        for (int h = 0; h < 24; ++h)
          row[static_cast<size_t>(h)] = da.ref_price[static_cast<size_t>(b)][static_cast<size_t>(h)];
      }
      rt_mining = mining::evaluate_flexibility(dep, d, d, &prices);
      fill_loads(rt_mining);
    }

    ScedSolution rt = solve_sced(g, day, da.commit, options.features, options.solver);
    if (rt.status != lp::SolveStatus::Optimal) {
      res.infeasible_days.push_back({d, "SCED " + lp::to_string(rt.status)});
      continue;
    }

    // Record the day. Only the real-time quantities feed the analyses.
    res.day_ok[static_cast<size_t>(d - start_day)] = 1;
    for (size_t j = 0; j < disp_idx.size(); ++j) {
      const size_t gi = static_cast<size_t>(disp_idx[j]);
      for (int h = 0; h < 24; ++h)
        res.commit[gi][static_cast<size_t>(day_base + h)] = da.commit[j][static_cast<size_t>(h)];
    }
    for (size_t gi = 0; gi < g.generators.size(); ++gi)
      for (int h = 0; h < 24; ++h)
        res.pg[gi][static_cast<size_t>(day_base + h)] = rt.pg[gi][static_cast<size_t>(h)];
    for (int b = 0; b < n_bus; ++b)
      for (int h = 0; h < 24; ++h)
        res.lmp[static_cast<size_t>(b)][static_cast<size_t>(day_base + h)] =
            rt.lmp[static_cast<size_t>(b)][static_cast<size_t>(h)];
    for (int b = 0; b < n_bus; ++b) {
      const BusId id = g.buses[static_cast<size_t>(b)].id;
      auto& row = res.total_load.row(id);
      for (int h = 0; h < 24; ++h)
        row[static_cast<size_t>(day_base + h)] =
            day.total_load[static_cast<size_t>(b)][static_cast<size_t>(h)];
    }
    for (BusId site : dep.sites) {
      auto& row = run.mining.row(site);
      for (int h = 1; h <= 24; ++h)
        row[static_cast<size_t>(day_base + h - 1)] = rt_mining.at(site, d, h);
    }

    // Terminal commitments seed the next day.
    for (size_t j = 0; j < disp_idx.size(); ++j)
      u0[j] = da.commit[j][23];
  }
  return run;
}

std::map<BusId, double> mean_lmp(const DispatchResult& r) {
  std::map<BusId, double> out;
  int feasible_hours = 0;
  for (int d = r.start_day; d <= r.end_day; ++d)
    if (r.day_feasible(d)) feasible_hours += 24;
  if (feasible_hours == 0)
    throw AnalysisError("no feasible days: mean prices undefined");
  for (size_t b = 0; b < r.bus_ids.size(); ++b) {
    double sum = 0.0;
    for (int d = r.start_day; d <= r.end_day; ++d) {
      if (!r.day_feasible(d)) continue;
      const int base = (d - r.start_day) * 24;
      for (int h = 0; h < 24; ++h) sum += r.lmp[b][static_cast<size_t>(base + h)];
    }
    out[r.bus_ids[b]] = sum / feasible_hours;
  }
  return out;
}

}  // namespace lflsim::dispatch
