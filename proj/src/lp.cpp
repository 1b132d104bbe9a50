// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#include "lflsim/lp.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "lflsim/common.hpp"
#include "lflsim/kernels.hpp"

namespace lflsim::lp {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterationLimit: return "iteration-limit";
    case SolveStatus::NodeLimit: return "node-limit";
  }
  return "unknown";
}

int Problem::add_var(double lo, double hi, double c, bool integer) {
  if (lo > hi) throw Error("variable with lower bound above upper bound");
  cost.push_back(c);
  lower.push_back(lo);
  upper.push_back(hi);
  is_integer.push_back(integer ? 1 : 0);
  return num_vars() - 1;
}

int Problem::add_row(RowSense sense, double rhs) {
  rows.push_back(Row{sense, rhs, {}});
  return num_rows() - 1;
}

void Problem::add_term(int row, int var, double coef) {
  if (coef == 0.0) return;
  rows[static_cast<size_t>(row)].terms.emplace_back(var, coef);
}

namespace {

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper, FreeNonbasic };

// Bounded-variable primal simplex over the augmented system
// [A | I_slack | sigma*I_art] z = rhs, with a two-phase start from an
// all-artificial basis. Dense explicit inverse, refactorized periodically.
class Simplex {
 public:
  Simplex(const Problem& p, const Options& opt) : p_(p), opt_(opt) {
    m_ = p.num_rows();
    n_ = p.num_vars();
    total_ = n_ + 2 * m_;  // structural, slack, artificial
    build_columns();
  }

  SolveStatus solve() {
    setup();
    SolveStatus s1 = iterate(/*phase1=*/true);
    if (s1 == SolveStatus::IterationLimit) return s1;
    if (phase1_objective() > infeas_tol()) return SolveStatus::Infeasible;
    freeze_artificials();
    return iterate(/*phase1=*/false);
  }

  double objective() const {
    double o = 0.0;
    for (int j = 0; j < n_; ++j) o += p_.cost[static_cast<size_t>(j)] * value_[static_cast<size_t>(j)];
    return o;
  }

  void extract(Solution& out) const {
    out.x.assign(value_.begin(), value_.begin() + n_);
    out.objective = objective();
    out.iterations = iterations_;
    // y = c_B * Binv with the phase-2 cost vector.
    std::vector<double> y(static_cast<size_t>(m_), 0.0);
    for (int i = 0; i < m_; ++i) {
      const int bj = basic_[static_cast<size_t>(i)];
      const double cb = bj < n_ ? p_.cost[static_cast<size_t>(bj)] : 0.0;
      if (cb != 0.0)
        kernels::axpy(cb, binv_row(i), y.data(), static_cast<size_t>(m_));
    }
    out.row_dual = y;
    out.reduced_cost.assign(static_cast<size_t>(n_), 0.0);
    for (int j = 0; j < n_; ++j) {
      double rc = p_.cost[static_cast<size_t>(j)];
      for (const auto& [r, a] : cols_[static_cast<size_t>(j)]) rc -= y[static_cast<size_t>(r)] * a;
      out.reduced_cost[static_cast<size_t>(j)] = rc;
    }
  }

  long iterations() const { return iterations_; }

 private:
  const Problem& p_;
  const Options& opt_;
  int m_ = 0, n_ = 0, total_ = 0;

  std::vector<std::vector<std::pair<int, double>>> cols_;  // per column (row, coef)
  std::vector<double> lo_, hi_, value_;
  std::vector<VarState> state_;
  std::vector<int> basic_;         // row -> column
  std::vector<double> binv_;       // m x m, row-major
  std::vector<double> rhs_;
  std::vector<double> phase_cost_;  // active cost vector
  long iterations_ = 0;
  int pivots_since_refactor_ = 0;
  int degenerate_streak_ = 0;

  double* binv_row(int i) { return binv_.data() + static_cast<size_t>(i) * m_; }
  const double* binv_row(int i) const { return binv_.data() + static_cast<size_t>(i) * m_; }

  double infeas_tol() const { return opt_.lp_tol * 10.0 * (1.0 + rhs_scale_); }
  double rhs_scale_ = 0.0;

  void build_columns() {
    cols_.assign(static_cast<size_t>(total_), {});
    for (int j = 0; j < n_; ++j) cols_[static_cast<size_t>(j)].reserve(4);
    for (int r = 0; r < m_; ++r) {
      for (const auto& [v, a] : p_.rows[static_cast<size_t>(r)].terms)
        cols_[static_cast<size_t>(v)].emplace_back(r, a);
      cols_[static_cast<size_t>(n_ + r)].emplace_back(r, 1.0);  // slack
    }
    // Artificial column signs are filled in setup().
  }

  void setup() {
    lo_.assign(static_cast<size_t>(total_), 0.0);
    hi_.assign(static_cast<size_t>(total_), 0.0);
    value_.assign(static_cast<size_t>(total_), 0.0);
    state_.assign(static_cast<size_t>(total_), VarState::AtLower);
    rhs_.assign(static_cast<size_t>(m_), 0.0);
    for (int r = 0; r < m_; ++r) {
      rhs_[static_cast<size_t>(r)] = p_.rows[static_cast<size_t>(r)].rhs;
      rhs_scale_ = std::max(rhs_scale_, std::abs(rhs_[static_cast<size_t>(r)]));
    }

    for (int j = 0; j < n_; ++j) {
      lo_[static_cast<size_t>(j)] = p_.lower[static_cast<size_t>(j)];
      hi_[static_cast<size_t>(j)] = p_.upper[static_cast<size_t>(j)];
      if (lo_[static_cast<size_t>(j)] > -kInf) {
        state_[static_cast<size_t>(j)] = VarState::AtLower;
        value_[static_cast<size_t>(j)] = lo_[static_cast<size_t>(j)];
      } else if (hi_[static_cast<size_t>(j)] < kInf) {
        state_[static_cast<size_t>(j)] = VarState::AtUpper;
        value_[static_cast<size_t>(j)] = hi_[static_cast<size_t>(j)];
      } else {
        state_[static_cast<size_t>(j)] = VarState::FreeNonbasic;
        value_[static_cast<size_t>(j)] = 0.0;
      }
    }
    for (int r = 0; r < m_; ++r) {
      const int sj = n_ + r;
      switch (p_.rows[static_cast<size_t>(r)].sense) {
        case RowSense::LE:
          lo_[static_cast<size_t>(sj)] = 0.0;
          hi_[static_cast<size_t>(sj)] = kInf;
          state_[static_cast<size_t>(sj)] = VarState::AtLower;
          break;
        case RowSense::GE:
          lo_[static_cast<size_t>(sj)] = -kInf;
          hi_[static_cast<size_t>(sj)] = 0.0;
          state_[static_cast<size_t>(sj)] = VarState::AtUpper;
          break;
        case RowSense::EQ:
          lo_[static_cast<size_t>(sj)] = 0.0;
          hi_[static_cast<size_t>(sj)] = 0.0;
          state_[static_cast<size_t>(sj)] = VarState::AtLower;
          break;
      }
      value_[static_cast<size_t>(sj)] = 0.0;
    }

    // Residuals with all structural/slack variables at their start values.
    std::vector<double> resid = rhs_;
    for (int j = 0; j < n_; ++j) {
      const double v = value_[static_cast<size_t>(j)];
      if (v != 0.0)
        for (const auto& [r, a] : cols_[static_cast<size_t>(j)]) resid[static_cast<size_t>(r)] -= a * v;
    }

    basic_.assign(static_cast<size_t>(m_), -1);
    binv_.assign(static_cast<size_t>(m_) * m_, 0.0);
    for (int r = 0; r < m_; ++r) {
      const int aj = n_ + m_ + r;
      const double sigma = resid[static_cast<size_t>(r)] >= 0.0 ? 1.0 : -1.0;
      cols_[static_cast<size_t>(aj)].clear();
      cols_[static_cast<size_t>(aj)].emplace_back(r, sigma);
      lo_[static_cast<size_t>(aj)] = 0.0;
      hi_[static_cast<size_t>(aj)] = kInf;
      state_[static_cast<size_t>(aj)] = VarState::Basic;
      value_[static_cast<size_t>(aj)] = std::abs(resid[static_cast<size_t>(r)]);
      basic_[static_cast<size_t>(r)] = aj;
      binv_row(r)[r] = sigma;  // inverse of diag(sigma)
    }

    phase_cost_.assign(static_cast<size_t>(total_), 0.0);
    for (int r = 0; r < m_; ++r) phase_cost_[static_cast<size_t>(n_ + m_ + r)] = 1.0;
  }

  double phase1_objective() const {
    double o = 0.0;
    for (int r = 0; r < m_; ++r) o += value_[static_cast<size_t>(n_ + m_ + r)];
    return o;
  }

  void freeze_artificials() {
    for (int r = 0; r < m_; ++r) {
      const int aj = n_ + m_ + r;
      lo_[static_cast<size_t>(aj)] = 0.0;
      hi_[static_cast<size_t>(aj)] = 0.0;
      if (state_[static_cast<size_t>(aj)] != VarState::Basic) {
        state_[static_cast<size_t>(aj)] = VarState::AtLower;
        value_[static_cast<size_t>(aj)] = 0.0;
      } else {
        // A basic artificial may carry phase-1 rounding noise; pin it.
        value_[static_cast<size_t>(aj)] = 0.0;
      }
    }
    std::fill(phase_cost_.begin(), phase_cost_.end(), 0.0);
    for (int j = 0; j < n_; ++j) phase_cost_[static_cast<size_t>(j)] = p_.cost[static_cast<size_t>(j)];
    recompute_basics();
  }

  // x_B = Binv * (rhs - sum_nonbasic A_j x_j)
  void recompute_basics() {
    std::vector<double> r = rhs_;
    for (int j = 0; j < total_; ++j) {
      if (state_[static_cast<size_t>(j)] == VarState::Basic) continue;
      const double v = value_[static_cast<size_t>(j)];
      if (v != 0.0)
        for (const auto& [row, a] : cols_[static_cast<size_t>(j)]) r[static_cast<size_t>(row)] -= a * v;
    }
    for (int i = 0; i < m_; ++i)
      value_[static_cast<size_t>(basic_[static_cast<size_t>(i)])] =
          kernels::dot(binv_row(i), r.data(), static_cast<size_t>(m_));
  }

  // Rebuild Binv by Gauss-Jordan elimination of the basis matrix.
  void refactorize() {
    std::vector<double> b(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i)
      for (const auto& [r, a] : cols_[static_cast<size_t>(basic_[static_cast<size_t>(i)])])
        b[static_cast<size_t>(r) * m_ + static_cast<size_t>(i)] += a;
    std::vector<double> inv(static_cast<size_t>(m_) * m_, 0.0);
    for (int i = 0; i < m_; ++i) inv[static_cast<size_t>(i) * m_ + static_cast<size_t>(i)] = 1.0;
    for (int col = 0; col < m_; ++col) {
      int piv = -1;
      double best = 0.0;
      for (int r = col; r < m_; ++r) {
        const double v = std::abs(b[static_cast<size_t>(r) * m_ + static_cast<size_t>(col)]);
        if (v > best) {
          best = v;
          piv = r;
        }
      }
      if (piv < 0 || best < 1e-12) throw Error("simplex basis became singular");
      if (piv != col) {
        for (int k = 0; k < m_; ++k) {
          std::swap(b[static_cast<size_t>(piv) * m_ + static_cast<size_t>(k)],
                    b[static_cast<size_t>(col) * m_ + static_cast<size_t>(k)]);
          std::swap(inv[static_cast<size_t>(piv) * m_ + static_cast<size_t>(k)],
                    inv[static_cast<size_t>(col) * m_ + static_cast<size_t>(k)]);
        }
      }
      const double d = 1.0 / b[static_cast<size_t>(col) * m_ + static_cast<size_t>(col)];
      kernels::scale(d, &b[static_cast<size_t>(col) * m_], static_cast<size_t>(m_));
      kernels::scale(d, &inv[static_cast<size_t>(col) * m_], static_cast<size_t>(m_));
      for (int r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double f = b[static_cast<size_t>(r) * m_ + static_cast<size_t>(col)];
        if (f != 0.0) {
          kernels::axpy(-f, &b[static_cast<size_t>(col) * m_], &b[static_cast<size_t>(r) * m_],
                        static_cast<size_t>(m_));
          kernels::axpy(-f, &inv[static_cast<size_t>(col) * m_], &inv[static_cast<size_t>(r) * m_],
                        static_cast<size_t>(m_));
        }
      }
    }
    binv_ = std::move(inv);
    pivots_since_refactor_ = 0;
    recompute_basics();
  }

  SolveStatus iterate(bool phase1) {
    while (true) {
      if (iterations_ >= opt_.max_iterations) return SolveStatus::IterationLimit;

      // y = c_B * Binv
      std::vector<double> y(static_cast<size_t>(m_), 0.0);
      for (int i = 0; i < m_; ++i) {
        const double cb = phase_cost_[static_cast<size_t>(basic_[static_cast<size_t>(i)])];
        if (cb != 0.0)
          kernels::axpy(cb, binv_row(i), y.data(), static_cast<size_t>(m_));
      }

      const bool bland = degenerate_streak_ > 64;
      int enter = -1;
      double enter_dir = 0.0;
      double best_violation = opt_.lp_tol;
      for (int j = 0; j < total_; ++j) {
        const VarState st = state_[static_cast<size_t>(j)];
        if (st == VarState::Basic) continue;
        if (lo_[static_cast<size_t>(j)] == hi_[static_cast<size_t>(j)]) continue;  // fixed
        double rc = phase_cost_[static_cast<size_t>(j)];
        for (const auto& [r, a] : cols_[static_cast<size_t>(j)]) rc -= y[static_cast<size_t>(r)] * a;
        double viol = 0.0;
        double dir = 0.0;
        if (st == VarState::AtLower && rc < -opt_.lp_tol) {
          viol = -rc;
          dir = 1.0;
        } else if (st == VarState::AtUpper && rc > opt_.lp_tol) {
          viol = rc;
          dir = -1.0;
        } else if (st == VarState::FreeNonbasic && std::abs(rc) > opt_.lp_tol) {
          viol = std::abs(rc);
          dir = rc < 0.0 ? 1.0 : -1.0;
        } else {
          continue;
        }
        if (bland) {
          enter = j;
          enter_dir = dir;
          break;
        }
        if (viol > best_violation) {
          best_violation = viol;
          enter = j;
          enter_dir = dir;
        }
      }
      if (enter < 0) return SolveStatus::Optimal;  // dual feasible

      // d = Binv * A_enter
      std::vector<double> d(static_cast<size_t>(m_), 0.0);
      for (const auto& [r, a] : cols_[static_cast<size_t>(enter)]) {
        if (a != 0.0)
          for (int i = 0; i < m_; ++i)
            d[static_cast<size_t>(i)] += binv_row(i)[r] * a;
      }

      // Ratio test: first blocking basic variable, or the entering
      // variable's own opposite bound (bound flip).
      double t_limit = kInf;
      int leave = -1;
      double leave_to = 0.0;  // bound value the leaving variable lands on
      double leave_abs_d = 0.0;
      for (int i = 0; i < m_; ++i) {
        const double delta = -enter_dir * d[static_cast<size_t>(i)];
        if (std::abs(delta) <= opt_.pivot_tol) continue;
        const int bj = basic_[static_cast<size_t>(i)];
        const double xv = value_[static_cast<size_t>(bj)];
        double t_i, to;
        if (delta > 0.0) {
          if (hi_[static_cast<size_t>(bj)] >= kInf) continue;
          t_i = std::max(0.0, hi_[static_cast<size_t>(bj)] - xv) / delta;
          to = hi_[static_cast<size_t>(bj)];
        } else {
          if (lo_[static_cast<size_t>(bj)] <= -kInf) continue;
          t_i = std::max(0.0, xv - lo_[static_cast<size_t>(bj)]) / (-delta);
          to = lo_[static_cast<size_t>(bj)];
        }
        if (t_i < t_limit - 1e-12 ||
            (t_i < t_limit + 1e-12 && std::abs(d[static_cast<size_t>(i)]) > leave_abs_d)) {
          t_limit = t_i;
          leave = i;
          leave_to = to;
          leave_abs_d = std::abs(d[static_cast<size_t>(i)]);
        }
      }
      double t_flip = kInf;
      if (lo_[static_cast<size_t>(enter)] > -kInf && hi_[static_cast<size_t>(enter)] < kInf)
        t_flip = hi_[static_cast<size_t>(enter)] - lo_[static_cast<size_t>(enter)];

      if (leave < 0 && t_flip >= kInf) return SolveStatus::Unbounded;

      ++iterations_;
      const double step = std::min(t_limit, t_flip);
      degenerate_streak_ = step < 1e-10 ? degenerate_streak_ + 1 : 0;

      if (t_flip <= t_limit) {
        // Bound flip: no basis change.
        apply_step(enter, enter_dir, t_flip, d);
        state_[static_cast<size_t>(enter)] =
            enter_dir > 0.0 ? VarState::AtUpper : VarState::AtLower;
        value_[static_cast<size_t>(enter)] = enter_dir > 0.0 ? hi_[static_cast<size_t>(enter)]
                                                             : lo_[static_cast<size_t>(enter)];
        continue;
      }

      apply_step(enter, enter_dir, t_limit, d);
      const int leaving_var = basic_[static_cast<size_t>(leave)];
      value_[static_cast<size_t>(leaving_var)] = leave_to;
      state_[static_cast<size_t>(leaving_var)] =
          leave_to == lo_[static_cast<size_t>(leaving_var)] ? VarState::AtLower : VarState::AtUpper;
      state_[static_cast<size_t>(enter)] = VarState::Basic;
      basic_[static_cast<size_t>(leave)] = enter;

      // Binv update for replacing basis column `leave` with A_enter.
      const double piv = d[static_cast<size_t>(leave)];
      kernels::scale(1.0 / piv, binv_row(leave), static_cast<size_t>(m_));
      for (int i = 0; i < m_; ++i) {
        if (i == leave) continue;
        const double f = d[static_cast<size_t>(i)];
        if (f != 0.0)
          kernels::axpy(-f, binv_row(leave), binv_row(i), static_cast<size_t>(m_));
      }
      if (++pivots_since_refactor_ >= 150) refactorize();
    }
  }

  // Move entering variable by step and sweep basics along -dir*d.
  void apply_step(int enter, double dir, double step, const std::vector<double>& d) {
    if (step != 0.0) {
      value_[static_cast<size_t>(enter)] += dir * step;
      for (int i = 0; i < m_; ++i) {
        const int bj = basic_[static_cast<size_t>(i)];
        value_[static_cast<size_t>(bj)] -= dir * step * d[static_cast<size_t>(i)];
      }
    }
  }
};

}  // namespace

Solution solve_lp(const Problem& p, const Options& opt) {
  Solution out;
  Simplex s(p, opt);
  out.status = s.solve();
  out.iterations = s.iterations();
  if (out.status == SolveStatus::Optimal) s.extract(out);
  return out;
}

namespace {

struct BnbNode {
  double bound;
  long id;
  std::vector<std::pair<int, std::pair<double, double>>> fixings;
  bool operator>(const BnbNode& o) const {
    return bound != o.bound ? bound > o.bound : id > o.id;
  }
};

}  // namespace

Solution solve_mip(const Problem& p, const Options& opt) {
  std::vector<int> int_vars;
  for (int j = 0; j < p.num_vars(); ++j)
    if (p.is_integer[static_cast<size_t>(j)]) int_vars.push_back(j);

  Solution best;
  best.status = SolveStatus::Infeasible;
  double incumbent = kInf;

  std::priority_queue<BnbNode, std::vector<BnbNode>, std::greater<BnbNode>> open;
  long next_id = 0;
  open.push(BnbNode{-kInf, next_id++, {}});
  long nodes = 0;
  bool hit_node_limit = false;

  Problem relax = p;

  const auto gap = [&](double inc) {
    return std::max(opt.mip_abs_gap, opt.mip_rel_gap * std::abs(inc));
  };

  while (!open.empty()) {
    BnbNode node = open.top();
    open.pop();
    if (incumbent < kInf && node.bound >= incumbent - gap(incumbent)) break;
    if (++nodes > opt.max_nodes) {
      hit_node_limit = true;
      break;
    }

    for (size_t j = 0; j < relax.lower.size(); ++j) {
      relax.lower[j] = p.lower[j];
      relax.upper[j] = p.upper[j];
    }
    for (const auto& [v, b] : node.fixings) {
      relax.lower[static_cast<size_t>(v)] = std::max(relax.lower[static_cast<size_t>(v)], b.first);
      relax.upper[static_cast<size_t>(v)] = std::min(relax.upper[static_cast<size_t>(v)], b.second);
      if (relax.lower[static_cast<size_t>(v)] > relax.upper[static_cast<size_t>(v)]) break;
    }
    bool empty_box = false;
    for (const auto& [v, b] : node.fixings)
      if (relax.lower[static_cast<size_t>(v)] > relax.upper[static_cast<size_t>(v)]) empty_box = true;
    if (empty_box) continue;

    Solution rel = solve_lp(relax, opt);
    best.iterations += rel.iterations;
    if (rel.status == SolveStatus::Unbounded)
      throw Error("unbounded MIP relaxation");
    if (rel.status != SolveStatus::Optimal) continue;
    if (incumbent < kInf && rel.objective >= incumbent - gap(incumbent)) continue;

    int branch_var = -1;
    double branch_frac = opt.int_tol;
    for (int v : int_vars) {
      const double xv = rel.x[static_cast<size_t>(v)];
      const double frac = std::abs(xv - std::round(xv));
      if (frac > branch_frac) {
        branch_frac = frac;
        branch_var = v;
      }
    }

    if (branch_var < 0) {
      if (rel.objective < incumbent - 1e-12) {
        incumbent = rel.objective;
        best.x = rel.x;
        for (int v : int_vars)
          best.x[static_cast<size_t>(v)] = std::round(best.x[static_cast<size_t>(v)]);
        best.objective = rel.objective;
        best.status = SolveStatus::Optimal;
      }
      continue;
    }

    const double xv = rel.x[static_cast<size_t>(branch_var)];
    BnbNode down{rel.objective, next_id++, node.fixings};
    down.fixings.emplace_back(branch_var, std::make_pair(-kInf, std::floor(xv)));
    BnbNode up{rel.objective, next_id++, node.fixings};
    up.fixings.emplace_back(branch_var, std::make_pair(std::ceil(xv), kInf));
    open.push(std::move(down));
    open.push(std::move(up));
  }

  best.nodes = nodes;
  if (hit_node_limit && best.status != SolveStatus::Optimal)
    best.status = SolveStatus::NodeLimit;
  return best;
}

}  // namespace lflsim::lp
