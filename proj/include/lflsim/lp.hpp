// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
//
// Self-contained linear/mixed-integer solver used by the market-clearing
// models: a bounded-variable revised simplex (dense explicit inverse) with
// row duals, and a best-first branch-and-bound over integer variables.
// Problems are minimized. The contract is solver-agnostic so an external
// solver can be plugged in behind the same Problem/Solution types.
#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace lflsim::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LE, EQ, GE };

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterationLimit, NodeLimit };

std::string to_string(SolveStatus s);

struct Problem {
  std::vector<double> cost;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::uint8_t> is_integer;

  struct Row {
    RowSense sense;
    double rhs;
    std::vector<std::pair<int, double>> terms;  // (var, coefficient)
  };
  std::vector<Row> rows;

  int add_var(double lo, double hi, double c, bool integer = false);
  int add_row(RowSense sense, double rhs);
  void add_term(int row, int var, double coef);

  int num_vars() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
};

struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> x;         // structural variable values
  std::vector<double> row_dual;  // d(objective)/d(rhs); pure-LP solves only
  std::vector<double> reduced_cost;
  long iterations = 0;
  long nodes = 0;
};

struct Options {
  double lp_tol = 1e-7;       // primal feasibility / dual optimality
  double pivot_tol = 1e-9;
  double int_tol = 1e-6;
  double mip_rel_gap = 1e-4;
  double mip_abs_gap = 1e-9;
  long max_iterations = 500000;
  long max_nodes = 200000;
};

// Solves the continuous relaxation (integrality flags ignored). Fills duals.
Solution solve_lp(const Problem& p, const Options& opt = {});

// Branch-and-bound on integer-flagged variables. Integer coordinates of the
// returned solution are exact integers. No duals (fix and re-solve for those).
Solution solve_mip(const Problem& p, const Options& opt = {});

}  // namespace lflsim::lp
