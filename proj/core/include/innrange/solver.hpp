// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "innrange/milp_model.hpp"

namespace innrange {

struct SolverTolerances {
  /// Absolute row violation accepted in a reported solution.
  double feasibility = 1e-7;
  /// Distance from {0, 1} below which a binary counts as integral.
  double integrality = 1e-6;
  /// Reduced-cost threshold for optimality.
  double optimality = 1e-9;
  /// Bound violation accepted in a reported solution, scaled by 1 + |bound|.
  double bound = 1e-7;
};

/// Dense linear program: optimize cost . x subject to
/// a(i, :) . x (sense_i) rhs_i and lo <= x <= hi.
struct LpProblem {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // row-major rows x cols
  std::vector<RowSense> sense;
  std::vector<double> rhs;
  std::vector<double> lo;
  std::vector<double> hi;
  std::vector<double> cost;
  bool maximize = true;
  std::vector<bool> is_binary;
};

enum class LpStatus { optimal, infeasible, unbounded, failed };

/// Optimal tableau of one solve, reusable for the same problem under other
/// column bounds. Columns are the structural ones followed by one logical per row.
struct LpWarmStart {
  std::vector<std::size_t> basis;
  std::vector<double> tableau;  // row-major rows x (cols + rows)
  std::vector<double> reduced_costs;
  std::size_t pivots_since_refactor = 0;
};

struct LpResult {
  LpStatus status = LpStatus::failed;
  double objective = 0.0;
  std::vector<double> assignment;
  std::size_t iterations = 0;
  /// Reason for `failed`, empty otherwise.
  std::string diagnostic;
  /// Solver state at the optimum; null when the final basis still holds an
  /// artificial column.
  std::shared_ptr<const LpWarmStart> warm_start;
};

/// Binary fixings indexed like MilpModel::variables(); kFree leaves the
/// binary relaxed to [0, 1]. Entries of non-binary variables are ignored.
using BinaryFixings = std::vector<std::int8_t>;
inline constexpr std::int8_t kFree = -1;

/// Column-per-variable dense form of `model`; requires an objective.
LpProblem compile_lp(const MilpModel& model);

/// Bounded-variable primal simplex (two phases, dense tableau). Dantzig
/// pricing with a switch to Bland's rule once a run of degenerate pivots is
/// detected, so it always terminates. `lo`/`hi` override the column bounds.
LpResult solve_lp(const LpProblem& problem, std::span<const double> lo, std::span<const double> hi,
                  const SolverTolerances& tol = {});
LpResult solve_lp(const LpProblem& problem, const SolverTolerances& tol = {});

/// As above, but first runs a bounded dual simplex from `warm` (reported by
/// an earlier solve of the same problem). Falls back to the cold two-phase
/// solve when that start is unusable.
LpResult solve_lp(const LpProblem& problem, std::span<const double> lo, std::span<const double> hi,
                  const LpWarmStart* warm, const SolverTolerances& tol = {});

/// LP relaxation of `model` (binaries in [0, 1]) with the given binaries fixed.
LpResult lp_solve(const MilpModel& model, const BinaryFixings& fixings = {},
                  const SolverTolerances& tol = {});

enum class SolveStatus { optimal, infeasible, node_limit, time_limit, failed };

struct SolveConfig {
  /// 0 means unlimited.
  std::size_t node_limit = 0;
  /// Seconds; 0 means unlimited.
  double time_limit = 0.0;
  double abs_gap = 1e-6;
  SolverTolerances tolerances;
};

struct SolveStats {
  std::size_t nodes = 0;
  std::size_t lp_iterations = 0;
  double wall_seconds = 0.0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::failed;
  /// Objective of the incumbent (meaningful iff has_incumbent).
  double objective = 0.0;
  /// Proven bound: >= every feasible objective when maximizing, <= when minimizing.
  double best_bound = 0.0;
  bool has_incumbent = false;
  std::vector<double> incumbent;
  SolveStats stats;
  std::string diagnostic;
};

/// Branch and bound over the binaries: most-fractional branching,
/// depth-first with best-bound tiebreak, pruning at `abs_gap`.
SolveResult solve(const MilpModel& model, const SolveConfig& config = {});

const char* to_string(LpStatus status);
const char* to_string(SolveStatus status);

/// Largest absolute row violation and bound violation of `x` in `model`.
struct Violation {
  double row = 0.0;
  double bound = 0.0;
};
Violation max_violation(const MilpModel& model, std::span<const double> x);

}  // namespace innrange
