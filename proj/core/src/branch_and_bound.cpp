// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>

#include "innrange/errors.hpp"
#include "innrange/solver.hpp"

namespace innrange {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Node {
  std::size_t depth = 0;
  // Parent relaxation value in maximization sense.
  double bound = kInf;
  std::size_t sequence = 0;
  BinaryFixings fixings;
  // Final tableau of the parent relaxation, the warm start for this node.
  std::shared_ptr<const LpWarmStart> warm;
};

// Deepest first; among equal depth the better bound; then creation order.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.depth != b.depth) return a.depth < b.depth;
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.sequence > b.sequence;
  }
};

struct SparseRow {
  std::vector<std::pair<std::size_t, double>> terms;
  double lo = -kInf;
  double hi = kInf;
};

// Activity-based bound tightening over the rows, with binaries rounded to
// {0, 1}. Returns false when the bounds prove the node infeasible.
class Propagator {
 public:
  Propagator(const LpProblem& p, double int_tol) : binary_(p.is_binary), int_tol_(int_tol) {
    for (std::size_t i = 0; i < p.rows; ++i) {
      SparseRow row;
      for (std::size_t j = 0; j < p.cols; ++j) {
        if (p.a[i * p.cols + j] != 0.0) row.terms.emplace_back(j, p.a[i * p.cols + j]);
      }
      if (p.sense[i] != RowSense::le) row.lo = p.rhs[i];
      if (p.sense[i] != RowSense::ge) row.hi = p.rhs[i];
      rows_.push_back(std::move(row));
    }
  }

  bool run(std::vector<double>& lo, std::vector<double>& hi) const {
    for (int pass = 0; pass < kMaxPasses; ++pass) {
      bool changed = false;
      for (const SparseRow& row : rows_) {
        if (!tighten(row, lo, hi, changed)) return false;
      }
      if (!changed) break;
    }
    return true;
  }

 private:
  static constexpr int kMaxPasses = 20;

  bool tighten(const SparseRow& row, std::vector<double>& lo, std::vector<double>& hi, bool& changed) const {
    // Finite parts and counts of infinite contributions to min/max activity.
    double min_fin = 0.0, max_fin = 0.0;
    int min_inf = 0, max_inf = 0;
    for (auto [j, a] : row.terms) {
      const double at_lo = a > 0 ? lo[j] : hi[j];
      const double at_hi = a > 0 ? hi[j] : lo[j];
      if (std::isfinite(at_lo)) min_fin += a * at_lo; else ++min_inf;
      if (std::isfinite(at_hi)) max_fin += a * at_hi; else ++max_inf;
    }
    const double slack = 1e-9 * (1.0 + std::fabs(min_fin) + std::fabs(max_fin));
    if (min_inf == 0 && min_fin > row.hi + slack) return false;
    if (max_inf == 0 && max_fin < row.lo - slack) return false;

    for (auto [j, a] : row.terms) {
      const double at_lo = a > 0 ? lo[j] : hi[j];
      const double at_hi = a > 0 ? hi[j] : lo[j];
      // a x_j <= row.hi - (min activity of the rest)
      if (std::isfinite(row.hi)) {
        double rest;
        if (min_inf == 0) rest = min_fin - a * at_lo;
        else if (min_inf == 1 && !std::isfinite(at_lo)) rest = min_fin;
        else rest = -kInf;
        if (std::isfinite(rest)) {
          const double v = (row.hi - rest) / a;
          if (!(a > 0 ? set_hi(j, v, lo, hi, changed) : set_lo(j, v, lo, hi, changed))) return false;
        }
      }
      // a x_j >= row.lo - (max activity of the rest)
      if (std::isfinite(row.lo)) {
        double rest;
        if (max_inf == 0) rest = max_fin - a * at_hi;
        else if (max_inf == 1 && !std::isfinite(at_hi)) rest = max_fin;
        else rest = kInf;
        if (std::isfinite(rest)) {
          const double v = (row.lo - rest) / a;
          if (!(a > 0 ? set_lo(j, v, lo, hi, changed) : set_hi(j, v, lo, hi, changed))) return false;
        }
      }
    }
    return true;
  }

  bool set_hi(std::size_t j, double v, std::vector<double>& lo, std::vector<double>& hi, bool& changed) const {
    const double margin = 1e-9 * (1.0 + std::fabs(v));
    if (binary_[j]) {
      if (hi[j] > 0.0 && v < 1.0 - int_tol_) {
        hi[j] = 0.0;
        changed = true;
      }
    } else if (v + margin < hi[j] - 1e-7 * (1.0 + std::fabs(hi[j]))) {
      hi[j] = v + margin;
      changed = true;
    }
    return settle(j, lo, hi);
  }

  bool set_lo(std::size_t j, double v, std::vector<double>& lo, std::vector<double>& hi, bool& changed) const {
    const double margin = 1e-9 * (1.0 + std::fabs(v));
    if (binary_[j]) {
      if (lo[j] < 1.0 && v > int_tol_) {
        lo[j] = 1.0;
        changed = true;
      }
    } else if (v - margin > lo[j] + 1e-7 * (1.0 + std::fabs(lo[j]))) {
      lo[j] = v - margin;
      changed = true;
    }
    return settle(j, lo, hi);
  }

  static bool settle(std::size_t j, std::vector<double>& lo, std::vector<double>& hi) {
    if (lo[j] <= hi[j]) return true;
    if (lo[j] - hi[j] > 1e-7 * (1.0 + std::fabs(lo[j]))) return false;
    lo[j] = hi[j] = 0.5 * (lo[j] + hi[j]);
    return true;
  }

  std::vector<SparseRow> rows_;
  std::vector<bool> binary_;
  double int_tol_;
};

// Rows with a single term become column bounds; the tableau shrinks by those rows.
LpProblem without_singleton_rows(LpProblem p) {
  LpProblem out = p;
  out.a.clear();
  out.sense.clear();
  out.rhs.clear();
  out.rows = 0;
  for (std::size_t i = 0; i < p.rows; ++i) {
    std::size_t count = 0, col = 0;
    for (std::size_t j = 0; j < p.cols; ++j) {
      if (p.a[i * p.cols + j] != 0.0) {
        ++count;
        col = j;
      }
    }
    if (count == 1) {
      const double a = p.a[i * p.cols + col];
      const double v = p.rhs[i] / a;
      const bool upper = (p.sense[i] == RowSense::le) == (a > 0);
      if (p.sense[i] == RowSense::eq || upper) out.hi[col] = std::min(out.hi[col], v);
      if (p.sense[i] == RowSense::eq || !upper) out.lo[col] = std::max(out.lo[col], v);
      continue;
    }
    out.a.insert(out.a.end(), p.a.begin() + static_cast<std::ptrdiff_t>(i * p.cols),
                 p.a.begin() + static_cast<std::ptrdiff_t>((i + 1) * p.cols));
    out.sense.push_back(p.sense[i]);
    out.rhs.push_back(p.rhs[i]);
    ++out.rows;
  }
  return out;
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::optimal:
      return "optimal";
    case SolveStatus::infeasible:
      return "infeasible";
    case SolveStatus::node_limit:
      return "node-limit";
    case SolveStatus::time_limit:
      return "time-limit";
    case SolveStatus::failed:
      return "failed";
  }
  return "failed";
}

SolveResult solve(const MilpModel& model, const SolveConfig& config) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  const LpProblem problem = without_singleton_rows(compile_lp(model));
  // Everything below works in maximization sense; `sign` maps back.
  const double sign = problem.maximize ? 1.0 : -1.0;
  const std::size_t cols = problem.cols;
  const double int_tol = config.tolerances.integrality;

  SolveResult result;
  double incumbent_value = -kInf;
  std::vector<double> lo(cols), hi(cols);

  const Propagator propagator(problem, int_tol);
  // A single objective column lets the incumbent cut off worse regions during propagation.
  std::size_t objective_col = cols;
  for (std::size_t j = 0; j < cols; ++j) {
    if (problem.cost[j] == 0.0) continue;
    objective_col = objective_col == cols ? j : cols + 1;
  }

  auto relax = [&](const BinaryFixings& fix, const LpWarmStart* warm) {
    for (std::size_t j = 0; j < cols; ++j) {
      lo[j] = problem.lo[j];
      hi[j] = problem.hi[j];
      if (problem.is_binary[j] && fix[j] != kFree) lo[j] = hi[j] = fix[j] ? 1.0 : 0.0;
    }
    if (objective_col < cols && std::isfinite(incumbent_value)) {
      const double c = sign * problem.cost[objective_col];
      const double cut = (incumbent_value + config.abs_gap) / c;
      if (c > 0) lo[objective_col] = std::max(lo[objective_col], cut);
      else hi[objective_col] = std::min(hi[objective_col], cut);
    }
    if (!propagator.run(lo, hi)) {
      LpResult pruned;
      pruned.status = LpStatus::infeasible;
      return pruned;
    }
    LpResult lp = solve_lp(problem, lo, hi, warm, config.tolerances);
    if (lp.status == LpStatus::failed && warm != nullptr) {
      const std::size_t spent = lp.iterations;
      lp = solve_lp(problem, lo, hi, config.tolerances);
      lp.iterations += spent;
    }
    result.stats.lp_iterations += lp.iterations;
    return lp;
  };

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::size_t sequence = 0;
  open.push({0, kInf, sequence++, BinaryFixings(cols, kFree), nullptr});

  auto finish = [&](SolveStatus status) {
    result.stats.wall_seconds = elapsed();
    result.status = status;
    if (result.has_incumbent) result.objective = sign * incumbent_value;
    double bound = status == SolveStatus::failed ? kInf : incumbent_value;
    if (status == SolveStatus::node_limit || status == SolveStatus::time_limit) {
      while (!open.empty()) {
        if (open.top().bound > incumbent_value + config.abs_gap) bound = std::max(bound, open.top().bound);
        open.pop();
      }
    }
    result.best_bound = sign * bound;
    return result;
  };

  while (!open.empty()) {
    if (config.node_limit != 0 && result.stats.nodes >= config.node_limit) return finish(SolveStatus::node_limit);
    if (config.time_limit > 0.0 && elapsed() >= config.time_limit) return finish(SolveStatus::time_limit);

    Node node = open.top();
    open.pop();
    if (node.bound <= incumbent_value + config.abs_gap) continue;

    ++result.stats.nodes;
    LpResult lp = relax(node.fixings, node.warm.get());
    if (lp.status == LpStatus::failed) {
      result.diagnostic = "LP relaxation failed at depth " + std::to_string(node.depth) + ": " + lp.diagnostic;
      return finish(SolveStatus::failed);
    }
    if (lp.status == LpStatus::unbounded) {
      result.diagnostic = "LP relaxation unbounded; MILP models must have bounded variables";
      return finish(SolveStatus::failed);
    }
    if (lp.status == LpStatus::infeasible) continue;

    const double value = sign * lp.objective;
    if (value <= incumbent_value + config.abs_gap) continue;

    // Keep what propagation settled so children start from it.
    for (std::size_t j = 0; j < cols; ++j) {
      if (problem.is_binary[j] && node.fixings[j] == kFree && lo[j] == hi[j]) node.fixings[j] = hi[j] > 0.5 ? 1 : 0;
    }

    std::size_t branch = cols;
    double most = -1.0;
    for (std::size_t j = 0; j < cols; ++j) {
      if (!problem.is_binary[j] || node.fixings[j] != kFree) continue;
      const double v = lp.assignment[j];
      const double frac = std::min(v, 1.0 - v);
      if (frac > int_tol) {
        branch = j;
        break;
      }
    }

    if (branch == cols) {
      // Integral relaxation: re-solve with the binaries pinned so the incumbent is exact.
      BinaryFixings pinned = node.fixings;
      for (std::size_t j = 0; j < cols; ++j) {
        if (problem.is_binary[j]) pinned[j] = lp.assignment[j] > 0.5 ? 1 : 0;
      }
      LpResult exact = relax(pinned, lp.warm_start.get());
      if (exact.status == LpStatus::optimal) {
        const double exact_value = sign * exact.objective;
        if (exact_value > incumbent_value) {
          incumbent_value = exact_value;
          result.incumbent = std::move(exact.assignment);
          result.has_incumbent = true;
        }
        continue;
      }
      if (exact.status == LpStatus::failed) {
        result.diagnostic = "LP with pinned binaries failed: " + exact.diagnostic;
        return finish(SolveStatus::failed);
      }
      // Rounding broke feasibility; branch on the least settled free binary instead.
      for (std::size_t j = 0; j < cols; ++j) {
        if (!problem.is_binary[j] || node.fixings[j] != kFree) continue;
        const double frac = std::min(lp.assignment[j], 1.0 - lp.assignment[j]);
        if (frac > most) {
          most = frac;
          branch = j;
        }
      }
      if (branch == cols) continue;
    }

    const bool up_first = lp.assignment[branch] >= 0.5;
    for (int side = 0; side < 2; ++side) {
      const std::int8_t fix = (side == 0) == up_first ? 1 : 0;
      Node child{node.depth + 1, value, sequence++, node.fixings, lp.warm_start};
      child.fixings[branch] = fix;
      open.push(std::move(child));
    }
  }

  return finish(result.has_incumbent ? SolveStatus::optimal : SolveStatus::infeasible);
}

}  // namespace innrange
