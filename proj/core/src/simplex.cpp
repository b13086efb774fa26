// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "innrange/errors.hpp"
#include "innrange/solver.hpp"

namespace innrange {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kTieTol = 1e-12;
// Tableau entries below this are elimination residue.
constexpr double kNoise = 1e-12;
constexpr double kDegenerateStep = 1e-12;
constexpr std::size_t kStallLimit = 50;
constexpr std::size_t kReinvertEvery = 200;
constexpr int kMaxPolishRounds = 3;

enum class PhaseOutcome { optimal, unbounded, iteration_limit, singular };

// Dense tableau over the columns [structural | logical | artificial].
// Row i reads  a_i . x - r_i + g_i t_i = 0  where the logical r_i carries the
// row bounds and the artificial t_i >= 0 only exists for rows that are
// violated at the starting point.
class TableauSimplex {
 public:
  TableauSimplex(const LpProblem& p, std::span<const double> lo, std::span<const double> hi,
                 const SolverTolerances& tol)
      : p_(p), tol_(tol), m_(p.rows), n_(p.cols) {
    lo_.assign(lo.begin(), lo.end());
    hi_.assign(hi.begin(), hi.end());
  }

  LpResult run(const LpWarmStart* warm = nullptr) {
    LpResult result;
    for (std::size_t j = 0; j < n_; ++j) {
      if (lo_[j] > hi_[j]) {
        result.status = LpStatus::infeasible;
        return result;
      }
    }
    if (warm != nullptr) {
      switch (dual_from(*warm)) {
        case WarmOutcome::optimal:
          return finish_phase2(result);
        case WarmOutcome::infeasible:
          result.status = LpStatus::infeasible;
          result.iterations = iterations_;
          return result;
        case WarmOutcome::unusable:
          lo_.resize(n_);
          hi_.resize(n_);
          break;
      }
    }
    setup();

    if (first_artificial_ < cols_) {
      std::vector<double> phase1(cols_, 0.0);
      for (std::size_t j = first_artificial_; j < cols_; ++j) phase1[j] = -1.0;
      const PhaseOutcome out = optimize(phase1);
      if (out != PhaseOutcome::optimal) return fail(result, out, "phase 1");
      refresh_basic_values();
      double infeasibility = 0.0;
      for (std::size_t j = first_artificial_; j < cols_; ++j) infeasibility += std::max(0.0, x_[j]);
      if (infeasibility > tol_.feasibility) {
        result.status = LpStatus::infeasible;
        result.iterations = iterations_;
        return result;
      }
      retire_artificials();
    }

    return finish_phase2(result);
  }

 private:
  enum class WarmOutcome { optimal, infeasible, unusable };

  std::vector<double> phase2_cost() const {
    std::vector<double> cost(cols_, 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost[j] = p_.maximize ? p_.cost[j] : -p_.cost[j];
    return cost;
  }

  LpResult finish_phase2(LpResult& result) {
    const std::vector<double> phase2 = phase2_cost();
    for (int round = 0;; ++round) {
      const PhaseOutcome out = optimize(phase2);
      if (out == PhaseOutcome::unbounded) {
        result.status = LpStatus::unbounded;
        result.iterations = iterations_;
        return result;
      }
      if (out != PhaseOutcome::optimal) return fail(result, out, "phase 2");
      // Accept without refactoring when the point checks out against the original rows.
      result.assignment.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
      std::string why;
      if (since_reinvert_ == 0 || primal_feasible(result.assignment, why)) break;
      if (!reinvert(phase2)) return fail(result, PhaseOutcome::singular, "final reinversion");
      if (dual_feasible() || round >= kMaxPolishRounds) {
        result.assignment.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
        break;
      }
    }

    result.iterations = iterations_;
    if (!primal_feasible(result.assignment, result.diagnostic)) {
      result.status = LpStatus::failed;
      return result;
    }
    double obj = 0.0;
    for (std::size_t j = 0; j < n_; ++j) obj += p_.cost[j] * result.assignment[j];
    result.objective = obj;
    result.status = LpStatus::optimal;
    if (std::all_of(basis_.begin(), basis_.end(), [&](std::size_t b) { return b < n_ + m_; })) {
      result.warm_start = export_warm();
    }
    return result;
  }

  std::shared_ptr<const LpWarmStart> export_warm() const {
    auto w = std::make_shared<LpWarmStart>();
    const std::size_t width = n_ + m_;
    w->basis = basis_;
    w->tableau.resize(m_ * width);
    for (std::size_t i = 0; i < m_; ++i) {
      std::copy_n(&tab_[i * cols_], width, &w->tableau[i * width]);
    }
    w->reduced_costs.assign(d_.begin(), d_.begin() + static_cast<std::ptrdiff_t>(width));
    w->pivots_since_refactor = since_reinvert_;
    return w;
  }

  // Structural and logical columns only, no artificials.
  void build_plain() {
    cols_ = n_ + m_;
    first_artificial_ = cols_;
    full_.assign(m_ * cols_, 0.0);
    lo_.resize(cols_);
    hi_.resize(cols_);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) F(i, j) = p_.a[i * n_ + j];
      F(i, n_ + i) = -1.0;
      lo_[n_ + i] = p_.sense[i] == RowSense::le ? -kInf : p_.rhs[i];
      hi_[n_ + i] = p_.sense[i] == RowSense::ge ? kInf : p_.rhs[i];
    }
    x_.assign(cols_, 0.0);
  }

  // Bounded dual simplex from a dual feasible basis.
  WarmOutcome dual_from(const LpWarmStart& warm) {
    const std::size_t width = n_ + m_;
    if (warm.basis.size() != m_ || warm.tableau.size() != m_ * width || warm.reduced_costs.size() != width) {
      return WarmOutcome::unusable;
    }
    build_plain();
    pos_.assign(cols_, -1);
    basis_.assign(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      if (warm.basis[i] >= cols_ || pos_[warm.basis[i]] >= 0) return WarmOutcome::unusable;
      set_basic(i, warm.basis[i]);
    }
    tab_ = warm.tableau;
    d_ = warm.reduced_costs;
    since_reinvert_ = warm.pivots_since_refactor;
    const std::vector<double> cost = phase2_cost();
    // Place each nonbasic column on the bound its reduced cost asks for.
    for (std::size_t j = 0; j < cols_; ++j) {
      if (pos_[j] >= 0) continue;
      const double dj = d_[j];
      if (dj > tol_.optimality) {
        if (!std::isfinite(hi_[j])) return WarmOutcome::unusable;
        x_[j] = hi_[j];
      } else if (dj < -tol_.optimality) {
        if (!std::isfinite(lo_[j])) return WarmOutcome::unusable;
        x_[j] = lo_[j];
      } else {
        x_[j] = std::isfinite(lo_[j]) ? lo_[j] : std::isfinite(hi_[j]) ? hi_[j] : 0.0;
      }
    }
    refresh_basic_values();

    const std::size_t max_iterations = 50 * (m_ + cols_) + 1000;
    for (std::size_t local = 0;; ++local) {
      if (local > max_iterations) return WarmOutcome::unusable;
      std::size_t r = m_;
      double worst = tol_.bound;
      int need = 0;
      for (std::size_t i = 0; i < m_; ++i) {
        const std::size_t b = basis_[i];
        const double below = lo_[b] - x_[b];
        const double above = x_[b] - hi_[b];
        if (below > worst) {
          worst = below;
          r = i;
          need = 1;
        } else if (above > worst) {
          worst = above;
          r = i;
          need = -1;
        }
      }
      if (r == m_) return WarmOutcome::optimal;

      // x_b = -sum_N T(r, j) x_j; pick the entering column by the dual ratio.
      std::size_t enter = cols_;
      double best_ratio = kInf;
      double best_pivot = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (pos_[j] >= 0 || lo_[j] == hi_[j]) continue;
        const double t = T(r, j);
        if (std::fabs(t) < kPivotTol) continue;
        const bool can_up = x_[j] < hi_[j];
        const bool can_down = x_[j] > lo_[j];
        const double gain = -t * need;  // change in x_b per unit increase of x_j, signed by need
        if (!((gain > 0 && can_up) || (gain < 0 && can_down))) continue;
        const double ratio = std::fabs(d_[j]) / std::fabs(t);
        if (ratio < best_ratio - kTieTol || (ratio <= best_ratio + kTieTol && std::fabs(t) > std::fabs(best_pivot))) {
          best_ratio = ratio;
          enter = j;
          best_pivot = t;
        }
      }
      if (enter == cols_) return row_proves_infeasible(r, need) ? WarmOutcome::infeasible : WarmOutcome::unusable;

      ++iterations_;
      const std::size_t leaving = basis_[r];
      x_[leaving] = need > 0 ? lo_[leaving] : hi_[leaving];
      pivot(r, enter);
      x_[enter] = 0.0;
      refresh_basic_values();
      if (++since_reinvert_ >= kReinvertEvery && !reinvert(cost)) return WarmOutcome::unusable;
    }
  }

  // Row r alone, over the nonbasic bounds, cannot bring its basic column back in range.
  bool row_proves_infeasible(std::size_t r, int need) const {
    const std::size_t b = basis_[r];
    double reach = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (pos_[j] >= 0) continue;
      const double t = T(r, j);
      if (std::fabs(t) < kNoise) continue;
      const double end = need > 0 ? std::max(-t * lo_[j], -t * hi_[j]) : std::min(-t * lo_[j], -t * hi_[j]);
      if (!std::isfinite(end)) return false;
      reach += end;
    }
    const double margin = tol_.bound * (1.0 + std::fabs(reach));
    return need > 0 ? reach < lo_[b] - margin : reach > hi_[b] + margin;
  }
  double& T(std::size_t i, std::size_t j) { return tab_[i * cols_ + j]; }
  double T(std::size_t i, std::size_t j) const { return tab_[i * cols_ + j]; }
  double& F(std::size_t i, std::size_t j) { return full_[i * cols_ + j]; }

  void setup() {
    std::vector<double> x(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      x[j] = std::isfinite(lo_[j]) ? lo_[j] : std::isfinite(hi_[j]) ? hi_[j] : 0.0;
    }
    std::vector<double> row_lo(m_), row_hi(m_), activity(m_, 0.0);
    std::vector<int> artificial_sign(m_, 0);
    std::size_t artificials = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      row_lo[i] = p_.sense[i] == RowSense::le ? -kInf : p_.rhs[i];
      row_hi[i] = p_.sense[i] == RowSense::ge ? kInf : p_.rhs[i];
      for (std::size_t j = 0; j < n_; ++j) activity[i] += p_.a[i * n_ + j] * x[j];
      if (activity[i] < row_lo[i] || activity[i] > row_hi[i]) {
        const double bound = activity[i] < row_lo[i] ? row_lo[i] : row_hi[i];
        artificial_sign[i] = bound - activity[i] > 0 ? 1 : -1;
        ++artificials;
      }
    }

    cols_ = n_ + m_ + artificials;
    first_artificial_ = n_ + m_;
    full_.assign(m_ * cols_, 0.0);
    lo_.resize(cols_);
    hi_.resize(cols_);
    x_.assign(cols_, 0.0);
    pos_.assign(cols_, -1);
    basis_.assign(m_, 0);
    std::copy(x.begin(), x.end(), x_.begin());

    std::size_t next_art = first_artificial_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) F(i, j) = p_.a[i * n_ + j];
      const std::size_t logical = n_ + i;
      F(i, logical) = -1.0;
      lo_[logical] = row_lo[i];
      hi_[logical] = row_hi[i];
      if (artificial_sign[i] == 0) {
        x_[logical] = activity[i];
        set_basic(i, logical);
      } else {
        x_[logical] = activity[i] < row_lo[i] ? row_lo[i] : row_hi[i];
        const std::size_t art = next_art++;
        F(i, art) = static_cast<double>(artificial_sign[i]);
        lo_[art] = 0.0;
        hi_[art] = kInf;
        x_[art] = std::fabs(x_[logical] - activity[i]);
        set_basic(i, art);
      }
    }

    // The starting basis is diagonal with entries -1 (logical) or g_i (artificial).
    tab_ = full_;
    for (std::size_t i = 0; i < m_; ++i) {
      const double diag = F(i, basis_[i]);
      if (diag != 1.0) {
        for (std::size_t j = 0; j < cols_; ++j) T(i, j) /= diag;
      }
    }
  }

  void set_basic(std::size_t row, std::size_t col) {
    basis_[row] = col;
    pos_[col] = static_cast<int>(row);
  }

  void compute_reduced_costs(const std::vector<double>& cost) {
    d_ = cost;
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = cost[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &tab_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) d_[j] -= cb * row[j];
    }
    for (std::size_t i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
  }

  // x_B = -B^{-1} N x_N, read off the current tableau.
  void refresh_basic_values() {
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = &tab_[i * cols_];
      double v = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (pos_[j] < 0 && x_[j] != 0.0) v -= row[j] * x_[j];
      }
      x_[basis_[i]] = v;
    }
  }

  PhaseOutcome optimize(const std::vector<double>& cost) {
    compute_reduced_costs(cost);
    bland_ = false;
    std::size_t degenerate_run = 0;
    const std::size_t max_iterations = 50 * (m_ + cols_) + 1000;
    std::size_t local = 0;

    while (true) {
      if (++local > max_iterations) return PhaseOutcome::iteration_limit;

      // Pricing.
      std::size_t enter = cols_;
      int dir = 0;
      double best = 0.0;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (pos_[j] >= 0 || lo_[j] == hi_[j]) continue;
        const double dj = d_[j];
        int cand = 0;
        if (dj > tol_.optimality && x_[j] < hi_[j]) cand = 1;
        else if (dj < -tol_.optimality && x_[j] > lo_[j]) cand = -1;
        if (cand == 0) continue;
        if (bland_) {
          enter = j;
          dir = cand;
          break;
        }
        if (std::fabs(dj) > best) {
          best = std::fabs(dj);
          enter = j;
          dir = cand;
        }
      }
      if (enter == cols_) return PhaseOutcome::optimal;

      // Ratio test.
      double theta = hi_[enter] - lo_[enter];
      if (!std::isfinite(theta)) theta = kInf;
      std::size_t leave_row = m_;
      double leave_pivot = 0.0;
      for (std::size_t i = 0; i < m_; ++i) {
        const double t = T(i, enter);
        if (std::fabs(t) < kPivotTol) continue;
        const double rate = -dir * t;
        const std::size_t b = basis_[i];
        double limit;
        if (rate > 0) {
          if (!std::isfinite(hi_[b])) continue;
          limit = (hi_[b] - x_[b]) / rate;
        } else {
          if (!std::isfinite(lo_[b])) continue;
          limit = (x_[b] - lo_[b]) / -rate;
        }
        limit = std::max(limit, 0.0);
        bool take = false;
        if (limit < theta - kTieTol) {
          take = true;
        } else if (limit <= theta + kTieTol && leave_row != m_) {
          take = bland_ ? b < basis_[leave_row] : std::fabs(t) > std::fabs(leave_pivot);
        }
        if (take) {
          theta = limit;
          leave_row = i;
          leave_pivot = t;
        }
      }
      if (!std::isfinite(theta)) return PhaseOutcome::unbounded;

      ++iterations_;
      degenerate_run = theta <= kDegenerateStep ? degenerate_run + 1 : 0;
      if (degenerate_run > kStallLimit) bland_ = true;

      x_[enter] += dir * theta;
      if (theta != 0.0) {
        for (std::size_t i = 0; i < m_; ++i) {
          const double t = T(i, enter);
          if (t != 0.0) x_[basis_[i]] -= dir * t * theta;
        }
      }
      if (leave_row == m_) {
        // Bound flip: the entering variable moved to its other bound.
        x_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
        continue;
      }
      const std::size_t leaving = basis_[leave_row];
      const double rate = -dir * leave_pivot;
      x_[leaving] = rate > 0 ? hi_[leaving] : lo_[leaving];
      pivot(leave_row, enter);

      if (++since_reinvert_ >= kReinvertEvery) {
        if (!reinvert(cost)) return PhaseOutcome::singular;
      }
    }
  }

  void pivot(std::size_t r, std::size_t enter) {
    double* prow = &tab_[r * cols_];
    const double inv = 1.0 / prow[enter];
    for (std::size_t j = 0; j < cols_; ++j) prow[j] *= inv;
    prow[enter] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tab_[i * cols_];
      const double f = row[enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow[j];
      row[enter] = 0.0;
    }
    const double fd = d_[enter];
    if (fd != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) d_[j] -= fd * prow[j];
    }
    d_[enter] = 0.0;
    pos_[basis_[r]] = -1;
    set_basic(r, enter);
  }

  // Rebuilds the tableau, basic values and reduced costs from the original
  // matrix and the current basis to shed accumulated rounding error.
  bool reinvert(const std::vector<double>& cost) {
    since_reinvert_ = 0;
    // Gauss-Jordan on [B | I] with partial pivoting.
    std::vector<double> b(m_ * m_), inv(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t k = 0; k < m_; ++k) b[i * m_ + k] = F(i, basis_[k]);
      inv[i * m_ + i] = 1.0;
    }
    for (std::size_t c = 0; c < m_; ++c) {
      std::size_t piv = c;
      for (std::size_t i = c + 1; i < m_; ++i) {
        if (std::fabs(b[i * m_ + c]) > std::fabs(b[piv * m_ + c])) piv = i;
      }
      if (std::fabs(b[piv * m_ + c]) < 1e-12) return false;
      if (piv != c) {
        for (std::size_t k = 0; k < m_; ++k) {
          std::swap(b[piv * m_ + k], b[c * m_ + k]);
          std::swap(inv[piv * m_ + k], inv[c * m_ + k]);
        }
      }
      const double s = 1.0 / b[c * m_ + c];
      for (std::size_t k = 0; k < m_; ++k) {
        b[c * m_ + k] *= s;
        inv[c * m_ + k] *= s;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (i == c) continue;
        const double f = b[i * m_ + c];
        if (f == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) {
          b[i * m_ + k] -= f * b[c * m_ + k];
          inv[i * m_ + k] -= f * inv[c * m_ + k];
        }
      }
    }
    // Row c of `inv` now belongs to the basic variable of column c of B.
    std::fill(tab_.begin(), tab_.end(), 0.0);
    for (std::size_t r = 0; r < m_; ++r) {
      double* row = &tab_[r * cols_];
      const double* irow = &inv[r * m_];
      for (std::size_t k = 0; k < m_; ++k) {
        const double f = irow[k];
        if (f == 0.0) continue;
        const double* frow = &full_[k * cols_];
        for (std::size_t j = 0; j < cols_; ++j) row[j] += f * frow[j];
      }
    }
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t i = 0; i < m_; ++i) T(i, basis_[r]) = i == r ? 1.0 : 0.0;
    }
    refresh_basic_values();
    compute_reduced_costs(cost);
    return true;
  }

  void retire_artificials() {
    for (std::size_t j = first_artificial_; j < cols_; ++j) {
      lo_[j] = 0.0;
      hi_[j] = 0.0;
      if (pos_[j] < 0) x_[j] = 0.0;
    }
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < first_artificial_) continue;
      std::size_t best = cols_;
      double mag = 1e-7;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (pos_[j] >= 0) continue;
        if (std::fabs(T(r, j)) > mag) {
          mag = std::fabs(T(r, j));
          best = j;
        }
      }
      if (best == cols_) continue;  // redundant row; the artificial stays basic at zero
      const std::size_t art = basis_[r];
      d_.assign(cols_, 0.0);
      pivot(r, best);
      x_[art] = 0.0;
    }
    refresh_basic_values();
  }

  bool dual_feasible() const {
    for (std::size_t j = 0; j < cols_; ++j) {
      if (pos_[j] >= 0 || lo_[j] == hi_[j]) continue;
      if (d_[j] > tol_.optimality && x_[j] < hi_[j]) return false;
      if (d_[j] < -tol_.optimality && x_[j] > lo_[j]) return false;
    }
    return true;
  }

  bool primal_feasible(const std::vector<double>& x, std::string& why) const {
    for (std::size_t j = 0; j < n_; ++j) {
      if (x[j] < lo_[j] - tol_.bound * (1.0 + std::fabs(lo_[j])) ||
          x[j] > hi_[j] + tol_.bound * (1.0 + std::fabs(hi_[j]))) {
        std::ostringstream os;
        os << "column " << j << " value " << x[j] << " outside [" << lo_[j] << ", " << hi_[j] << "]";
        why = os.str();
        return false;
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      double act = 0.0;
      for (std::size_t j = 0; j < n_; ++j) act += p_.a[i * n_ + j] * x[j];
      const double viol = p_.sense[i] == RowSense::le   ? act - p_.rhs[i]
                          : p_.sense[i] == RowSense::ge ? p_.rhs[i] - act
                                                        : std::fabs(act - p_.rhs[i]);
      if (viol > tol_.feasibility) {
        std::ostringstream os;
        os << "row " << i << " violated by " << viol << " after final reinversion";
        why = os.str();
        return false;
      }
    }
    return true;
  }

  LpResult& fail(LpResult& result, PhaseOutcome out, const char* where) {
    result.status = LpStatus::failed;
    result.iterations = iterations_;
    std::string reason = out == PhaseOutcome::iteration_limit ? "iteration limit reached"
                         : out == PhaseOutcome::singular      ? "singular basis"
                                                              : "unbounded phase-1 problem";
    result.diagnostic = std::string(where) + ": " + reason;
    return result;
  }

  const LpProblem& p_;
  SolverTolerances tol_;
  std::size_t m_;
  std::size_t n_;
  std::size_t cols_ = 0;
  std::size_t first_artificial_ = 0;
  std::vector<double> full_;
  std::vector<double> tab_;
  std::vector<double> lo_, hi_, x_, d_;
  std::vector<std::size_t> basis_;
  std::vector<int> pos_;
  std::size_t iterations_ = 0;
  std::size_t since_reinvert_ = 0;
  bool bland_ = false;
};

}  // namespace

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal:
      return "optimal";
    case LpStatus::infeasible:
      return "infeasible";
    case LpStatus::unbounded:
      return "unbounded";
    case LpStatus::failed:
      return "failed";
  }
  return "failed";
}

LpProblem compile_lp(const MilpModel& model) {
  if (!model.objective()) throw Error("compile_lp: the model has no objective");
  LpProblem p;
  p.rows = model.constraints().size();
  p.cols = model.variables().size();
  p.a.assign(p.rows * p.cols, 0.0);
  for (std::size_t i = 0; i < p.rows; ++i) {
    const auto& row = model.constraints()[i];
    for (const auto& term : row.terms) p.a[i * p.cols + model.require_index(term.var)] += term.coef;
    p.sense.push_back(row.sense);
    p.rhs.push_back(row.rhs);
  }
  for (const auto& v : model.variables()) {
    p.lo.push_back(v.lo);
    p.hi.push_back(v.hi);
    p.is_binary.push_back(v.is_binary());
  }
  p.cost.assign(p.cols, 0.0);
  p.cost[model.require_index(model.objective()->var)] = 1.0;
  p.maximize = model.objective()->sense == ObjectiveSense::maximize;
  return p;
}

LpResult solve_lp(const LpProblem& problem, std::span<const double> lo, std::span<const double> hi,
                  const SolverTolerances& tol) {
  if (lo.size() != problem.cols || hi.size() != problem.cols) {
    throw ShapeError("solve_lp: bound vectors do not match the column count");
  }
  TableauSimplex simplex(problem, lo, hi, tol);
  return simplex.run();
}

LpResult solve_lp(const LpProblem& problem, std::span<const double> lo, std::span<const double> hi,
                  const LpWarmStart* warm, const SolverTolerances& tol) {
  if (lo.size() != problem.cols || hi.size() != problem.cols) {
    throw ShapeError("solve_lp: bound vectors do not match the column count");
  }
  TableauSimplex simplex(problem, lo, hi, tol);
  return simplex.run(warm);
}

LpResult solve_lp(const LpProblem& problem, const SolverTolerances& tol) {
  return solve_lp(problem, problem.lo, problem.hi, tol);
}

LpResult lp_solve(const MilpModel& model, const BinaryFixings& fixings, const SolverTolerances& tol) {
  const LpProblem p = compile_lp(model);
  std::vector<double> lo = p.lo;
  std::vector<double> hi = p.hi;
  if (!fixings.empty()) {
    if (fixings.size() != p.cols) throw ShapeError("lp_solve: fixings must have one entry per variable");
    for (std::size_t j = 0; j < p.cols; ++j) {
      if (!p.is_binary[j] || fixings[j] == kFree) continue;
      lo[j] = hi[j] = fixings[j] ? 1.0 : 0.0;
    }
  }
  return solve_lp(p, lo, hi, tol);
}

Violation max_violation(const MilpModel& model, std::span<const double> x) {
  Violation v;
  const auto& vars = model.variables();
  if (x.size() != vars.size()) throw ShapeError("max_violation: assignment size mismatch");
  for (std::size_t j = 0; j < vars.size(); ++j) {
    v.bound = std::max({v.bound, vars[j].lo - x[j], x[j] - vars[j].hi});
  }
  for (const auto& row : model.constraints()) {
    double act = 0.0;
    for (const auto& t : row.terms) act += t.coef * x[model.require_index(t.var)];
    const double viol = row.sense == RowSense::le   ? act - row.rhs
                        : row.sense == RowSense::ge ? row.rhs - act
                                                    : std::fabs(act - row.rhs);
    v.row = std::max(v.row, viol);
  }
  return v;
}

}  // namespace innrange
