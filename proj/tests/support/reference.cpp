// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace innrange::testing {

namespace {

// Solves the n x n system m y = r in place; false when (numerically) singular.
bool gauss(std::vector<std::vector<double>> m, std::vector<double> r, std::vector<double>& y) {
  const std::size_t n = r.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::fabs(m[i][c]) > std::fabs(m[piv][c])) piv = i;
    if (std::fabs(m[piv][c]) < 1e-12) return false;
    std::swap(m[piv], m[c]);
    std::swap(r[piv], r[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const double f = m[i][c] / m[c][c];
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
      r[i] -= f * r[c];
    }
  }
  y.resize(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = r[i] / m[i][i];
  return true;
}

struct Plane {
  std::vector<double> a;
  double b = 0.0;
};

}  // namespace

std::optional<double> vertex_lp(const LpProblem& lp) {
  const std::size_t n = lp.cols;
  if (n == 0) throw std::invalid_argument("vertex_lp: no columns");
  std::vector<Plane> planes;
  std::vector<std::size_t> equalities;
  for (std::size_t i = 0; i < lp.rows; ++i) {
    Plane p{std::vector<double>(lp.a.begin() + static_cast<long>(i * n), lp.a.begin() + static_cast<long>((i + 1) * n)),
            lp.rhs[i]};
    if (lp.sense[i] == RowSense::eq) equalities.push_back(planes.size());
    planes.push_back(std::move(p));
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (double b : {lp.lo[j], lp.hi[j]}) {
      Plane p{std::vector<double>(n, 0.0), b};
      p.a[j] = 1.0;
      planes.push_back(std::move(p));
    }
  }

  auto feasible = [&](const std::vector<double>& x) {
    for (std::size_t j = 0; j < n; ++j) {
      const double tol = 1e-9 * std::max(1.0, std::fabs(x[j]));
      if (x[j] < lp.lo[j] - tol || x[j] > lp.hi[j] + tol) return false;
    }
    for (std::size_t i = 0; i < lp.rows; ++i) {
      double lhs = 0.0, scale = std::fabs(lp.rhs[i]);
      for (std::size_t j = 0; j < n; ++j) {
        lhs += lp.a[i * n + j] * x[j];
        scale = std::max(scale, std::fabs(lp.a[i * n + j] * x[j]));
      }
      const double tol = 1e-9 * std::max(1.0, scale);
      if (lp.sense[i] == RowSense::le && lhs > lp.rhs[i] + tol) return false;
      if (lp.sense[i] == RowSense::ge && lhs < lp.rhs[i] - tol) return false;
      if (lp.sense[i] == RowSense::eq && std::fabs(lhs - lp.rhs[i]) > tol) return false;
    }
    return true;
  };

  std::optional<double> best;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> choose = [&](std::size_t from) {
    if (chosen.size() == n) {
      for (std::size_t e : equalities)
        if (std::find(chosen.begin(), chosen.end(), e) == chosen.end()) return;
      std::vector<std::vector<double>> m;
      std::vector<double> r;
      for (std::size_t c : chosen) {
        m.push_back(planes[c].a);
        r.push_back(planes[c].b);
      }
      std::vector<double> x;
      if (!gauss(m, r, x) || !feasible(x)) return;
      double value = 0.0;
      for (std::size_t j = 0; j < n; ++j) value += lp.cost[j] * x[j];
      if (!best || (lp.maximize ? value > *best : value < *best)) best = value;
      return;
    }
    for (std::size_t p = from; p < planes.size(); ++p) {
      chosen.push_back(p);
      choose(p + 1);
      chosen.pop_back();
    }
  };
  choose(0);
  return best;
}

std::optional<std::vector<Interval>> pattern_range(const InnNetwork& net, const InputBox& box) {
  if (!is_concrete(net)) throw std::invalid_argument("pattern_range: concrete networks only");
  const std::size_t n = net.input_size();
  const std::size_t k = net.layer_count();
  std::vector<std::size_t> offsets;
  std::size_t nodes = 0;
  for (std::size_t i = 1; i <= k; ++i) {
    offsets.push_back(nodes);
    nodes += net.layer_size(i);
  }
  const std::size_t outputs = net.output_size();
  std::vector<Interval> range(outputs, {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
  bool any = false;

  for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << nodes); ++pattern) {
    // Affine form (coefficients over x, constant) of every node's value.
    std::vector<std::vector<double>> coef(net.input_size(), std::vector<double>(n, 0.0));
    std::vector<double> cst(net.input_size(), 0.0);
    for (std::size_t j = 0; j < n; ++j) coef[j][j] = 1.0;

    LpProblem lp;
    lp.cols = n;
    for (const auto& b : box.bounds) {
      lp.lo.push_back(b.lo);
      lp.hi.push_back(b.hi);
    }
    lp.is_binary.assign(n, false);
    std::vector<std::vector<double>> out_coef;
    std::vector<double> out_cst;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& w = net.weights[i];
      std::vector<std::vector<double>> next_coef(w.cols(), std::vector<double>(n, 0.0));
      std::vector<double> next_cst(w.cols(), 0.0);
      for (std::size_t t = 0; t < w.cols(); ++t) {
        std::vector<double> pre(n, 0.0);
        double pre_c = net.biases[i][t].lo;
        for (std::size_t s = 0; s < w.rows(); ++s) {
          const double ws = w(s, t).lo;
          for (std::size_t j = 0; j < n; ++j) pre[j] += ws * coef[s][j];
          pre_c += ws * cst[s];
        }
        const bool active = (pattern >> (offsets[i] + t)) & 1U;
        lp.a.insert(lp.a.end(), pre.begin(), pre.end());
        lp.sense.push_back(active ? RowSense::ge : RowSense::le);
        lp.rhs.push_back(-pre_c);
        ++lp.rows;
        if (active) {
          next_coef[t] = pre;
          next_cst[t] = pre_c;
        }
      }
      coef = std::move(next_coef);
      cst = std::move(next_cst);
    }

    for (std::size_t t = 0; t < outputs; ++t) {
      lp.cost = coef[t];
      for (bool maximize : {false, true}) {
        lp.maximize = maximize;
        const auto v = vertex_lp(lp);
        if (!v) goto next_pattern;  // region empty for this pattern
        any = true;
        const double value = *v + cst[t];
        if (maximize) {
          range[t].hi = std::max(range[t].hi, value);
        } else {
          range[t].lo = std::min(range[t].lo, value);
        }
      }
    }
  next_pattern:;
  }
  if (!any) return std::nullopt;
  return range;
}

}  // namespace innrange::testing
