// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include "innrange/range_analysis.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <thread>

#include "innrange/errors.hpp"
#include "innrange/random.hpp"

namespace innrange {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs task(i) for i in [0, n) on up to `jobs` threads.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

BoundResult to_bound(const SolveResult& solved, bool maximize) {
  BoundResult out;
  out.status = solved.status;
  out.stats = solved.stats;
  switch (solved.status) {
    case SolveStatus::optimal:
      out.value = solved.objective;
      out.exact = true;
      break;
    case SolveStatus::infeasible:
      out.value = maximize ? -kInf : kInf;
      break;
    case SolveStatus::node_limit:
    case SolveStatus::time_limit:
      out.value = solved.best_bound;
      break;
    case SolveStatus::failed:
      out.value = maximize ? kInf : -kInf;
      break;
  }
  return out;
}

Stat stat_of(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  s.min = *std::min_element(xs.begin(), xs.end());
  s.max = *std::max_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.avg = sum / static_cast<double>(xs.size());
  return s;
}

bool rows_hold(const std::vector<LinearConstraint>& rows, const std::vector<double>& input) {
  for (const auto& row : rows) {
    double lhs = 0.0;
    for (const auto& t : row.terms) lhs += t.coef * input.at(t.var.node);
    const double tol = 1e-9 * std::max(1.0, std::fabs(row.rhs));
    switch (row.sense) {
      case RowSense::le:
        if (lhs > row.rhs + tol) return false;
        break;
      case RowSense::ge:
        if (lhs < row.rhs - tol) return false;
        break;
      case RowSense::eq:
        if (std::fabs(lhs - row.rhs) > tol) return false;
        break;
    }
  }
  return true;
}

}  // namespace

bool RangeResult::feasible() const {
  return std::any_of(outputs.begin(), outputs.end(), [](const OutputRange& o) {
    return o.lower.status != SolveStatus::infeasible || o.upper.status != SolveStatus::infeasible;
  });
}

bool RangeResult::exact() const {
  return std::all_of(outputs.begin(), outputs.end(),
                     [](const OutputRange& o) { return o.lower.exact && o.upper.exact; });
}

RangeResult output_range(const InnNetwork& net, const InputBox& box, const std::optional<Partition>& partition,
                         const RangeConfig& config) {
  require_valid(net);
  RangeResult result;
  result.partition_seed = config.partition_seed;
  result.paper_literal_encoding = config.encoding.paper_literal;

  const InnNetwork* analyzed = &net;
  InnNetwork abstract;
  const InputBox* analyzed_box = &box;
  InputBox merged_box;
  if (partition) {
    const auto start = Clock::now();
    auto problems = validate_partition(net, *partition, !config.allow_io_merge);
    if (!problems.empty()) throw ValidationError("invalid partition", std::move(problems));
    abstract = abstract_network(net, *partition, config.abstraction_mode);
    analyzed = &abstract;
    result.abstraction_used = true;
    result.unsound_abstraction =
        config.abstraction_mode == AbstractionMode::unscaled_hull || !has_identity_io(net, *partition);
    if (box.size() != net.input_size()) {
      throw ShapeError("input box has " + std::to_string(box.size()) + " entries, network has " +
                       std::to_string(net.input_size()) + " inputs");
    }
    merged_box = abstract_box(box, partition->layers[0]);
    if (partition->layers[0].size() != net.input_size() && !config.input_rows.empty()) {
      throw ValidationError("invalid partition", {"input rows cannot be combined with merged input nodes"});
    }
    analyzed_box = &merged_box;
    result.timings.abstraction = seconds_since(start);
  }
  result.analyzed_layer_sizes = analyzed->layer_sizes;

  auto start = Clock::now();
  const MilpModel model = encode(*analyzed, *analyzed_box, config.input_rows, config.encoding);
  result.timings.encoding = seconds_since(start);

  const std::size_t k = analyzed->layer_count();
  const std::size_t outputs = analyzed->output_size();
  result.outputs.resize(outputs);
  for (std::size_t t = 0; t < outputs; ++t) result.outputs[t].node = t;

  start = Clock::now();
  parallel_for(2 * outputs, config.jobs, [&](std::size_t task) {
    const std::size_t node = task / 2;
    const bool maximize = task % 2 == 1;
    const MilpModel posed = set_objective(model, node_var(k, node),
                                          maximize ? ObjectiveSense::maximize : ObjectiveSense::minimize);
    const BoundResult bound = to_bound(solve(posed, config.solver), maximize);
    (maximize ? result.outputs[node].upper : result.outputs[node].lower) = bound;
  });
  result.timings.solving = seconds_since(start);
  for (auto& out : result.outputs) {
    // Same roundoff guard as the oracle: keep lower <= upper by widening.
    if (out.lower.value > out.upper.value && std::isfinite(out.lower.value) && std::isfinite(out.upper.value)) {
      std::swap(out.lower.value, out.upper.value);
    }
  }
  return result;
}

RangeResult exact_range_oracle(const InnNetwork& net, const InputBox& box,
                               const std::vector<LinearConstraint>& input_rows, std::size_t node_guard) {
  require_valid(net);
  std::size_t nodes = 0;
  for (std::size_t i = 1; i < net.layer_sizes.size(); ++i) nodes += net.layer_sizes[i];
  if (nodes > node_guard) {
    throw Error("exact oracle: " + std::to_string(nodes) + " hidden+output nodes exceed the guard of " +
                std::to_string(node_guard));
  }

  RangeResult result;
  auto start = Clock::now();
  MilpModel model = encode(net, box, input_rows);
  const std::size_t k = net.layer_count();
  model = set_objective(std::move(model), node_var(k, 0), ObjectiveSense::maximize);
  LpProblem problem = compile_lp(model);
  result.timings.encoding = seconds_since(start);
  result.analyzed_layer_sizes = net.layer_sizes;

  std::vector<std::size_t> binaries;
  for (std::size_t j = 0; j < problem.cols; ++j) {
    if (problem.is_binary[j]) binaries.push_back(j);
  }
  std::vector<std::size_t> output_cols(net.output_size());
  for (std::size_t t = 0; t < output_cols.size(); ++t) output_cols[t] = model.require_index(node_var(k, t));

  const std::size_t outputs = output_cols.size();
  std::vector<double> lower(outputs, kInf), upper(outputs, -kInf);
  std::vector<double> lo = problem.lo, hi = problem.hi;
  std::size_t lp_count = 0;
  bool failed = false;
  bool any_feasible = false;
  std::string diagnostic;

  auto solve_with = [&](std::size_t col, bool maximize) {
    std::fill(problem.cost.begin(), problem.cost.end(), 0.0);
    problem.cost[col] = 1.0;
    problem.maximize = maximize;
    ++lp_count;
    return solve_lp(problem, lo, hi);
  };

  start = Clock::now();
  std::function<void(std::size_t)> visit = [&](std::size_t depth) {
    if (failed) return;
    if (depth == binaries.size()) {
      bool leaf_feasible = true;
      for (std::size_t t = 0; t < outputs && leaf_feasible; ++t) {
        for (bool maximize : {false, true}) {
          LpResult lp = solve_with(output_cols[t], maximize);
          if (lp.status == LpStatus::infeasible) {
            leaf_feasible = false;
            break;
          }
          if (lp.status != LpStatus::optimal) {
            failed = true;
            diagnostic = lp.diagnostic;
            return;
          }
          if (maximize) {
            upper[t] = std::max(upper[t], lp.objective);
          } else {
            lower[t] = std::min(lower[t], lp.objective);
          }
        }
      }
      any_feasible |= leaf_feasible;
      return;
    }
    if (depth > 0) {
      LpResult lp = solve_with(output_cols[0], true);
      if (lp.status == LpStatus::infeasible) return;
      if (lp.status == LpStatus::failed) {
        failed = true;
        diagnostic = lp.diagnostic;
        return;
      }
    }
    const std::size_t col = binaries[depth];
    for (double phase : {0.0, 1.0}) {
      lo[col] = hi[col] = phase;
      visit(depth + 1);
    }
    lo[col] = problem.lo[col];
    hi[col] = problem.hi[col];
  };
  visit(0);
  result.timings.solving = seconds_since(start);
  if (failed) throw Error("exact oracle: LP failed: " + diagnostic);

  result.outputs.resize(outputs);
  for (std::size_t t = 0; t < outputs; ++t) {
    auto& out = result.outputs[t];
    out.node = t;
    const bool empty = !any_feasible;
    // Roundoff can leave a pinned output's minimum a few ulps above its maximum.
    if (!empty && lower[t] > upper[t]) std::swap(lower[t], upper[t]);
    const SolveStatus status = empty ? SolveStatus::infeasible : SolveStatus::optimal;
    out.lower = {lower[t], !empty, status, {0, lp_count, result.timings.solving}};
    out.upper = {upper[t], !empty, status, {0, lp_count, result.timings.solving}};
  }
  return result;
}

SoundnessReport soundness_check(const InnNetwork& net, const Partition& partition, const InputBox& box,
                                const SampleConfig& samples, std::uint64_t seed, const RangeConfig& config) {
  require_valid(net);
  if (!has_identity_io(net, partition)) {
    throw ValidationError("soundness check needs singleton input and output groups",
                          {"partition merges input or output nodes"});
  }
  if (box.size() != net.input_size()) {
    throw ShapeError("input box has " + std::to_string(box.size()) + " intervals, network has " +
                     std::to_string(net.input_size()) + " inputs");
  }

  SoundnessReport report;
  report.range = output_range(net, box, partition, config);
  report.max_slack = -kInf;

  const std::size_t selections = is_concrete(net) ? 1 : samples.selections_per_input;
  std::mt19937_64 rng(derive_seed(seed, {0}));
  for (std::size_t s = 0; s < samples.inputs; ++s) {
    std::vector<double> input(box.size());
    bool accepted = false;
    for (int attempt = 0; attempt < 1000 && !accepted; ++attempt) {
      for (std::size_t j = 0; j < box.size(); ++j) {
        const Interval b = box.bounds[j];
        input[j] = b.singular() ? b.lo : std::uniform_real_distribution<double>(b.lo, b.hi)(rng);
        input[j] = std::clamp(input[j], b.lo, b.hi);
      }
      accepted = rows_hold(config.input_rows, input);
    }
    if (!accepted) continue;

    for (std::size_t r = 0; r < selections; ++r) {
      const std::uint64_t sel_seed = derive_seed(seed, {1, s, r});
      const Valuation out = eval(net, {0, input}, sample_selection(net, sel_seed));
      ++report.samples_tested;
      for (std::size_t t = 0; t < out.values.size(); ++t) {
        const auto& range = report.range.outputs[t];
        const double v = out.values[t];
        const double below = range.lower.value - v;
        const double above = v - range.upper.value;
        report.max_slack = std::max({report.max_slack, below, above});
        if (below > report.tolerance) {
          report.violations.push_back({input, sel_seed, t, v, "lower", range.lower.value});
        }
        if (above > report.tolerance) {
          report.violations.push_back({input, sel_seed, t, v, "upper", range.upper.value});
        }
      }
    }
  }
  if (report.samples_tested == 0) report.max_slack = 0.0;
  return report;
}

BenchTable bench_partitions(const InnNetwork& net, const InputBox& box, const std::vector<std::size_t>& counts,
                            std::size_t runs, std::uint64_t seed, const RangeConfig& config) {
  require_valid(net);
  BenchTable table;
  for (std::size_t count : counts) {
    BenchSummary summary;
    summary.count = count;
    std::vector<double> abs_times, enc_times, solve_times;
    std::vector<std::vector<double>> lows(net.output_size()), ups(net.output_size());
    for (std::size_t run = 0; run < runs; ++run) {
      const std::uint64_t pseed = derive_seed(seed, {count, run});
      RangeConfig cfg = config;
      cfg.partition_seed = pseed;
      const auto start = Clock::now();
      const Partition partition = random_partition(net, count, pseed);
      const double partition_time = seconds_since(start);
      RangeResult res = output_range(net, box, partition, cfg);
      res.timings.abstraction += partition_time;
      abs_times.push_back(res.timings.abstraction);
      enc_times.push_back(res.timings.encoding);
      solve_times.push_back(res.timings.solving);
      for (const auto& out : res.outputs) {
        table.rows.push_back({count, run, out.node, pseed, res.timings, out.lower.value, out.upper.value,
                              out.lower.exact && out.upper.exact});
        lows[out.node].push_back(out.lower.value);
        ups[out.node].push_back(out.upper.value);
      }
    }
    summary.abstraction_time = stat_of(abs_times);
    summary.encoding_time = stat_of(enc_times);
    summary.solve_time = stat_of(solve_times);
    for (std::size_t t = 0; t < lows.size(); ++t) {
      summary.lower.push_back(stat_of(lows[t]));
      summary.upper.push_back(stat_of(ups[t]));
    }
    table.summary.push_back(std::move(summary));
  }
  return table;
}

}  // namespace innrange
