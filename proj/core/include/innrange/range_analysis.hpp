// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "innrange/abstraction.hpp"
#include "innrange/encode.hpp"
#include "innrange/network.hpp"
#include "innrange/solver.hpp"

namespace innrange {

struct RangeConfig {
  SolveConfig solver;
  EncodingOptions encoding;
  AbstractionMode abstraction_mode = AbstractionMode::scaled;
  /// Accept partitions that merge input or output nodes. The result is then
  /// no longer a guaranteed over-approximation of the concrete outputs.
  bool allow_io_merge = false;
  /// Worker threads for the independent per-bound solves.
  std::size_t jobs = 1;
  /// Extra linear constraints over the input variables x_0_j.
  std::vector<LinearConstraint> input_rows;
  /// Recorded in the result metadata only.
  std::optional<std::uint64_t> partition_seed;
};

/// One side of an output interval.
struct BoundResult {
  /// Sound bound; the optimum when `exact`. +inf/-inf for an empty input set.
  double value = 0.0;
  bool exact = false;
  SolveStatus status = SolveStatus::failed;
  SolveStats stats;
};

struct OutputRange {
  std::size_t node = 0;
  BoundResult lower;
  BoundResult upper;

  Interval interval() const { return {lower.value, upper.value}; }
};

/// Wall-clock seconds of the three phases of an analysis.
struct PhaseTimings {
  double abstraction = 0.0;
  double encoding = 0.0;
  double solving = 0.0;
};

struct RangeResult {
  std::vector<OutputRange> outputs;
  bool abstraction_used = false;
  bool unsound_abstraction = false;
  bool paper_literal_encoding = false;
  std::vector<std::size_t> analyzed_layer_sizes;
  std::optional<std::uint64_t> partition_seed;
  PhaseTimings timings;

  /// False iff every bound came back infeasible (empty input set).
  bool feasible() const;
  /// True iff every bound is a proven optimum.
  bool exact() const;
};

/// Output range of `net` over `box`, optionally through the abstraction
/// `partition`. Each output node gets one minimization and one maximization.
/// Throws ValidationError for partitions that are invalid or, unless
/// allowed, merge input/output nodes.
RangeResult output_range(const InnNetwork& net, const InputBox& box,
                         const std::optional<Partition>& partition = std::nullopt,
                         const RangeConfig& config = {});

/// Largest hidden+output node count accepted by `exact_range_oracle`.
inline constexpr std::size_t kOracleNodeGuard = 16;

/// Ground truth by enumerating every assignment of the phase binaries and
/// solving the LP left by each (subtrees whose partial assignment is already
/// LP-infeasible are skipped, which cannot change the envelope).
RangeResult exact_range_oracle(const InnNetwork& net, const InputBox& box,
                               const std::vector<LinearConstraint>& input_rows = {},
                               std::size_t node_guard = kOracleNodeGuard);

struct SampleConfig {
  std::size_t inputs = 100;
  /// Weight/bias selections drawn per input; concrete networks use one.
  std::size_t selections_per_input = 10;
};

struct SoundnessViolation {
  std::vector<double> input;
  std::uint64_t selection_seed = 0;
  std::size_t output_node = 0;
  double value = 0.0;
  /// "lower" or "upper".
  std::string bound;
  double bound_value = 0.0;
};

struct SoundnessReport {
  std::size_t samples_tested = 0;
  std::vector<SoundnessViolation> violations;
  /// Largest amount by which a sampled output left its interval (<= 0 when all inside).
  double max_slack = 0.0;
  double tolerance = 1e-6;
  RangeResult range;
};

/// Samples concrete executions of `net` and checks them against the range of
/// the abstraction of `net` by `partition`.
SoundnessReport soundness_check(const InnNetwork& net, const Partition& partition, const InputBox& box,
                                const SampleConfig& samples, std::uint64_t seed,
                                const RangeConfig& config = {});

struct BenchRow {
  std::size_t count = 0;
  std::size_t run = 0;
  std::size_t node = 0;
  std::uint64_t partition_seed = 0;
  PhaseTimings timings;
  double lower = 0.0;
  double upper = 0.0;
  bool exact = false;
};

struct Stat {
  double avg = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct BenchSummary {
  std::size_t count = 0;
  Stat abstraction_time;
  Stat encoding_time;
  Stat solve_time;
  /// Per output node.
  std::vector<Stat> lower;
  std::vector<Stat> upper;
};

struct BenchTable {
  std::vector<BenchRow> rows;
  std::vector<BenchSummary> summary;
};

/// For each count, `runs` seeded random partitions (count groups per hidden
/// layer), each analyzed with `output_range`; rows are ordered by (count, run, node).
BenchTable bench_partitions(const InnNetwork& net, const InputBox& box, const std::vector<std::size_t>& counts,
                            std::size_t runs, std::uint64_t seed, const RangeConfig& config = {});

}  // namespace innrange
