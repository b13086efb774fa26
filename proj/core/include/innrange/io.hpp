// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "innrange/abstraction.hpp"
#include "innrange/milp_model.hpp"
#include "innrange/network.hpp"
#include "innrange/range_analysis.hpp"

namespace innrange {

// ---------------------------------------------------------------------------
// NNet text format

/// Input statistics carried by an NNet file. `means` and `ranges` have one
/// entry per input plus a trailing entry for the outputs.
struct NnetNormalization {
  std::vector<double> input_mins;
  std::vector<double> input_maxes;
  std::vector<double> means;
  std::vector<double> ranges;

  friend bool operator==(const NnetNormalization&, const NnetNormalization&) = default;
};

struct NnetDocument {
  InnNetwork network;
  NnetNormalization normalization;
};

/// Parses the comma separated NNet dialect. Errors carry line and column.
NnetDocument parse_nnet(std::string_view text);
NnetDocument read_nnet_file(const std::string& path);

/// Writes a concrete network; throws if any interval is not singular.
std::string write_nnet(const InnNetwork& net, const NnetNormalization& normalization);

/// Neutral statistics: input box [-1, 1], means 0, ranges 1.
NnetNormalization identity_normalization(std::size_t inputs);

/// Maps a box in raw input units to normalized units, (x - mean) / range per input.
InputBox normalize_box(const InputBox& raw, const NnetNormalization& normalization);

// ---------------------------------------------------------------------------
// JSON documents

/// {"format": "innrange-network", "version": 1, "layers": [...], "weights": [...],
///  "biases": [...], "node_names"?: [...], "provenance"?: "..."}
/// weights[i][s][t] and biases[i][t] are [lo, hi] or a bare number for [x, x].
InnNetwork parse_network_json(std::string_view text);
std::string write_network_json(const InnNetwork& net);

/// {"layers": [[[idx, ...], ...], ...]}
Partition parse_partition_json(std::string_view text);
std::string write_partition_json(const Partition& partition);

/// Input box with optional linear rows over the inputs:
/// {"bounds": [[lo, hi], ...], "constraints"?: [{"tag"?: "...", "terms": [{"input": j, "coef": c}, ...],
///   "sense": "<=" | ">=" | "=", "rhs": r}, ...]}
struct BoxDocument {
  InputBox box;
  std::vector<LinearConstraint> constraints;
};
BoxDocument parse_box_json(std::string_view text);
std::string write_box_json(const BoxDocument& doc);

/// Result documents. Primary results live under "result" and "metadata";
/// wall-clock figures only under "timings".
std::string write_range_json(const RangeResult& result);
std::string write_soundness_json(const SoundnessReport& report);
std::string write_bench_json(const BenchTable& table, std::uint64_t seed, std::size_t runs);

inline constexpr const char* kBenchCsvHeader = "count,run,node,abs_time,enc_time,solve_time,lower,upper";
std::string write_bench_csv(const BenchTable& table);

/// Whole file as a string; throws Error naming the path on failure.
std::string read_text_file(const std::string& path);

}  // namespace innrange
