// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "innrange/interval.hpp"

namespace innrange {

/// Layered feed-forward ReLU network whose weights and biases are intervals.
///
/// Layers are numbered 0 (input) through k (output). `weights[i]` connects
/// layer i to layer i+1 and has |S_i| rows and |S_{i+1}| columns.
/// `biases[i]` belongs to layer i+1 (the input layer has no bias). A plain
/// neural network is the special case where every interval is singular.
///
/// The struct is deliberately permissive so that malformed networks can be
/// represented and reported by `validate`; every other operation assumes a
/// valid network and throws `ShapeError` on mismatches it runs into.
struct InnNetwork {
  std::vector<std::size_t> layer_sizes;
  std::vector<Matrix<Interval>> weights;
  std::vector<std::vector<Interval>> biases;
  /// Either empty or one list of labels per layer.
  std::vector<std::vector<std::string>> node_names;
  /// Free-form note (source file, normalization, abstraction warnings).
  std::string provenance;

  /// Number of weight layers k.
  std::size_t layer_count() const { return layer_sizes.empty() ? 0 : layer_sizes.size() - 1; }
  std::size_t layer_size(std::size_t layer) const { return layer_sizes.at(layer); }
  std::size_t input_size() const { return layer_sizes.at(0); }
  std::size_t output_size() const { return layer_sizes.at(layer_count()); }

  /// Bias vector of `layer`, 1 <= layer <= k.
  const std::vector<Interval>& layer_bias(std::size_t layer) const;

  /// Builds a concrete network from real weights (|S_i| x |S_{i+1}|) and biases.
  static InnNetwork concrete(std::vector<std::size_t> layer_sizes,
                             const std::vector<Matrix<double>>& weights,
                             const std::vector<std::vector<double>>& biases);

  friend bool operator==(const InnNetwork&, const InnNetwork&) = default;
};

/// Values of the nodes of one layer.
struct Valuation {
  std::size_t layer = 0;
  std::vector<double> values;

  friend bool operator==(const Valuation&, const Valuation&) = default;
};

/// Axis-aligned input set, one interval per input node.
struct InputBox {
  std::vector<Interval> bounds;

  std::size_t size() const noexcept { return bounds.size(); }
  friend bool operator==(const InputBox&, const InputBox&) = default;
};

/// One concrete choice of every weight and bias inside the network's intervals.
struct WeightSelection {
  std::vector<Matrix<double>> weights;
  std::vector<std::vector<double>> biases;  // biases[i] belongs to layer i+1
};

/// Sound per-node bounds for every layer. For layer 0 both equal the input box.
struct LayerBounds {
  std::vector<std::vector<Interval>> pre_activation;
  std::vector<std::vector<Interval>> post_activation;
};

/// Values produced by one concrete execution, all layers.
struct ExecutionTrace {
  std::vector<std::vector<double>> pre_activation;  // layer 0 holds the input
  std::vector<std::vector<double>> post_activation;
};

enum class Endpoint { lower, upper };

/// Structural problems of `net`; empty iff every invariant holds.
std::vector<std::string> validate(const InnNetwork& net);

/// Throws ValidationError if `validate` reports anything.
void require_valid(const InnNetwork& net);

/// True iff every weight and bias interval is singular.
bool is_concrete(const InnNetwork& net);

/// One layer of the semantics under a fixed selection: layer i -> i+1.
Valuation post_layer(const InnNetwork& net, std::size_t layer, const Valuation& v,
                     const WeightSelection& sel);

/// Output valuation (layer k) for `input` (layer 0) under `sel`.
Valuation eval(const InnNetwork& net, const Valuation& input, const WeightSelection& sel);

/// Same as `eval` but keeps every layer, including pre-activation sums.
ExecutionTrace eval_trace(const InnNetwork& net, const Valuation& input,
                          const WeightSelection& sel);

/// Uniform draw of every weight and bias inside its interval; a pure function of (net, seed).
WeightSelection sample_selection(const InnNetwork& net, std::uint64_t seed);

/// Selection taking the given endpoint of every interval.
WeightSelection endpoint_selection(const InnNetwork& net, Endpoint endpoint);

/// Interval bound propagation over the box and every weight/bias selection.
LayerBounds interval_bounds(const InnNetwork& net, const InputBox& box);

/// Exact range of sum_s w(s,s')*v(s) + b(s') over the weight and bias intervals.
Interval affine_range(const InnNetwork& net, std::size_t layer, const Valuation& v,
                      std::size_t target);

/// Decides whether (v, v') belongs to the layer relation of `net` at `layer`.
bool layer_membership(const InnNetwork& net, std::size_t layer, const Valuation& v,
                      const Valuation& next, double tol = 1e-9);

}  // namespace innrange
