// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include "innrange/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "innrange/errors.hpp"

namespace innrange {

namespace {

std::string fmt_interval(const Interval& iv) {
  std::ostringstream os;
  os << '[' << iv.lo << ", " << iv.hi << ']';
  return os.str();
}

void check_valuation(const InnNetwork& net, const Valuation& v, std::size_t layer, const char* what) {
  if (v.layer != layer) {
    throw ShapeError(std::string(what) + ": valuation is for layer " + std::to_string(v.layer) +
                     ", expected layer " + std::to_string(layer));
  }
  if (v.values.size() != net.layer_size(layer)) {
    throw ShapeError(std::string(what) + ": valuation has " + std::to_string(v.values.size()) +
                     " entries, layer " + std::to_string(layer) + " has " +
                     std::to_string(net.layer_size(layer)) + " nodes");
  }
}

void check_selection_layer(const InnNetwork& net, std::size_t layer, const WeightSelection& sel) {
  if (layer >= sel.weights.size() || layer >= sel.biases.size()) {
    throw ShapeError("selection does not cover layer " + std::to_string(layer));
  }
  const auto& w = sel.weights[layer];
  if (w.rows() != net.layer_size(layer) || w.cols() != net.layer_size(layer + 1) ||
      sel.biases[layer].size() != net.layer_size(layer + 1)) {
    throw ShapeError("selection shape mismatch at layer " + std::to_string(layer));
  }
}

}  // namespace

const std::vector<Interval>& InnNetwork::layer_bias(std::size_t layer) const {
  if (layer == 0 || layer > biases.size()) {
    throw ShapeError("no bias vector for layer " + std::to_string(layer));
  }
  return biases[layer - 1];
}

InnNetwork InnNetwork::concrete(std::vector<std::size_t> layer_sizes,
                                const std::vector<Matrix<double>>& weights,
                                const std::vector<std::vector<double>>& biases) {
  InnNetwork net;
  net.layer_sizes = std::move(layer_sizes);
  for (const auto& w : weights) {
    Matrix<Interval> m(w.rows(), w.cols());
    for (std::size_t r = 0; r < w.rows(); ++r)
      for (std::size_t c = 0; c < w.cols(); ++c) m(r, c) = Interval::point(w(r, c));
    net.weights.push_back(std::move(m));
  }
  for (const auto& b : biases) {
    std::vector<Interval> iv;
    iv.reserve(b.size());
    for (double x : b) iv.push_back(Interval::point(x));
    net.biases.push_back(std::move(iv));
  }
  return net;
}

std::vector<std::string> validate(const InnNetwork& net) {
  std::vector<std::string> out;
  if (net.layer_sizes.size() < 2) {
    out.push_back("network needs at least an input and an output layer (k >= 1), got " +
                  std::to_string(net.layer_sizes.size()) + " layer sizes");
    return out;
  }
  const std::size_t k = net.layer_count();
  for (std::size_t i = 0; i <= k; ++i) {
    if (net.layer_sizes[i] == 0) out.push_back("layer " + std::to_string(i) + " is empty");
  }
  if (net.weights.size() != k) {
    out.push_back("expected " + std::to_string(k) + " weight matrices, found " +
                  std::to_string(net.weights.size()));
  }
  if (net.biases.size() != k) {
    out.push_back("expected " + std::to_string(k) + " bias vectors, found " +
                  std::to_string(net.biases.size()));
  }
  for (std::size_t i = 0; i < std::min(k, net.weights.size()); ++i) {
    const auto& w = net.weights[i];
    if (w.rows() != net.layer_sizes[i] || w.cols() != net.layer_sizes[i + 1]) {
      out.push_back("weights[" + std::to_string(i) + "] is " + std::to_string(w.rows()) + "x" +
                    std::to_string(w.cols()) + ", expected " + std::to_string(net.layer_sizes[i]) +
                    "x" + std::to_string(net.layer_sizes[i + 1]));
      continue;
    }
    for (std::size_t r = 0; r < w.rows(); ++r) {
      for (std::size_t c = 0; c < w.cols(); ++c) {
        if (!w(r, c).well_formed()) {
          out.push_back("weights layer " + std::to_string(i) + " entry (" + std::to_string(r) +
                        "," + std::to_string(c) + ") is not an interval: " + fmt_interval(w(r, c)));
        }
      }
    }
  }
  for (std::size_t i = 0; i < std::min(k, net.biases.size()); ++i) {
    const auto& b = net.biases[i];
    if (b.size() != net.layer_sizes[i + 1]) {
      out.push_back("bias vector of layer " + std::to_string(i + 1) + " has " +
                    std::to_string(b.size()) + " entries, expected " +
                    std::to_string(net.layer_sizes[i + 1]));
      continue;
    }
    for (std::size_t s = 0; s < b.size(); ++s) {
      if (!b[s].well_formed()) {
        out.push_back("bias layer " + std::to_string(i + 1) + " entry " + std::to_string(s) +
                      " is not an interval: " + fmt_interval(b[s]));
      }
    }
  }
  if (!net.node_names.empty()) {
    if (net.node_names.size() != k + 1) {
      out.push_back("node_names must list every layer (" + std::to_string(k + 1) + "), found " +
                    std::to_string(net.node_names.size()));
    } else {
      for (std::size_t i = 0; i <= k; ++i) {
        const auto& names = net.node_names[i];
        if (names.size() != net.layer_sizes[i]) {
          out.push_back("node_names of layer " + std::to_string(i) + " has " +
                        std::to_string(names.size()) + " labels, expected " +
                        std::to_string(net.layer_sizes[i]));
        }
        std::set<std::string> seen;
        for (const auto& n : names) {
          if (!seen.insert(n).second) {
            out.push_back("duplicate node name '" + n + "' in layer " + std::to_string(i));
          }
        }
      }
    }
  }
  return out;
}

void require_valid(const InnNetwork& net) {
  auto violations = validate(net);
  if (!violations.empty()) throw ValidationError("invalid network", std::move(violations));
}

bool is_concrete(const InnNetwork& net) {
  for (const auto& w : net.weights)
    for (const auto& iv : w.data())
      if (!iv.singular()) return false;
  for (const auto& b : net.biases)
    for (const auto& iv : b)
      if (!iv.singular()) return false;
  return true;
}

Valuation post_layer(const InnNetwork& net, std::size_t layer, const Valuation& v,
                     const WeightSelection& sel) {
  if (layer >= net.layer_count()) {
    throw ShapeError("post_layer: layer " + std::to_string(layer) + " has no outgoing weights");
  }
  check_valuation(net, v, layer, "post_layer");
  check_selection_layer(net, layer, sel);
  const auto& w = sel.weights[layer];
  const auto& b = sel.biases[layer];
  Valuation out{layer + 1, std::vector<double>(w.cols())};
  for (std::size_t t = 0; t < w.cols(); ++t) {
    double sum = b[t];
    for (std::size_t s = 0; s < w.rows(); ++s) sum += w(s, t) * v.values[s];
    out.values[t] = std::max(0.0, sum);
  }
  return out;
}

ExecutionTrace eval_trace(const InnNetwork& net, const Valuation& input, const WeightSelection& sel) {
  check_valuation(net, input, 0, "eval");
  ExecutionTrace trace;
  trace.pre_activation.push_back(input.values);
  trace.post_activation.push_back(input.values);
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    check_selection_layer(net, i, sel);
    const auto& w = sel.weights[i];
    const auto& b = sel.biases[i];
    const auto& prev = trace.post_activation.back();
    std::vector<double> pre(w.cols());
    std::vector<double> post(w.cols());
    for (std::size_t t = 0; t < w.cols(); ++t) {
      double sum = b[t];
      for (std::size_t s = 0; s < w.rows(); ++s) sum += w(s, t) * prev[s];
      pre[t] = sum;
      post[t] = std::max(0.0, sum);
    }
    trace.pre_activation.push_back(std::move(pre));
    trace.post_activation.push_back(std::move(post));
  }
  return trace;
}

Valuation eval(const InnNetwork& net, const Valuation& input, const WeightSelection& sel) {
  Valuation v = input;
  check_valuation(net, v, 0, "eval");
  for (std::size_t i = 0; i < net.layer_count(); ++i) v = post_layer(net, i, v, sel);
  return v;
}

WeightSelection sample_selection(const InnNetwork& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](const Interval& iv) {
    // One draw per entry even for singular intervals keeps the stream layout shape-only.
    const double u = unit(rng);
    if (iv.singular()) return iv.lo;
    return std::clamp(iv.lo + (iv.hi - iv.lo) * u, iv.lo, iv.hi);
  };
  WeightSelection sel;
  for (const auto& w : net.weights) {
    Matrix<double> m(w.rows(), w.cols());
    for (std::size_t r = 0; r < w.rows(); ++r)
      for (std::size_t c = 0; c < w.cols(); ++c) m(r, c) = draw(w(r, c));
    sel.weights.push_back(std::move(m));
  }
  for (const auto& b : net.biases) {
    std::vector<double> v(b.size());
    for (std::size_t s = 0; s < b.size(); ++s) v[s] = draw(b[s]);
    sel.biases.push_back(std::move(v));
  }
  return sel;
}

WeightSelection endpoint_selection(const InnNetwork& net, Endpoint endpoint) {
  auto pick = [endpoint](const Interval& iv) { return endpoint == Endpoint::lower ? iv.lo : iv.hi; };
  WeightSelection sel;
  for (const auto& w : net.weights) {
    Matrix<double> m(w.rows(), w.cols());
    for (std::size_t r = 0; r < w.rows(); ++r)
      for (std::size_t c = 0; c < w.cols(); ++c) m(r, c) = pick(w(r, c));
    sel.weights.push_back(std::move(m));
  }
  for (const auto& b : net.biases) {
    std::vector<double> v(b.size());
    for (std::size_t s = 0; s < b.size(); ++s) v[s] = pick(b[s]);
    sel.biases.push_back(std::move(v));
  }
  return sel;
}

LayerBounds interval_bounds(const InnNetwork& net, const InputBox& box) {
  if (box.size() != net.input_size()) {
    throw ShapeError("input box has " + std::to_string(box.size()) + " entries, network has " +
                     std::to_string(net.input_size()) + " inputs");
  }
  LayerBounds out;
  out.pre_activation.push_back(box.bounds);
  out.post_activation.push_back(box.bounds);
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    const auto& w = net.weights.at(i);
    const auto& b = net.layer_bias(i + 1);
    const auto& prev = out.post_activation.back();
    std::vector<Interval> pre(w.cols());
    std::vector<Interval> post(w.cols());
    for (std::size_t t = 0; t < w.cols(); ++t) {
      Interval sum = b.at(t);
      for (std::size_t s = 0; s < w.rows(); ++s) sum = sum + w(s, t) * prev[s];
      pre[t] = sum;
      post[t] = relu(sum);
    }
    out.pre_activation.push_back(std::move(pre));
    out.post_activation.push_back(std::move(post));
  }
  return out;
}

Interval affine_range(const InnNetwork& net, std::size_t layer, const Valuation& v, std::size_t target) {
  check_valuation(net, v, layer, "affine_range");
  const auto& w = net.weights.at(layer);
  Interval range = net.layer_bias(layer + 1).at(target);
  for (std::size_t s = 0; s < w.rows(); ++s) {
    const double x = v.values[s];
    const Interval& iv = w(s, target);
    if (x > 0) {
      range.lo += iv.lo * x;
      range.hi += iv.hi * x;
    } else if (x < 0) {
      range.lo += iv.hi * x;
      range.hi += iv.lo * x;
    }
  }
  return range;
}

bool layer_membership(const InnNetwork& net, std::size_t layer, const Valuation& v,
                      const Valuation& next, double tol) {
  if (layer >= net.layer_count()) {
    throw ShapeError("layer_membership: layer " + std::to_string(layer) + " has no outgoing weights");
  }
  check_valuation(net, v, layer, "layer_membership");
  check_valuation(net, next, layer + 1, "layer_membership");
  for (std::size_t t = 0; t < next.values.size(); ++t) {
    const double y = next.values[t];
    if (y < -tol) return false;
    const Interval range = affine_range(net, layer, v, t);
    if (y > tol) {
      if (!range.contains(y, tol)) return false;
    } else if (range.lo > tol) {
      return false;
    }
  }
  return true;
}

}  // namespace innrange
