// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include "innrange/abstraction.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "innrange/errors.hpp"

namespace innrange {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_groups(std::size_t layer, std::size_t layer_size, const LayerGroups& groups) {
  auto violations = validate_groups(layer, layer_size, groups);
  if (!violations.empty()) throw ValidationError("invalid node groups", std::move(violations));
}

std::vector<std::string> merged_names(const std::vector<std::string>& names, const LayerGroups& groups) {
  std::vector<std::string> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    std::string label;
    for (std::size_t s : g) {
      if (!label.empty()) label += '+';
      label += names[s];
    }
    out.push_back(std::move(label));
  }
  return out;
}

Interval bias_hull(const std::vector<Interval>& bias, const Group& group) {
  Interval out{kInf, -kInf};
  for (std::size_t s : group) out = hull(out, bias[s]);
  return out;
}

}  // namespace

std::vector<std::string> validate_groups(std::size_t layer, std::size_t layer_size,
                                         const LayerGroups& groups) {
  std::vector<std::string> out;
  const std::string where = "layer " + std::to_string(layer);
  if (layer_size == 0) out.push_back(where + " has no nodes");
  std::vector<int> owner(layer_size, -1);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) {
      out.push_back(where + " group " + std::to_string(g) + " is empty");
      continue;
    }
    for (std::size_t s : groups[g]) {
      if (s >= layer_size) {
        out.push_back(where + " group " + std::to_string(g) + " references node " +
                      std::to_string(s) + " but the layer has " + std::to_string(layer_size) +
                      " nodes");
        continue;
      }
      if (owner[s] >= 0) {
        out.push_back(where + " node " + std::to_string(s) + " appears in groups " +
                      std::to_string(owner[s]) + " and " + std::to_string(g) +
                      " (groups must be disjoint)");
        continue;
      }
      owner[s] = static_cast<int>(g);
    }
  }
  for (std::size_t s = 0; s < layer_size; ++s) {
    if (owner[s] < 0) out.push_back(where + " node " + std::to_string(s) + " is not covered by any group");
  }
  return out;
}

std::vector<std::string> validate_partition(const InnNetwork& net, const Partition& partition,
                                            bool require_io_identity) {
  std::vector<std::string> out;
  const std::size_t layers = net.layer_sizes.size();
  if (partition.layers.size() != layers) {
    out.push_back("partition has " + std::to_string(partition.layers.size()) +
                  " layers, network has " + std::to_string(layers));
    return out;
  }
  for (std::size_t i = 0; i < layers; ++i) {
    auto v = validate_groups(i, net.layer_sizes[i], partition.layers[i]);
    out.insert(out.end(), v.begin(), v.end());
  }
  if (require_io_identity && layers >= 2) {
    for (std::size_t i : {std::size_t{0}, layers - 1}) {
      for (std::size_t g = 0; g < partition.layers[i].size(); ++g) {
        if (partition.layers[i][g].size() != 1) {
          out.push_back((i == 0 ? std::string("input") : std::string("output")) + " layer " +
                        std::to_string(i) + " group " + std::to_string(g) +
                        " merges nodes; input and output layers must stay singleton");
        }
      }
    }
  }
  return out;
}

Partition identity_partition(const InnNetwork& net) {
  Partition p;
  for (std::size_t size : net.layer_sizes) {
    LayerGroups groups(size);
    for (std::size_t s = 0; s < size; ++s) groups[s] = {s};
    p.layers.push_back(std::move(groups));
  }
  return p;
}

bool has_identity_io(const InnNetwork& net, const Partition& partition) {
  if (partition.layers.size() != net.layer_sizes.size() || partition.layers.empty()) return false;
  auto singletons = [](const LayerGroups& groups) {
    return std::all_of(groups.begin(), groups.end(), [](const Group& g) { return g.size() == 1; });
  };
  return singletons(partition.layers.front()) && singletons(partition.layers.back());
}

InnNetwork abstract_network(const InnNetwork& net, const Partition& partition, AbstractionMode mode) {
  require_valid(net);
  auto violations = validate_partition(net, partition, false);
  if (!violations.empty()) throw ValidationError("invalid partition", std::move(violations));

  const std::size_t k = net.layer_count();
  InnNetwork out;
  for (const auto& groups : partition.layers) out.layer_sizes.push_back(groups.size());

  for (std::size_t i = 0; i < k; ++i) {
    const auto& src = partition.layers[i];
    const auto& dst = partition.layers[i + 1];
    const auto& w = net.weights[i];
    Matrix<Interval> aw(src.size(), dst.size());
    for (std::size_t g = 0; g < src.size(); ++g) {
      const double factor = mode == AbstractionMode::scaled ? static_cast<double>(src[g].size()) : 1.0;
      for (std::size_t h = 0; h < dst.size(); ++h) {
        double lo = kInf;
        double hi = -kInf;
        for (std::size_t s : src[g]) {
          for (std::size_t t : dst[h]) {
            lo = std::min(lo, w(s, t).lo);
            hi = std::max(hi, w(s, t).hi);
          }
        }
        aw(g, h) = {factor * lo, factor * hi};
      }
    }
    out.weights.push_back(std::move(aw));

    const auto& bias = net.biases[i];
    std::vector<Interval> ab;
    ab.reserve(dst.size());
    for (const auto& h : dst) ab.push_back(bias_hull(bias, h));
    out.biases.push_back(std::move(ab));
  }

  if (!net.node_names.empty()) {
    for (std::size_t i = 0; i <= k; ++i) {
      out.node_names.push_back(merged_names(net.node_names[i], partition.layers[i]));
    }
  }
  out.provenance = net.provenance;
  if (mode == AbstractionMode::unscaled_hull) {
    out.provenance = out.provenance.empty() ? kUnsoundAbstractionNote
                                            : out.provenance + "; " + kUnsoundAbstractionNote;
  }
  return out;
}

InnNetwork left_abstraction(const InnNetwork& net, std::size_t layer, const LayerGroups& groups) {
  if (layer >= net.layer_count()) {
    throw ShapeError("left_abstraction: layer " + std::to_string(layer) + " has no outgoing weights");
  }
  require_groups(layer, net.layer_size(layer), groups);
  const auto& w = net.weights.at(layer);
  const std::size_t targets = net.layer_size(layer + 1);

  InnNetwork out;
  out.layer_sizes = {groups.size(), targets};
  Matrix<Interval> aw(groups.size(), targets);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double factor = static_cast<double>(groups[g].size());
    for (std::size_t t = 0; t < targets; ++t) {
      double lo = kInf;
      double hi = -kInf;
      for (std::size_t s : groups[g]) {
        lo = std::min(lo, w(s, t).lo);
        hi = std::max(hi, w(s, t).hi);
      }
      aw(g, t) = {factor * lo, factor * hi};
    }
  }
  out.weights.push_back(std::move(aw));
  out.biases.push_back(net.layer_bias(layer + 1));
  if (!net.node_names.empty()) {
    out.node_names = {merged_names(net.node_names.at(layer), groups), net.node_names.at(layer + 1)};
  }
  return out;
}

InnNetwork right_abstraction(const InnNetwork& single_layer, const LayerGroups& groups) {
  if (single_layer.layer_count() != 1) {
    throw ShapeError("right_abstraction expects a one-layer network, got k = " +
                     std::to_string(single_layer.layer_count()));
  }
  require_groups(1, single_layer.layer_size(1), groups);
  const auto& w = single_layer.weights.at(0);
  const std::size_t sources = single_layer.layer_size(0);

  InnNetwork out;
  out.layer_sizes = {sources, groups.size()};
  Matrix<Interval> aw(sources, groups.size());
  for (std::size_t s = 0; s < sources; ++s) {
    for (std::size_t h = 0; h < groups.size(); ++h) {
      Interval acc{kInf, -kInf};
      for (std::size_t t : groups[h]) acc = hull(acc, w(s, t));
      aw(s, h) = acc;
    }
  }
  out.weights.push_back(std::move(aw));
  std::vector<Interval> ab;
  for (const auto& h : groups) ab.push_back(bias_hull(single_layer.layer_bias(1), h));
  out.biases.push_back(std::move(ab));
  if (!single_layer.node_names.empty()) {
    out.node_names = {single_layer.node_names.at(0), merged_names(single_layer.node_names.at(1), groups)};
  }
  return out;
}

AbstractValuationBox alpha(const Valuation& v, const LayerGroups& groups) {
  require_groups(v.layer, v.values.size(), groups);
  AbstractValuationBox out{v.layer, {}};
  out.values.reserve(groups.size());
  for (const auto& g : groups) {
    Interval iv{kInf, -kInf};
    for (std::size_t s : g) iv = hull(iv, Interval::point(v.values[s]));
    out.values.push_back(iv);
  }
  return out;
}

InputBox abstract_box(const InputBox& box, const LayerGroups& input_groups) {
  require_groups(0, box.size(), input_groups);
  InputBox out;
  out.bounds.reserve(input_groups.size());
  for (const auto& g : input_groups) {
    Interval iv{kInf, -kInf};
    for (std::size_t s : g) iv = hull(iv, box.bounds[s]);
    out.bounds.push_back(iv);
  }
  return out;
}

Partition random_partition(const InnNetwork& net, std::size_t groups_per_hidden_layer, std::uint64_t seed) {
  if (groups_per_hidden_layer == 0) throw Error("random_partition: group count must be positive");
  Partition p = identity_partition(net);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 1; i + 1 < net.layer_sizes.size(); ++i) {
    const std::size_t width = net.layer_sizes[i];
    if (groups_per_hidden_layer > width) {
      throw Error("random_partition: requested " + std::to_string(groups_per_hidden_layer) +
                  " groups but hidden layer " + std::to_string(i) + " has " + std::to_string(width) +
                  " nodes");
    }
    std::vector<std::size_t> order(width);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    LayerGroups groups(groups_per_hidden_layer);
    for (std::size_t pos = 0; pos < width; ++pos) groups[pos % groups_per_hidden_layer].push_back(order[pos]);
    for (auto& g : groups) std::sort(g.begin(), g.end());
    p.layers[i] = std::move(groups);
  }
  return p;
}

Partition round_robin_partition(const InnNetwork& net, std::size_t groups_per_hidden_layer) {
  if (groups_per_hidden_layer == 0) throw Error("round_robin_partition: group count must be positive");
  Partition p = identity_partition(net);
  for (std::size_t i = 1; i + 1 < net.layer_sizes.size(); ++i) {
    const std::size_t width = net.layer_sizes[i];
    if (groups_per_hidden_layer > width) {
      throw Error("round_robin_partition: requested " + std::to_string(groups_per_hidden_layer) +
                  " groups but hidden layer " + std::to_string(i) + " has " + std::to_string(width) +
                  " nodes");
    }
    LayerGroups groups(groups_per_hidden_layer);
    const std::size_t base = width / groups_per_hidden_layer;
    const std::size_t extra = width % groups_per_hidden_layer;
    std::size_t next = 0;
    for (std::size_t g = 0; g < groups_per_hidden_layer; ++g) {
      const std::size_t len = base + (g < extra ? 1 : 0);
      for (std::size_t n = 0; n < len; ++n) groups[g].push_back(next++);
    }
    p.layers[i] = std::move(groups);
  }
  return p;
}

}  // namespace innrange
