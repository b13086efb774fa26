// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "innrange/interval.hpp"
#include "innrange/network.hpp"

namespace innrange {

/// Node indices of one layer that are merged into a single abstract node.
using Group = std::vector<std::size_t>;
/// Grouping of one layer; groups are disjoint and cover the layer.
using LayerGroups = std::vector<Group>;

/// One grouping per layer, 0 through k.
struct Partition {
  std::vector<LayerGroups> layers;

  friend bool operator==(const Partition&, const Partition&) = default;
};

enum class AbstractionMode {
  /// Abstract weight = |source group| * hull of member weights. Sound.
  scaled,
  /// Hull only, without the source-group factor. Unsound; kept to
  /// demonstrate why the factor is needed.
  unscaled_hull,
};

inline constexpr const char* kUnsoundAbstractionNote =
    "UNSOUND: unscaled hull abstraction (no source-group factor)";

/// Abstract valuation box: one interval [min, max] of the members per group.
struct AbstractValuationBox {
  std::size_t layer = 0;
  std::vector<Interval> values;
};

/// Disjointness, coverage and non-emptiness of `groups` over a layer of `layer_size` nodes.
std::vector<std::string> validate_groups(std::size_t layer, std::size_t layer_size,
                                         const LayerGroups& groups);

/// Checks every layer of `partition`; with `require_io_identity` the input
/// and output layers must be all singletons.
std::vector<std::string> validate_partition(const InnNetwork& net, const Partition& partition,
                                            bool require_io_identity);

/// All-singleton partition in node order.
Partition identity_partition(const InnNetwork& net);

/// True iff every group of layers 0 and k is a singleton.
bool has_identity_io(const InnNetwork& net, const Partition& partition);

/// The abstract network obtained by merging nodes according to `partition`.
///
/// Edge (g, h) gets [|g| * min W^l(s, t), |g| * max W^u(s, t)] over s in g and
/// t in h; the bias of h is the hull of its members' biases. Throws
/// ValidationError for an invalid partition.
InnNetwork abstract_network(const InnNetwork& net, const Partition& partition,
                            AbstractionMode mode = AbstractionMode::scaled);

/// Merges the source nodes of weight layer `layer` (the left step): returns a
/// one-layer network from `groups` to layer+1 with the scaled hull as weights
/// and the original biases of layer+1.
InnNetwork left_abstraction(const InnNetwork& net, std::size_t layer, const LayerGroups& groups);

/// Merges the target nodes of a one-layer network (the right step): plain
/// hull of the weights into each group, hull of the member biases.
InnNetwork right_abstraction(const InnNetwork& single_layer, const LayerGroups& groups);

/// Box of abstract valuations compatible with the concrete valuation `v`.
AbstractValuationBox alpha(const Valuation& v, const LayerGroups& groups);

/// Input box of the abstract network: hull of the member intervals per input group.
InputBox abstract_box(const InputBox& box, const LayerGroups& input_groups);

/// Seeded, balanced random grouping of every hidden layer into `groups_per_hidden_layer`
/// groups; input and output layers stay singleton. Throws if a hidden layer is narrower
/// than the requested count.
Partition random_partition(const InnNetwork& net, std::size_t groups_per_hidden_layer,
                           std::uint64_t seed);

/// Contiguous blocks of near-equal size per hidden layer; input and output stay singleton.
Partition round_robin_partition(const InnNetwork& net, std::size_t groups_per_hidden_layer);

}  // namespace innrange
