// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "innrange/milp_model.hpp"
#include "innrange/network.hpp"

namespace innrange {

struct EncodingOptions {
  /// Emit the four ReLU rows verbatim with lower-endpoint weights in the lower
  /// row and node bounds [0, M]. Only exact when every input is non-negative
  /// or the first weight layer is concrete.
  bool paper_literal = false;
};

/// Per-node big-M: 1.05 * max(|pre lo|, |pre hi|) from interval bounds,
/// floored at 1.0 when both are zero. Index 0 is empty.
std::vector<std::vector<double>> compute_big_m(const InnNetwork& net, const InputBox& box);

/// Mixed-integer encoding of `net` over `box`.
///
/// For every node t of layer i+1 four rows are emitted (tags C_{i+1}_{t}_{1..4}):
///
///   (1) sum_s W^l(s,t) x_s + b^l(t) <= x_t
///   (2) x_t >= 0
///   (3) sum_s W^u(s,t) x_s + b^u(t) + M q_t >= x_t
///   (4) M (1 - q_t) >= x_t
///
/// Hidden and output variables are non-negative so the endpoint choice above is
/// exact for them. Input variables may be negative: a box that is entirely
/// non-positive swaps the endpoints; a box straddling zero that feeds a
/// non-singular weight gets an auxiliary n_0_s >= max(0, -x_0_s) (row S_0_s)
/// and the rows use W^l x - (W^u - W^l) n and W^u x + (W^u - W^l) n.
///
/// `extra_input_rows` may only reference layer-0 node variables.
MilpModel encode(const InnNetwork& net, const InputBox& box,
                 const std::vector<LinearConstraint>& extra_input_rows = {},
                 const EncodingOptions& options = {});

/// Returns `model` with the objective `sense` x_{k,node}. Throws unless the
/// variable is a node of the output layer. Setting twice keeps the last one.
MilpModel set_objective(MilpModel model, const VarRef& node, ObjectiveSense sense);

/// Writes the model in the CPLEX LP text dialect. Throws if no objective is set.
void write_lp(const MilpModel& model, std::ostream& out);
std::string to_lp_string(const MilpModel& model);

/// JSON debug dump of variables, bounds, rows and tags.
std::string model_to_json(const MilpModel& model);

}  // namespace innrange
