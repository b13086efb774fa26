// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include "innrange/encode.hpp"

#include <algorithm>
#include <cmath>

#include "innrange/errors.hpp"

namespace innrange {

namespace {

constexpr double kBigMInflation = 1.05;

std::string row_tag(std::size_t layer, std::size_t node, int which) {
  return "C_" + std::to_string(layer) + "_" + std::to_string(node) + "_" + std::to_string(which);
}

enum class InputSign { non_negative, non_positive, mixed };

InputSign classify(const Interval& iv) {
  if (iv.lo >= 0.0) return InputSign::non_negative;
  if (iv.hi <= 0.0) return InputSign::non_positive;
  return InputSign::mixed;
}

}  // namespace

std::vector<std::vector<double>> compute_big_m(const InnNetwork& net, const InputBox& box) {
  const LayerBounds bounds = interval_bounds(net, box);
  std::vector<std::vector<double>> m(net.layer_count() + 1);
  for (std::size_t i = 1; i <= net.layer_count(); ++i) {
    for (const Interval& pre : bounds.pre_activation[i]) {
      const double mag = std::max(std::fabs(pre.lo), std::fabs(pre.hi));
      m[i].push_back(mag == 0.0 ? 1.0 : kBigMInflation * mag);
    }
  }
  return m;
}

MilpModel encode(const InnNetwork& net, const InputBox& box,
                 const std::vector<LinearConstraint>& extra_input_rows, const EncodingOptions& options) {
  require_valid(net);
  if (box.size() != net.input_size()) {
    throw ShapeError("input box has " + std::to_string(box.size()) + " entries, network has " +
                     std::to_string(net.input_size()) + " inputs");
  }
  for (std::size_t s = 0; s < box.size(); ++s) {
    if (!box.bounds[s].well_formed()) throw ShapeError("input box entry " + std::to_string(s) + " is empty");
  }

  const std::size_t k = net.layer_count();
  const LayerBounds bounds = interval_bounds(net, box);
  MilpModel model;
  model.output_layer = k;
  model.paper_literal = options.paper_literal;
  model.big_m = compute_big_m(net, box);

  for (std::size_t s = 0; s < net.input_size(); ++s) {
    model.add_variable(node_var(0, s), box.bounds[s].lo, box.bounds[s].hi);
  }

  // Inputs whose sign is not fixed by the box and that feed a non-singular weight.
  std::vector<InputSign> sign(net.input_size(), InputSign::non_negative);
  std::vector<bool> split(net.input_size(), false);
  if (!options.paper_literal) {
    const auto& w0 = net.weights[0];
    for (std::size_t s = 0; s < net.input_size(); ++s) {
      sign[s] = classify(box.bounds[s]);
      if (sign[s] != InputSign::mixed) continue;
      for (std::size_t t = 0; t < w0.cols(); ++t) {
        if (!w0(s, t).singular()) {
          split[s] = true;
          break;
        }
      }
      if (split[s]) model.add_variable(aux_var(0, s), 0.0, -box.bounds[s].lo);
    }
  }

  for (std::size_t i = 1; i <= k; ++i) {
    for (std::size_t t = 0; t < net.layer_size(i); ++t) {
      const double hi = options.paper_literal ? model.big_m[i][t]
                                              : std::max(0.0, bounds.pre_activation[i][t].hi);
      model.add_variable(node_var(i, t), 0.0, hi);
      model.add_variable(phase_var(i, t), 0.0, 1.0);
    }
  }

  for (std::size_t s = 0; s < net.input_size(); ++s) {
    if (!split[s]) continue;
    model.add_constraint({{{1.0, node_var(0, s)}, {1.0, aux_var(0, s)}},
                          RowSense::ge,
                          0.0,
                          "S_0_" + std::to_string(s)},
                         RowOrigin::input_sign_split);
  }

  for (std::size_t i = 0; i < k; ++i) {
    const auto& w = net.weights[i];
    const auto& bias = net.biases[i];
    for (std::size_t t = 0; t < w.cols(); ++t) {
      const double big_m = model.big_m[i + 1][t];
      const VarRef xt = node_var(i + 1, t);
      const VarRef qt = phase_var(i + 1, t);

      LinearConstraint lower{{}, RowSense::le, -bias[t].lo, row_tag(i + 1, t, 1)};
      LinearConstraint upper{{}, RowSense::ge, -bias[t].hi, row_tag(i + 1, t, 3)};
      std::vector<Term> lower_aux;
      std::vector<Term> upper_aux;
      for (std::size_t s = 0; s < w.rows(); ++s) {
        const Interval& iv = w(s, t);
        const VarRef xs = node_var(i, s);
        if (i == 0 && sign[s] == InputSign::non_positive) {
          lower.terms.push_back({iv.hi, xs});
          upper.terms.push_back({iv.lo, xs});
        } else {
          lower.terms.push_back({iv.lo, xs});
          upper.terms.push_back({iv.hi, xs});
        }
        if (i == 0 && split[s] && !iv.singular()) {
          lower_aux.push_back({-(iv.hi - iv.lo), aux_var(0, s)});
          upper_aux.push_back({iv.hi - iv.lo, aux_var(0, s)});
        }
      }
      lower.terms.insert(lower.terms.end(), lower_aux.begin(), lower_aux.end());
      upper.terms.insert(upper.terms.end(), upper_aux.begin(), upper_aux.end());
      lower.terms.push_back({-1.0, xt});
      upper.terms.push_back({big_m, qt});
      upper.terms.push_back({-1.0, xt});

      model.add_constraint(std::move(lower));
      model.add_constraint({{{1.0, xt}}, RowSense::ge, 0.0, row_tag(i + 1, t, 2)});
      model.add_constraint(std::move(upper));
      model.add_constraint({{{1.0, xt}, {big_m, qt}}, RowSense::le, big_m, row_tag(i + 1, t, 4)});
    }
  }

  std::size_t user_row = 0;
  for (LinearConstraint row : extra_input_rows) {
    for (const auto& term : row.terms) {
      if (term.var.kind != VarKind::continuous || term.var.layer != 0 || term.var.node >= net.input_size()) {
        throw Error("input constraint '" + row.tag + "' references " + var_name(term.var) +
                    ", only input node variables x_0_j are allowed");
      }
    }
    if (row.tag.empty()) row.tag = "I_" + std::to_string(user_row);
    ++user_row;
    model.add_constraint(std::move(row), RowOrigin::input_user);
  }
  return model;
}

MilpModel set_objective(MilpModel model, const VarRef& node, ObjectiveSense sense) {
  if (node.kind != VarKind::continuous || node.layer != model.output_layer || !model.index_of(node)) {
    throw Error("objective must be an output node variable x_" + std::to_string(model.output_layer) +
                "_j, got " + var_name(node));
  }
  model.set_objective_unchecked({sense, node});
  return model;
}

}  // namespace innrange
