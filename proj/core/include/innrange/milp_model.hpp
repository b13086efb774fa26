// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace innrange {

enum class VarKind : unsigned char {
  continuous,  ///< x_{i,j}: value of node j of layer i
  binary,      ///< q_{i,j}: ReLU phase indicator (1 = clamped to zero)
  auxiliary,   ///< n_{i,j}: helper variables (negative part of an input)
};

/// Identity of a model variable.
struct VarRef {
  VarKind kind = VarKind::continuous;
  std::size_t layer = 0;
  std::size_t node = 0;

  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

constexpr VarRef node_var(std::size_t layer, std::size_t node) { return {VarKind::continuous, layer, node}; }
constexpr VarRef phase_var(std::size_t layer, std::size_t node) { return {VarKind::binary, layer, node}; }
constexpr VarRef aux_var(std::size_t layer, std::size_t node) { return {VarKind::auxiliary, layer, node}; }

/// LP-file name: x_i_j, q_i_j or n_i_j.
std::string var_name(const VarRef& ref);

struct Variable {
  VarRef ref;
  double lo = 0.0;
  double hi = 0.0;

  bool is_binary() const { return ref.kind == VarKind::binary; }
};

enum class RowSense : unsigned char { le, ge, eq };

struct Term {
  double coef = 0.0;
  VarRef var;
};

struct LinearConstraint {
  std::vector<Term> terms;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
  std::string tag;
};

enum class ObjectiveSense : unsigned char { minimize, maximize };

struct Objective {
  ObjectiveSense sense = ObjectiveSense::maximize;
  VarRef var;
};

/// Which rows a constraint came from; used for the constraint census.
enum class RowOrigin : unsigned char { relu, input_user, input_sign_split };

/// Mixed-integer linear program over node, phase and auxiliary variables.
class MilpModel {
 public:
  /// Declares a variable; throws on duplicates or lo > hi.
  std::size_t add_variable(const VarRef& ref, double lo, double hi);

  /// Appends a row; every term must reference a declared variable, no
  /// variable may repeat and coefficients must be finite.
  void add_constraint(LinearConstraint row, RowOrigin origin = RowOrigin::relu);

  std::optional<std::size_t> index_of(const VarRef& ref) const;
  std::size_t require_index(const VarRef& ref) const;

  const std::vector<Variable>& variables() const noexcept { return variables_; }
  const std::vector<LinearConstraint>& constraints() const noexcept { return constraints_; }
  const std::vector<RowOrigin>& row_origins() const noexcept { return origins_; }
  std::size_t count_rows(RowOrigin origin) const;
  std::size_t binary_count() const;

  const std::optional<Objective>& objective() const noexcept { return objective_; }
  void set_objective_unchecked(const Objective& objective) { objective_ = objective; }

  void set_variable_bounds(std::size_t index, double lo, double hi);

  /// Per layer (index 0 unused) per node big-M constant.
  std::vector<std::vector<double>> big_m;
  /// Index of the output layer k.
  std::size_t output_layer = 0;
  /// True when the rows follow the literal four-row scheme with [0, M] node bounds.
  bool paper_literal = false;

 private:
  std::vector<Variable> variables_;
  std::map<VarRef, std::size_t> index_;
  std::vector<LinearConstraint> constraints_;
  std::vector<RowOrigin> origins_;
  std::optional<Objective> objective_;
};

}  // namespace innrange
