// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include "innrange/milp_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "innrange/errors.hpp"

namespace innrange {

std::string var_name(const VarRef& ref) {
  const char prefix = ref.kind == VarKind::continuous ? 'x' : ref.kind == VarKind::binary ? 'q' : 'n';
  return std::string(1, prefix) + "_" + std::to_string(ref.layer) + "_" + std::to_string(ref.node);
}

std::size_t MilpModel::add_variable(const VarRef& ref, double lo, double hi) {
  if (index_.count(ref) != 0) throw Error("duplicate variable " + var_name(ref));
  if (!(lo <= hi)) throw Error("variable " + var_name(ref) + " has empty bounds");
  const std::size_t idx = variables_.size();
  variables_.push_back({ref, lo, hi});
  index_.emplace(ref, idx);
  return idx;
}

void MilpModel::add_constraint(LinearConstraint row, RowOrigin origin) {
  std::set<VarRef> seen;
  for (const auto& term : row.terms) {
    if (!std::isfinite(term.coef)) {
      throw Error("row '" + row.tag + "': non-finite coefficient on " + var_name(term.var));
    }
    if (index_.count(term.var) == 0) {
      throw Error("row '" + row.tag + "' references undeclared variable " + var_name(term.var));
    }
    if (!seen.insert(term.var).second) {
      throw Error("row '" + row.tag + "' repeats variable " + var_name(term.var));
    }
  }
  if (!std::isfinite(row.rhs)) throw Error("row '" + row.tag + "': non-finite right-hand side");
  constraints_.push_back(std::move(row));
  origins_.push_back(origin);
}

std::optional<std::size_t> MilpModel::index_of(const VarRef& ref) const {
  auto it = index_.find(ref);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t MilpModel::require_index(const VarRef& ref) const {
  auto idx = index_of(ref);
  if (!idx) throw Error("unknown variable " + var_name(ref));
  return *idx;
}

std::size_t MilpModel::count_rows(RowOrigin origin) const {
  return static_cast<std::size_t>(std::count(origins_.begin(), origins_.end(), origin));
}

std::size_t MilpModel::binary_count() const {
  return static_cast<std::size_t>(
      std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) { return v.is_binary(); }));
}

void MilpModel::set_variable_bounds(std::size_t index, double lo, double hi) {
  if (!(lo <= hi)) throw Error("variable " + var_name(variables_.at(index).ref) + " has empty bounds");
  variables_.at(index).lo = lo;
  variables_.at(index).hi = hi;
}

}  // namespace innrange
