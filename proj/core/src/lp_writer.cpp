// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <ostream>
#include <sstream>

#include "innrange/encode.hpp"
#include "innrange/errors.hpp"
#include "innrange/number_format.hpp"
#include "json.hpp"

namespace innrange {

namespace {

const char* sense_token(RowSense sense) {
  switch (sense) {
    case RowSense::le:
      return "<=";
    case RowSense::ge:
      return ">=";
    case RowSense::eq:
      return "=";
  }
  return "=";
}

void write_terms(std::ostream& out, const std::vector<Term>& terms) {
  bool first = true;
  for (const auto& term : terms) {
    const bool negative = std::signbit(term.coef);
    const double mag = std::fabs(term.coef);
    if (first) {
      out << (negative ? "- " : "") << format_real(mag) << ' ' << var_name(term.var);
      first = false;
    } else {
      out << (negative ? " - " : " + ") << format_real(mag) << ' ' << var_name(term.var);
    }
  }
  if (first) out << "0 " << "x_0_0";
}

}  // namespace

void write_lp(const MilpModel& model, std::ostream& out) {
  if (!model.objective()) throw Error("write_lp: the model has no objective");
  const Objective& obj = *model.objective();

  out << "\\ innrange MILP export" << (model.paper_literal ? " (paper-literal rows)" : "") << '\n';
  out << (obj.sense == ObjectiveSense::maximize ? "Maximize" : "Minimize") << '\n';
  out << " obj: " << var_name(obj.var) << '\n';

  out << "Subject To\n";
  for (const auto& row : model.constraints()) {
    out << ' ' << row.tag << ": ";
    write_terms(out, row.terms);
    out << ' ' << sense_token(row.sense) << ' ' << format_real(row.rhs + 0.0) << '\n';
  }

  out << "Bounds\n";
  for (const auto& v : model.variables()) {
    if (v.is_binary()) continue;
    const std::string name = var_name(v.ref);
    if (v.lo == v.hi) {
      out << ' ' << name << " = " << format_real(v.lo) << '\n';
    } else if (std::isinf(v.lo) && std::isinf(v.hi)) {
      out << ' ' << name << " free\n";
    } else {
      out << ' ' << format_real(v.lo) << " <= " << name << " <= " << format_real(v.hi) << '\n';
    }
  }

  out << "Binary\n";
  for (const auto& v : model.variables()) {
    if (v.is_binary()) out << ' ' << var_name(v.ref) << '\n';
  }
  out << "End\n";
}

std::string to_lp_string(const MilpModel& model) {
  std::ostringstream os;
  write_lp(model, os);
  return os.str();
}

std::string model_to_json(const MilpModel& model) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["paper_literal"] = model.paper_literal;
  doc["output_layer"] = model.output_layer;
  ordered_json vars = ordered_json::array();
  for (const auto& v : model.variables()) {
    vars.push_back({{"name", var_name(v.ref)}, {"lo", v.lo}, {"hi", v.hi}, {"binary", v.is_binary()}});
  }
  doc["variables"] = std::move(vars);
  ordered_json rows = ordered_json::array();
  for (const auto& row : model.constraints()) {
    ordered_json terms = ordered_json::array();
    for (const auto& t : row.terms) terms.push_back({{"var", var_name(t.var)}, {"coef", t.coef}});
    rows.push_back({{"tag", row.tag}, {"sense", sense_token(row.sense)}, {"rhs", row.rhs}, {"terms", std::move(terms)}});
  }
  doc["constraints"] = std::move(rows);
  ordered_json big_m = ordered_json::array();
  for (const auto& layer : model.big_m) big_m.push_back(layer);
  doc["big_m"] = std::move(big_m);
  if (model.objective()) {
    doc["objective"] = {
        {"sense", model.objective()->sense == ObjectiveSense::maximize ? "max" : "min"},
        {"var", var_name(model.objective()->var)}};
  } else {
    doc["objective"] = nullptr;
  }
  return doc.dump(2);
}

}  // namespace innrange
