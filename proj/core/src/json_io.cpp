// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <initializer_list>
#include <sstream>

#include "innrange/errors.hpp"
#include "innrange/io.hpp"
#include "innrange/number_format.hpp"
#include "json.hpp"

namespace innrange {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kVersion = 1;

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw ParseError("invalid JSON: " + msg, line, column);
  }
}

std::string at(const std::string& path, std::size_t index) { return path + '[' + std::to_string(index) + ']'; }
std::string at(const std::string& path, const char* key) { return path + '.' + key; }

const char* type_name(const json& j) { return j.type_name(); }

void require_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ParseError(std::string("expected an object, found ") + type_name(j), path);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ParseError("unknown field '" + key + "'", path);
  }
}

const json& require_field(const json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field '") + key + "'", path);
  return *it;
}

const json& require_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(std::string("expected an array, found ") + type_name(j), path);
  return j;
}

double real(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(std::string("expected a number, found ") + type_name(j), path);
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError("number is not finite", path);
  return v;
}

std::size_t index(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::size_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::size_t>(j.get<std::int64_t>());
  throw ParseError("expected a non-negative integer", path);
}

Interval interval(const json& j, const std::string& path, bool bare_ok, std::vector<std::string>& violations) {
  if (bare_ok && j.is_number()) return Interval::point(real(j, path));
  if (!j.is_array() || j.size() != 2) {
    throw ParseError(bare_ok ? "expected [lo, hi] or a number" : "expected [lo, hi]", path);
  }
  Interval iv{real(j[0], at(path, std::size_t{0})), real(j[1], at(path, std::size_t{1}))};
  if (iv.lo > iv.hi) {
    violations.push_back(path + ": interval [" + format_real(iv.lo) + ", " + format_real(iv.hi) +
                         "] has lower bound above upper bound");
  }
  return iv;
}

void check_header(const json& doc, const char* format) {
  if (auto it = doc.find("format"); it != doc.end()) {
    if (!it->is_string() || it->get<std::string>() != format) {
      throw ParseError(std::string("expected format \"") + format + "\"", "$.format");
    }
  }
  if (auto it = doc.find("version"); it != doc.end()) {
    if (index(*it, "$.version") != static_cast<std::size_t>(kVersion)) {
      throw ParseError("unsupported version", "$.version");
    }
  }
}

ordered_json interval_json(const Interval& iv, bool bare_singular) {
  if (bare_singular && iv.lo == iv.hi && std::signbit(iv.lo) == std::signbit(iv.hi)) return iv.lo;
  return ordered_json::array({iv.lo, iv.hi});
}

// Non-finite values have no JSON spelling; they come out as null next to a status.
ordered_json real_json(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

const char* sense_string(RowSense sense) {
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

ordered_json stats_json(const SolveStats& stats) {
  return {{"nodes", stats.nodes}, {"lp_iterations", stats.lp_iterations}};
}

ordered_json stat_json(const Stat& s) { return {{"avg", real_json(s.avg)}, {"min", real_json(s.min)}, {"max", real_json(s.max)}}; }

ordered_json timings_json(const PhaseTimings& t) {
  return {{"abstraction", t.abstraction}, {"encoding", t.encoding}, {"solving", t.solving}};
}

struct RangeParts {
  ordered_json result;
  ordered_json metadata;
  ordered_json timings;
};

RangeParts range_parts(const RangeResult& r) {
  RangeParts parts;
  ordered_json outputs = ordered_json::array();
  ordered_json per_bound = ordered_json::array();
  for (const auto& o : r.outputs) {
    outputs.push_back({{"node", o.node},
                       {"lower", real_json(o.lower.value)},
                       {"upper", real_json(o.upper.value)},
                       {"lower_exact", o.lower.exact},
                       {"upper_exact", o.upper.exact},
                       {"lower_status", to_string(o.lower.status)},
                       {"upper_status", to_string(o.upper.status)},
                       {"lower_solver", stats_json(o.lower.stats)},
                       {"upper_solver", stats_json(o.upper.stats)}});
    per_bound.push_back(
        {{"node", o.node}, {"lower", o.lower.stats.wall_seconds}, {"upper", o.upper.stats.wall_seconds}});
  }
  parts.result = {{"feasible", r.feasible()}, {"exact", r.exact()}, {"outputs", std::move(outputs)}};

  parts.metadata = {{"abstraction_used", r.abstraction_used},
                    {"unsound_abstraction", r.unsound_abstraction},
                    {"paper_literal_encoding", r.paper_literal_encoding},
                    {"analyzed_layer_sizes", r.analyzed_layer_sizes}};
  if (r.partition_seed) parts.metadata["partition_seed"] = *r.partition_seed;
  if (r.unsound_abstraction) parts.metadata["warning"] = kUnsoundAbstractionNote;

  parts.timings = timings_json(r.timings);
  parts.timings["per_bound_solve"] = std::move(per_bound);
  return parts;
}

}  // namespace

// ---------------------------------------------------------------------------

InnNetwork parse_network_json(std::string_view text) {
  const json doc = parse_document(text);
  require_object(doc, "$", {"format", "version", "layers", "weights", "biases", "node_names", "provenance"});
  check_header(doc, "innrange-network");

  InnNetwork net;
  std::vector<std::string> violations;

  const json& layers = require_array(require_field(doc, "layers", "$"), "$.layers");
  for (std::size_t i = 0; i < layers.size(); ++i) net.layer_sizes.push_back(index(layers[i], at("$.layers", i)));
  if (net.layer_sizes.size() < 2) throw ParseError("at least two layer sizes are required", "$.layers");
  const std::size_t k = net.layer_sizes.size() - 1;

  const json& weights = require_array(require_field(doc, "weights", "$"), "$.weights");
  if (weights.size() != k) {
    throw ParseError("expected " + std::to_string(k) + " weight matrices, found " + std::to_string(weights.size()),
                     "$.weights");
  }
  for (std::size_t i = 0; i < k; ++i) {
    const std::string path = at("$.weights", i);
    const json& rows = require_array(weights[i], path);
    const std::size_t src = net.layer_sizes[i], dst = net.layer_sizes[i + 1];
    if (rows.size() != src) {
      throw ParseError("expected " + std::to_string(src) + " rows, found " + std::to_string(rows.size()), path);
    }
    Matrix<Interval> w(src, dst);
    for (std::size_t s = 0; s < src; ++s) {
      const std::string row_path = at(path, s);
      const json& row = require_array(rows[s], row_path);
      if (row.size() != dst) {
        throw ParseError("expected " + std::to_string(dst) + " entries, found " + std::to_string(row.size()),
                         row_path);
      }
      for (std::size_t t = 0; t < dst; ++t) w(s, t) = interval(row[t], at(row_path, t), true, violations);
    }
    net.weights.push_back(std::move(w));
  }

  const json& biases = require_array(require_field(doc, "biases", "$"), "$.biases");
  if (biases.size() != k) {
    throw ParseError("expected " + std::to_string(k) + " bias vectors, found " + std::to_string(biases.size()),
                     "$.biases");
  }
  for (std::size_t i = 0; i < k; ++i) {
    const std::string path = at("$.biases", i);
    const json& entries = require_array(biases[i], path);
    const std::size_t dst = net.layer_sizes[i + 1];
    if (entries.size() != dst) {
      throw ParseError("expected " + std::to_string(dst) + " entries, found " + std::to_string(entries.size()), path);
    }
    std::vector<Interval> b;
    for (std::size_t t = 0; t < dst; ++t) b.push_back(interval(entries[t], at(path, t), true, violations));
    net.biases.push_back(std::move(b));
  }

  if (auto it = doc.find("node_names"); it != doc.end()) {
    const json& names = require_array(*it, "$.node_names");
    if (names.size() != net.layer_sizes.size()) {
      throw ParseError("expected one name list per layer", "$.node_names");
    }
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::string path = at("$.node_names", i);
      const json& layer = require_array(names[i], path);
      if (layer.size() != net.layer_sizes[i]) {
        throw ParseError("expected " + std::to_string(net.layer_sizes[i]) + " names", path);
      }
      std::vector<std::string> out;
      for (std::size_t j = 0; j < layer.size(); ++j) {
        if (!layer[j].is_string()) throw ParseError("expected a string", at(path, j));
        out.push_back(layer[j].get<std::string>());
      }
      net.node_names.push_back(std::move(out));
    }
  }
  if (auto it = doc.find("provenance"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("expected a string", "$.provenance");
    net.provenance = it->get<std::string>();
  }

  if (violations.empty()) violations = validate(net);
  if (!violations.empty()) throw ValidationError("invalid network document", std::move(violations));
  return net;
}

std::string write_network_json(const InnNetwork& net) {
  require_valid(net);
  ordered_json doc;
  doc["format"] = "innrange-network";
  doc["version"] = kVersion;
  doc["layers"] = net.layer_sizes;
  ordered_json weights = ordered_json::array();
  for (const auto& w : net.weights) {
    ordered_json rows = ordered_json::array();
    for (std::size_t s = 0; s < w.rows(); ++s) {
      ordered_json row = ordered_json::array();
      for (std::size_t t = 0; t < w.cols(); ++t) row.push_back(interval_json(w(s, t), true));
      rows.push_back(std::move(row));
    }
    weights.push_back(std::move(rows));
  }
  doc["weights"] = std::move(weights);
  ordered_json biases = ordered_json::array();
  for (const auto& b : net.biases) {
    ordered_json entries = ordered_json::array();
    for (const auto& iv : b) entries.push_back(interval_json(iv, true));
    biases.push_back(std::move(entries));
  }
  doc["biases"] = std::move(biases);
  if (!net.node_names.empty()) doc["node_names"] = net.node_names;
  if (!net.provenance.empty()) doc["provenance"] = net.provenance;
  return doc.dump(1) + '\n';
}

Partition parse_partition_json(std::string_view text) {
  const json doc = parse_document(text);
  require_object(doc, "$", {"format", "version", "layers"});
  check_header(doc, "innrange-partition");
  const json& layers = require_array(require_field(doc, "layers", "$"), "$.layers");
  Partition p;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const std::string path = at("$.layers", i);
    const json& groups = require_array(layers[i], path);
    LayerGroups lg;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const std::string group_path = at(path, g);
      const json& members = require_array(groups[g], group_path);
      Group group;
      for (std::size_t m = 0; m < members.size(); ++m) group.push_back(index(members[m], at(group_path, m)));
      lg.push_back(std::move(group));
    }
    p.layers.push_back(std::move(lg));
  }
  return p;
}

std::string write_partition_json(const Partition& partition) {
  ordered_json doc;
  doc["format"] = "innrange-partition";
  doc["version"] = kVersion;
  ordered_json layers = ordered_json::array();
  for (const auto& lg : partition.layers) {
    ordered_json groups = ordered_json::array();
    for (const auto& g : lg) groups.push_back(g);
    layers.push_back(std::move(groups));
  }
  doc["layers"] = std::move(layers);
  return doc.dump() + '\n';
}

BoxDocument parse_box_json(std::string_view text) {
  const json doc = parse_document(text);
  require_object(doc, "$", {"format", "version", "bounds", "constraints"});
  check_header(doc, "innrange-box");
  BoxDocument out;
  std::vector<std::string> violations;
  const json& bounds = require_array(require_field(doc, "bounds", "$"), "$.bounds");
  if (bounds.empty()) throw ParseError("the box needs at least one interval", "$.bounds");
  for (std::size_t j = 0; j < bounds.size(); ++j) {
    out.box.bounds.push_back(interval(bounds[j], at("$.bounds", j), false, violations));
  }
  if (!violations.empty()) throw ValidationError("invalid input box", std::move(violations));

  if (auto it = doc.find("constraints"); it != doc.end()) {
    const json& rows = require_array(*it, "$.constraints");
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const std::string path = at("$.constraints", r);
      require_object(rows[r], path, {"tag", "terms", "sense", "rhs"});
      LinearConstraint row;
      if (auto tag = rows[r].find("tag"); tag != rows[r].end()) {
        if (!tag->is_string()) throw ParseError("expected a string", at(path, "tag"));
        row.tag = tag->get<std::string>();
      }
      const json& sense = require_field(rows[r], "sense", path);
      const std::string s = sense.is_string() ? sense.get<std::string>() : "";
      if (s == "<=") {
        row.sense = RowSense::le;
      } else if (s == ">=") {
        row.sense = RowSense::ge;
      } else if (s == "=") {
        row.sense = RowSense::eq;
      } else {
        throw ParseError("sense must be \"<=\", \">=\" or \"=\"", at(path, "sense"));
      }
      row.rhs = real(require_field(rows[r], "rhs", path), at(path, "rhs"));
      const std::string terms_path = at(path, "terms");
      const json& terms = require_array(require_field(rows[r], "terms", path), terms_path);
      for (std::size_t t = 0; t < terms.size(); ++t) {
        const std::string term_path = at(terms_path, t);
        require_object(terms[t], term_path, {"input", "coef"});
        const std::size_t input = index(require_field(terms[t], "input", term_path), at(term_path, "input"));
        if (input >= out.box.size()) {
          throw ParseError("input index " + std::to_string(input) + " outside the box", at(term_path, "input"));
        }
        row.terms.push_back({real(require_field(terms[t], "coef", term_path), at(term_path, "coef")),
                             node_var(0, input)});
      }
      out.constraints.push_back(std::move(row));
    }
  }
  return out;
}

std::string write_box_json(const BoxDocument& doc) {
  ordered_json out;
  out["format"] = "innrange-box";
  out["version"] = kVersion;
  ordered_json bounds = ordered_json::array();
  for (const auto& iv : doc.box.bounds) bounds.push_back(interval_json(iv, false));
  out["bounds"] = std::move(bounds);
  if (!doc.constraints.empty()) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : doc.constraints) {
      ordered_json r;
      if (!row.tag.empty()) r["tag"] = row.tag;
      ordered_json terms = ordered_json::array();
      for (const auto& t : row.terms) {
        if (t.var.kind != VarKind::continuous || t.var.layer != 0) {
          throw Error("write_box_json: constraint '" + row.tag + "' references " + var_name(t.var));
        }
        terms.push_back({{"input", t.var.node}, {"coef", t.coef}});
      }
      r["terms"] = std::move(terms);
      r["sense"] = sense_string(row.sense);
      r["rhs"] = row.rhs;
      rows.push_back(std::move(r));
    }
    out["constraints"] = std::move(rows);
  }
  return out.dump(1) + '\n';
}

std::string write_range_json(const RangeResult& result) {
  RangeParts parts = range_parts(result);
  ordered_json doc;
  doc["format"] = "innrange-range";
  doc["version"] = kVersion;
  doc["result"] = std::move(parts.result);
  doc["metadata"] = std::move(parts.metadata);
  doc["timings"] = std::move(parts.timings);
  return doc.dump(2) + '\n';
}

std::string write_soundness_json(const SoundnessReport& report) {
  RangeParts parts = range_parts(report.range);
  ordered_json violations = ordered_json::array();
  for (const auto& v : report.violations) {
    violations.push_back({{"input", v.input},
                          {"selection_seed", v.selection_seed},
                          {"output_node", v.output_node},
                          {"value", v.value},
                          {"bound", v.bound},
                          {"bound_value", real_json(v.bound_value)}});
  }
  ordered_json doc;
  doc["format"] = "innrange-soundness";
  doc["version"] = kVersion;
  doc["result"] = {{"samples_tested", report.samples_tested},
                   {"violation_count", report.violations.size()},
                   {"tolerance", report.tolerance},
                   {"max_slack", real_json(report.max_slack)},
                   {"violations", std::move(violations)},
                   {"range", std::move(parts.result)}};
  doc["metadata"] = std::move(parts.metadata);
  doc["timings"] = std::move(parts.timings);
  return doc.dump(2) + '\n';
}

std::string write_bench_json(const BenchTable& table, std::uint64_t seed, std::size_t runs) {
  ordered_json rows = ordered_json::array();
  ordered_json row_times = ordered_json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"count", r.count},
                    {"run", r.run},
                    {"node", r.node},
                    {"partition_seed", r.partition_seed},
                    {"lower", real_json(r.lower)},
                    {"upper", real_json(r.upper)},
                    {"exact", r.exact}});
    row_times.push_back({{"count", r.count}, {"run", r.run}, {"node", r.node}, {"phases", timings_json(r.timings)}});
  }
  ordered_json summary = ordered_json::array();
  ordered_json summary_times = ordered_json::array();
  for (const auto& s : table.summary) {
    ordered_json lower = ordered_json::array(), upper = ordered_json::array();
    for (const auto& st : s.lower) lower.push_back(stat_json(st));
    for (const auto& st : s.upper) upper.push_back(stat_json(st));
    summary.push_back({{"count", s.count}, {"lower", std::move(lower)}, {"upper", std::move(upper)}});
    summary_times.push_back({{"count", s.count},
                             {"abstraction", stat_json(s.abstraction_time)},
                             {"encoding", stat_json(s.encoding_time)},
                             {"solving", stat_json(s.solve_time)}});
  }
  ordered_json doc;
  doc["format"] = "innrange-bench";
  doc["version"] = kVersion;
  doc["result"] = {{"seed", seed}, {"runs", runs}, {"rows", std::move(rows)}, {"summary", std::move(summary)}};
  doc["metadata"] = {{"count_meaning", "groups per hidden layer"}};
  doc["timings"] = {{"rows", std::move(row_times)}, {"summary", std::move(summary_times)}};
  return doc.dump(2) + '\n';
}

std::string write_bench_csv(const BenchTable& table) {
  std::ostringstream os;
  os << kBenchCsvHeader << '\n';
  for (const auto& r : table.rows) {
    os << r.count << ',' << r.run << ',' << r.node << ',' << format_real(r.timings.abstraction) << ','
       << format_real(r.timings.encoding) << ',' << format_real(r.timings.solving) << ',' << format_real(r.lower)
       << ',' << format_real(r.upper) << '\n';
  }
  return os.str();
}

}  // namespace innrange
