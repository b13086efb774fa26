// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

// innrange command-line tool.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "innrange/abstraction.hpp"
#include "innrange/encode.hpp"
#include "innrange/errors.hpp"
#include "innrange/io.hpp"
#include "innrange/range_analysis.hpp"

namespace {

using namespace innrange;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitOutcome = 2;

// A user error that has already been phrased for the terminal.
struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string network;
  std::string partition;
  std::string box;
  std::string output;
  std::string csv;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::size_t node_limit = 0;
  double time_limit = 0.0;
  bool paper_literal = false;
  bool unscaled = false;
  bool allow_io_merge = false;
  bool normalize = false;
  std::size_t samples = 100;
  std::size_t selections = 10;
  std::vector<std::size_t> counts;
  std::size_t runs = 30;
  std::size_t groups = 0;
  std::size_t node = 0;
  std::string strategy = "random";
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct LoadedNetwork {
  InnNetwork net;
  std::optional<NnetNormalization> normalization;
};

LoadedNetwork load_network(const std::string& path) {
  try {
    if (ends_with(path, ".nnet")) {
      NnetDocument doc = read_nnet_file(path);
      return {std::move(doc.network), std::move(doc.normalization)};
    }
    return {parse_network_json(read_text_file(path)), std::nullopt};
  } catch (const ParseError& e) {
    if (!e.json_path().empty()) throw UsageError(path + ": " + e.what() + " (at " + e.json_path() + ")");
    if (e.line() != 0) {
      throw UsageError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " + e.what());
    }
    throw UsageError(e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what(), e.violations());
  }
}

template <typename Fn>
auto load_document(const std::string& path, Fn parse) {
  try {
    return parse(read_text_file(path));
  } catch (const ParseError& e) {
    if (!e.json_path().empty()) throw UsageError(path + ": " + e.what() + " (at " + e.json_path() + ")");
    throw UsageError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what(), e.violations());
  }
}

Partition load_partition(const std::string& path) { return load_document(path, parse_partition_json); }

BoxDocument load_box(const std::string& path, const LoadedNetwork& net, bool normalize) {
  BoxDocument doc = load_document(path, parse_box_json);
  if (doc.box.size() != net.net.input_size()) {
    throw UsageError(path + ": box has " + std::to_string(doc.box.size()) + " intervals, network has " +
                     std::to_string(net.net.input_size()) + " inputs");
  }
  if (normalize) {
    if (!net.normalization) throw UsageError("--normalize-inputs requires an .nnet network");
    if (!doc.constraints.empty()) throw UsageError("--normalize-inputs cannot be combined with box constraints");
    doc.box = normalize_box(doc.box, *net.normalization);
  }
  return doc;
}

void emit(const Options& opt, const std::string& text) {
  if (opt.output.empty() || opt.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.output, std::ios::binary);
  if (!out) throw UsageError("--output: cannot open '" + opt.output + "' for writing");
  out << text;
  if (!out) throw UsageError("--output: write to '" + opt.output + "' failed");
}

void write_file(const std::string& flag, const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError(flag + ": cannot open '" + path + "' for writing");
  out << text;
}

RangeConfig range_config(const Options& opt) {
  RangeConfig cfg;
  cfg.solver.node_limit = opt.node_limit;
  cfg.solver.time_limit = opt.time_limit;
  cfg.encoding.paper_literal = opt.paper_literal;
  cfg.abstraction_mode = opt.unscaled ? AbstractionMode::unscaled_hull : AbstractionMode::scaled;
  cfg.allow_io_merge = opt.allow_io_merge;
  cfg.jobs = opt.jobs;
  return cfg;
}

void warn_unsafe(const Options& opt) {
  if (opt.unscaled) {
    std::cerr << "innrange: WARNING: --unscaled-abstraction drops the group-size factor; "
                 "results are not guaranteed to contain the true output range\n";
  }
  if (opt.allow_io_merge) {
    std::cerr << "innrange: WARNING: --allow-io-merge analyzes merged input/output nodes; "
                 "results do not bound the original outputs\n";
  }
}

int outcome_code(const RangeResult& r) { return r.feasible() && r.exact() ? kExitOk : kExitOutcome; }

int run_validate(const Options& opt) {
  std::vector<std::string> problems;
  LoadedNetwork net;
  try {
    net = load_network(opt.network);
  } catch (const ValidationError& e) {
    problems = e.violations();
  }
  if (problems.empty() && !opt.partition.empty()) {
    for (auto& p : validate_partition(net.net, load_partition(opt.partition), true)) problems.push_back(p);
  }
  if (problems.empty()) {
    std::cout << "valid: " << opt.network;
    if (!net.net.layer_sizes.empty()) {
      std::cout << " (layers";
      for (auto s : net.net.layer_sizes) std::cout << ' ' << s;
      std::cout << (is_concrete(net.net) ? ", concrete)" : ", interval)");
    }
    std::cout << '\n';
    return kExitOk;
  }
  std::cout << "invalid: " << problems.size() << " problem(s)\n";
  for (const auto& p : problems) std::cout << "  - " << p << '\n';
  return kExitInvalid;
}

Partition build_partition(const Options& opt, const InnNetwork& net) {
  if (!opt.partition.empty()) return load_partition(opt.partition);
  if (opt.groups == 0) throw UsageError("abstract: give --partition or --groups");
  if (opt.strategy == "round-robin") return round_robin_partition(net, opt.groups);
  return random_partition(net, opt.groups, opt.seed);
}

int run_abstract(const Options& opt) {
  const LoadedNetwork net = load_network(opt.network);
  const Partition p = build_partition(opt, net.net);
  auto problems = validate_partition(net.net, p, !opt.allow_io_merge);
  if (!problems.empty()) throw ValidationError("invalid partition", std::move(problems));
  warn_unsafe(opt);
  const InnNetwork abs =
      abstract_network(net.net, p, opt.unscaled ? AbstractionMode::unscaled_hull : AbstractionMode::scaled);
  emit(opt, write_network_json(abs));
  return kExitOk;
}

InnNetwork maybe_abstract(const Options& opt, const InnNetwork& net, InputBox& box) {
  if (opt.partition.empty()) return net;
  const Partition p = load_partition(opt.partition);
  auto problems = validate_partition(net, p, !opt.allow_io_merge);
  if (!problems.empty()) throw ValidationError("invalid partition", std::move(problems));
  box = abstract_box(box, p.layers[0]);
  return abstract_network(net, p, opt.unscaled ? AbstractionMode::unscaled_hull : AbstractionMode::scaled);
}

int run_encode(const Options& opt) {
  const LoadedNetwork net = load_network(opt.network);
  BoxDocument box = load_box(opt.box, net, opt.normalize);
  warn_unsafe(opt);
  const InnNetwork analyzed = maybe_abstract(opt, net.net, box.box);
  EncodingOptions enc;
  enc.paper_literal = opt.paper_literal;
  const MilpModel model = encode(analyzed, box.box, box.constraints, enc);
  const std::size_t k = analyzed.layer_count();
  // One objective per file; the LP maximizes output node 0 unless --node is set.
  if (opt.node >= analyzed.output_size()) {
    throw UsageError("--node " + std::to_string(opt.node) + " is not an output node (network has " +
                     std::to_string(analyzed.output_size()) + ")");
  }
  const MilpModel posed = set_objective(model, node_var(k, opt.node), ObjectiveSense::maximize);
  emit(opt, to_lp_string(posed));
  return kExitOk;
}

int run_range(const Options& opt) {
  const LoadedNetwork net = load_network(opt.network);
  const BoxDocument box = load_box(opt.box, net, opt.normalize);
  RangeConfig cfg = range_config(opt);
  cfg.input_rows = box.constraints;
  warn_unsafe(opt);
  std::optional<Partition> p;
  if (!opt.partition.empty()) p = load_partition(opt.partition);
  const RangeResult r = output_range(net.net, box.box, p, cfg);
  emit(opt, write_range_json(r));
  return outcome_code(r);
}

int run_oracle(const Options& opt) {
  const LoadedNetwork net = load_network(opt.network);
  const BoxDocument box = load_box(opt.box, net, opt.normalize);
  const RangeResult r = exact_range_oracle(net.net, box.box, box.constraints);
  emit(opt, write_range_json(r));
  return outcome_code(r);
}

int run_check_soundness(const Options& opt) {
  const LoadedNetwork net = load_network(opt.network);
  const BoxDocument box = load_box(opt.box, net, opt.normalize);
  if (!box.constraints.empty()) throw UsageError(opt.box + ": check-soundness samples the plain box; drop the constraints");
  RangeConfig cfg = range_config(opt);
  warn_unsafe(opt);
  const SoundnessReport rep =
      soundness_check(net.net, load_partition(opt.partition), box.box, {opt.samples, opt.selections}, opt.seed, cfg);
  emit(opt, write_soundness_json(rep));
  if (!rep.violations.empty()) {
    std::cerr << "innrange: " << rep.violations.size() << " containment violation(s) found\n";
    return kExitInvalid;
  }
  return outcome_code(rep.range);
}

int run_bench(const Options& opt) {
  const LoadedNetwork net = load_network(opt.network);
  const BoxDocument box = load_box(opt.box, net, opt.normalize);
  RangeConfig cfg = range_config(opt);
  cfg.input_rows = box.constraints;
  warn_unsafe(opt);
  const BenchTable table = bench_partitions(net.net, box.box, opt.counts, opt.runs, opt.seed, cfg);
  const std::string csv = write_bench_csv(table);
  if (!opt.csv.empty()) {
    write_file("--csv", opt.csv, csv);
    emit(opt, write_bench_json(table, opt.seed, opt.runs));
  } else if (!opt.output.empty() && opt.output != "-") {
    emit(opt, write_bench_json(table, opt.seed, opt.runs));
    std::cout << csv;
  } else {
    std::cout << csv;
  }
  for (const BenchRow& row : table.rows)
    if (!row.exact) return kExitOutcome;
  return kExitOk;
}

void add_network(CLI::App* cmd, Options& opt) {
  cmd->add_option("-n,--network", opt.network, "Network file (.json, or .nnet for the NNet text format)")
      ->required()
      ->check(CLI::ExistingFile);
}

void add_box(CLI::App* cmd, Options& opt) {
  cmd->add_option("-b,--box", opt.box, "Input box JSON")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--normalize-inputs", opt.normalize,
                "Map the box through the NNet means/ranges before analysis (NNet networks only)");
}

void add_solver(CLI::App* cmd, Options& opt) {
  cmd->add_option("--node-limit", opt.node_limit, "Branch-and-bound node limit per bound (0 = none)");
  cmd->add_option("--time-limit", opt.time_limit, "Seconds per bound (0 = none)")->check(CLI::NonNegativeNumber);
  cmd->add_option("-j,--jobs", opt.jobs, "Parallel solves")->check(CLI::PositiveNumber);
  cmd->add_flag("--paper-literal", opt.paper_literal,
                "Literal four-row ReLU encoding with node bounds [0, M]; only exact for non-negative inputs");
}

void add_abstraction(CLI::App* cmd, Options& opt) {
  cmd->add_flag("--unscaled-abstraction", opt.unscaled,
                "UNSOUND: merge without the group-size factor (demonstration only)");
  cmd->add_flag("--allow-io-merge", opt.allow_io_merge, "Accept partitions that merge input or output nodes");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"innrange: output range analysis of ReLU networks through interval abstraction"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "innrange 0.1.0");
  Options opt;

  auto* validate_cmd = app.add_subcommand("validate", "Check a network and optionally a partition");
  add_network(validate_cmd, opt);
  validate_cmd->add_option("-p,--partition", opt.partition, "Partition JSON")->check(CLI::ExistingFile);

  auto* abstract_cmd = app.add_subcommand("abstract", "Write the abstract network for a partition");
  add_network(abstract_cmd, opt);
  abstract_cmd->add_option("-p,--partition", opt.partition, "Partition JSON")->check(CLI::ExistingFile);
  abstract_cmd->add_option("--groups", opt.groups, "Generate a partition with this many groups per hidden layer");
  abstract_cmd->add_option("--strategy", opt.strategy, "Generated partition: random or round-robin")
      ->check(CLI::IsMember({"random", "round-robin"}));
  abstract_cmd->add_option("--seed", opt.seed, "Seed for --strategy random");
  abstract_cmd->add_option("-o,--output", opt.output, "Output path (default stdout)");
  add_abstraction(abstract_cmd, opt);

  auto* encode_cmd = app.add_subcommand("encode", "Write the mixed-integer model as an LP file");
  add_network(encode_cmd, opt);
  add_box(encode_cmd, opt);
  encode_cmd->add_option("-p,--partition", opt.partition, "Abstract first with this partition")
      ->check(CLI::ExistingFile);
  encode_cmd->add_option("--node", opt.node, "Output node to maximize in the objective");
  encode_cmd->add_flag("--paper-literal", opt.paper_literal, "Literal four-row ReLU encoding");
  encode_cmd->add_option("-o,--output", opt.output, "Output path (default stdout)");
  add_abstraction(encode_cmd, opt);

  auto* range_cmd = app.add_subcommand("range", "Output range by branch and bound");
  add_network(range_cmd, opt);
  add_box(range_cmd, opt);
  range_cmd->add_option("-p,--partition", opt.partition, "Abstract first with this partition")
      ->check(CLI::ExistingFile);
  range_cmd->add_option("-o,--output", opt.output, "Output path (default stdout)");
  add_solver(range_cmd, opt);
  add_abstraction(range_cmd, opt);

  auto* oracle_cmd = app.add_subcommand("oracle", "Exact range by enumerating every phase assignment (small nets)");
  add_network(oracle_cmd, opt);
  add_box(oracle_cmd, opt);
  oracle_cmd->add_option("-o,--output", opt.output, "Output path (default stdout)");

  auto* sound_cmd = app.add_subcommand("check-soundness", "Sample concrete executions against the abstract range");
  add_network(sound_cmd, opt);
  add_box(sound_cmd, opt);
  sound_cmd->add_option("-p,--partition", opt.partition, "Partition JSON")->required()->check(CLI::ExistingFile);
  sound_cmd->add_option("--samples", opt.samples, "Sampled inputs")->check(CLI::PositiveNumber);
  sound_cmd->add_option("--selections", opt.selections, "Weight selections per input (interval networks)")
      ->check(CLI::PositiveNumber);
  sound_cmd->add_option("--seed", opt.seed, "Sampling seed");
  sound_cmd->add_option("-o,--output", opt.output, "Output path (default stdout)");
  add_solver(sound_cmd, opt);
  sound_cmd->add_flag("--unscaled-abstraction", opt.unscaled,
                      "UNSOUND: merge without the group-size factor (demonstration only)");

  auto* bench_cmd = app.add_subcommand("bench", "Ranges over seeded random partitions");
  add_network(bench_cmd, opt);
  add_box(bench_cmd, opt);
  bench_cmd->add_option("--counts", opt.counts, "Groups per hidden layer, e.g. 2,4,8")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench_cmd->add_option("--runs", opt.runs, "Random partitions per count")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--seed", opt.seed, "Master seed");
  bench_cmd->add_option("--csv", opt.csv, "CSV table path (default stdout)");
  bench_cmd->add_option("-o,--output", opt.output, "JSON summary path");
  add_solver(bench_cmd, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*validate_cmd) return run_validate(opt);
    if (*abstract_cmd) return run_abstract(opt);
    if (*encode_cmd) return run_encode(opt);
    if (*range_cmd) return run_range(opt);
    if (*oracle_cmd) return run_oracle(opt);
    if (*sound_cmd) return run_check_soundness(opt);
    if (*bench_cmd) return run_bench(opt);
  } catch (const ValidationError& e) {
    std::cerr << "innrange: error: " << e.what() << '\n';
    for (const auto& v : e.violations()) std::cerr << "  - " << v << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    std::cerr << "innrange: error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "innrange: internal error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}
