// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "innrange/errors.hpp"
#include "innrange/io.hpp"
#include "innrange/number_format.hpp"

namespace innrange {

namespace {

struct Token {
  std::string_view text;
  std::size_t column = 0;
};

struct Line {
  std::size_t number = 0;
  std::vector<Token> tokens;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(pos, end - pos);
    ++number;
    pos = end + 1;

    std::size_t first = 0;
    while (first < raw.size() && is_space(raw[first])) ++first;
    if (first == raw.size() || raw[first] == '/') {
      if (end == text.size()) break;
      continue;
    }
    Line line{number, {}};
    std::size_t start = 0;
    while (start <= raw.size()) {
      std::size_t comma = raw.find(',', start);
      const bool last = comma == std::string_view::npos;
      if (last) comma = raw.size();
      std::size_t a = start, b = comma;
      while (a < b && is_space(raw[a])) ++a;
      while (b > a && is_space(raw[b - 1])) --b;
      if (a < b) {
        line.tokens.push_back({raw.substr(a, b - a), a + 1});
      } else if (!last) {
        throw ParseError("empty field", number, a + 1);
      }
      if (last) break;
      start = comma + 1;
    }
    lines.push_back(std::move(line));
    if (end == text.size()) break;
  }
  return lines;
}

class Reader {
 public:
  explicit Reader(std::vector<Line> lines) : lines_(std::move(lines)) {}

  const Line& next(const std::string& what) {
    if (at_ >= lines_.size()) {
      const std::size_t line = lines_.empty() ? 1 : lines_.back().number + 1;
      throw ParseError("unexpected end of file, expected " + what, line, 1);
    }
    return lines_[at_++];
  }

  bool done() const { return at_ >= lines_.size(); }
  const Line& peek() const { return lines_[at_]; }

 private:
  std::vector<Line> lines_;
  std::size_t at_ = 0;
};

double to_real(const Line& line, const Token& tok) {
  std::string_view s = tok.text;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw ParseError("not a finite number: '" + std::string(tok.text) + "'", line.number, tok.column);
  }
  return value;
}

std::size_t to_count(const Line& line, const Token& tok) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
  if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
    throw ParseError("not a non-negative integer: '" + std::string(tok.text) + "'", line.number, tok.column);
  }
  return value;
}

void expect_count(const Line& line, std::size_t expected, const std::string& what) {
  if (line.tokens.size() < expected) {
    const std::size_t col = line.tokens.empty() ? 1 : line.tokens.back().column + line.tokens.back().text.size();
    throw ParseError(what + ": expected " + std::to_string(expected) + " values, found " +
                         std::to_string(line.tokens.size()),
                     line.number, col);
  }
  if (line.tokens.size() > expected) {
    throw ParseError(what + ": expected " + std::to_string(expected) + " values, found " +
                         std::to_string(line.tokens.size()),
                     line.number, line.tokens[expected].column);
  }
}

std::vector<double> real_row(Reader& in, std::size_t expected, const std::string& what) {
  const Line& line = in.next(what);
  expect_count(line, expected, what);
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& tok : line.tokens) out.push_back(to_real(line, tok));
  return out;
}

void write_row(std::ostringstream& os, const std::vector<double>& values) {
  for (double v : values) os << format_real(v) << ',';
  os << '\n';
}

}  // namespace

NnetDocument parse_nnet(std::string_view text) {
  Reader in(tokenize(text));

  const Line& header = in.next("header (layers, inputs, outputs, max layer size)");
  expect_count(header, 4, "header");
  const std::size_t k = to_count(header, header.tokens[0]);
  const std::size_t inputs = to_count(header, header.tokens[1]);
  const std::size_t outputs = to_count(header, header.tokens[2]);
  const std::size_t max_size = to_count(header, header.tokens[3]);
  if (k == 0) throw ParseError("layer count must be at least 1", header.number, header.tokens[0].column);

  const Line& sizes_line = in.next("layer size list");
  expect_count(sizes_line, k + 1, "layer size list");
  std::vector<std::size_t> sizes;
  std::size_t largest = 0;
  for (const auto& tok : sizes_line.tokens) {
    const std::size_t s = to_count(sizes_line, tok);
    if (s == 0) throw ParseError("layer size must be positive", sizes_line.number, tok.column);
    sizes.push_back(s);
    largest = std::max(largest, s);
  }
  if (sizes.front() != inputs) {
    throw ParseError("input size " + std::to_string(inputs) + " disagrees with first layer size " +
                         std::to_string(sizes.front()),
                     sizes_line.number, sizes_line.tokens.front().column);
  }
  if (sizes.back() != outputs) {
    throw ParseError("output size " + std::to_string(outputs) + " disagrees with last layer size " +
                         std::to_string(sizes.back()),
                     sizes_line.number, sizes_line.tokens.back().column);
  }
  if (largest != max_size) {
    throw ParseError("max layer size " + std::to_string(max_size) + " disagrees with layer sizes (largest " +
                         std::to_string(largest) + ")",
                     header.number, header.tokens[3].column);
  }

  const Line& flag = in.next("legacy flag line");
  if (flag.tokens.empty()) throw ParseError("legacy flag line is empty", flag.number, 1);
  to_count(flag, flag.tokens.front());

  NnetDocument doc;
  doc.normalization.input_mins = real_row(in, inputs, "input minimums");
  doc.normalization.input_maxes = real_row(in, inputs, "input maximums");
  doc.normalization.means = real_row(in, inputs + 1, "normalization means");
  doc.normalization.ranges = real_row(in, inputs + 1, "normalization ranges");

  InnNetwork& net = doc.network;
  net.layer_sizes = sizes;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t src = sizes[i], dst = sizes[i + 1];
    Matrix<Interval> w(src, dst);
    for (std::size_t t = 0; t < dst; ++t) {
      const std::string what = "layer " + std::to_string(i + 1) + " weight row " + std::to_string(t + 1) +
                               " of " + std::to_string(dst);
      const auto row = real_row(in, src, what);
      for (std::size_t s = 0; s < src; ++s) w(s, t) = Interval::point(row[s]);
    }
    std::vector<Interval> b(dst);
    for (std::size_t t = 0; t < dst; ++t) {
      const std::string what =
          "layer " + std::to_string(i + 1) + " bias " + std::to_string(t + 1) + " of " + std::to_string(dst);
      b[t] = Interval::point(real_row(in, 1, what).front());
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  if (!in.done()) {
    throw ParseError("trailing data after the last bias block", in.peek().number, in.peek().tokens.front().column);
  }
  net.provenance = "nnet";
  return doc;
}

NnetDocument read_nnet_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    NnetDocument doc = parse_nnet(text);
    doc.network.provenance = "nnet: " + path;
    return doc;
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), 0, 0);
  }
}

std::string write_nnet(const InnNetwork& net, const NnetNormalization& normalization) {
  require_valid(net);
  if (!is_concrete(net)) throw Error("write_nnet: the NNet format holds concrete networks only");
  const std::size_t inputs = net.input_size();
  if (normalization.input_mins.size() != inputs || normalization.input_maxes.size() != inputs ||
      normalization.means.size() != inputs + 1 || normalization.ranges.size() != inputs + 1) {
    throw ShapeError("write_nnet: normalization does not match " + std::to_string(inputs) + " inputs");
  }

  std::ostringstream os;
  os << "// innrange NNet export\n";
  std::size_t largest = 0;
  for (auto s : net.layer_sizes) largest = std::max(largest, s);
  os << net.layer_count() << ',' << inputs << ',' << net.output_size() << ',' << largest << ",\n";
  for (auto s : net.layer_sizes) os << s << ',';
  os << "\n0,\n";
  write_row(os, normalization.input_mins);
  write_row(os, normalization.input_maxes);
  write_row(os, normalization.means);
  write_row(os, normalization.ranges);
  for (std::size_t i = 0; i < net.layer_count(); ++i) {
    const auto& w = net.weights[i];
    for (std::size_t t = 0; t < w.cols(); ++t) {
      for (std::size_t s = 0; s < w.rows(); ++s) os << format_real(w(s, t).lo) << ',';
      os << '\n';
    }
    for (const auto& b : net.biases[i]) os << format_real(b.lo) << ",\n";
  }
  return os.str();
}

NnetNormalization identity_normalization(std::size_t inputs) {
  return {std::vector<double>(inputs, -1.0), std::vector<double>(inputs, 1.0), std::vector<double>(inputs + 1, 0.0),
          std::vector<double>(inputs + 1, 1.0)};
}

InputBox normalize_box(const InputBox& raw, const NnetNormalization& normalization) {
  if (normalization.means.size() < raw.size() || normalization.ranges.size() < raw.size()) {
    throw ShapeError("normalize_box: box has " + std::to_string(raw.size()) + " inputs, normalization covers " +
                     std::to_string(std::min(normalization.means.size(), normalization.ranges.size())));
  }
  InputBox out;
  for (std::size_t j = 0; j < raw.size(); ++j) {
    const double range = normalization.ranges[j];
    if (!(range > 0.0)) throw Error("normalize_box: range of input " + std::to_string(j) + " is not positive");
    const double mean = normalization.means[j];
    out.bounds.push_back({(raw.bounds[j].lo - mean) / range, (raw.bounds[j].hi - mean) / range});
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error("cannot read '" + path + "'");
  return os.str();
}

}  // namespace innrange
