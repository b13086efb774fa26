// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include "innrange/errors.hpp"

#include <utility>

namespace innrange {

namespace {

std::string join_violations(const std::string& what, const std::vector<std::string>& violations) {
  std::string out = what;
  for (const auto& v : violations) {
    out += "\n  - ";
    out += v;
  }
  return out;
}

std::string located(const std::string& message, std::size_t line, std::size_t column) {
  if (line == 0) return message;
  std::string out = "line " + std::to_string(line);
  if (column != 0) out += ", column " + std::to_string(column);
  return out + ": " + message;
}

}  // namespace

ValidationError::ValidationError(const std::string& what, std::vector<std::string> violations)
    : Error(join_violations(what, violations)), violations_(std::move(violations)) {}

ParseError::ParseError(std::string message, std::size_t line, std::size_t column)
    : Error(located(message, line, column)), line_(line), column_(column) {}

ParseError::ParseError(std::string message, std::string json_path)
    : Error(json_path + ": " + message), json_path_(std::move(json_path)) {}

}  // namespace innrange
