// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace innrange {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dimension mismatch between a network and a valuation, selection or box.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// A structure failed validation. Carries the individual violations.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, std::vector<std::string> violations);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

/// Malformed text input. `line`/`column` are 1-based; 0 means unknown.
/// JSON inputs report a JSON path instead.
class ParseError : public Error {
 public:
  ParseError(std::string message, std::size_t line, std::size_t column);
  ParseError(std::string message, std::string json_path);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& json_path() const noexcept { return json_path_; }

 private:
  std::size_t line_ = 0;
  std::size_t column_ = 0;
  std::string json_path_;
};

}  // namespace innrange
