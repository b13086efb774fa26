// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace innrange {

/// Closed real interval [lo, hi]. Well-formed iff lo <= hi (NaN endpoints are not).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static constexpr Interval point(double value) { return {value, value}; }

  constexpr bool well_formed() const { return lo <= hi; }
  constexpr bool singular() const { return lo == hi; }
  constexpr double width() const { return hi - lo; }
  constexpr bool contains(double value, double tol = 0.0) const {
    return value >= lo - tol && value <= hi + tol;
  }
  constexpr bool contains(const Interval& other) const {
    return other.lo >= lo && other.hi <= hi;
  }

  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

/// Smallest interval containing both arguments.
constexpr Interval hull(const Interval& a, const Interval& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

constexpr Interval operator+(const Interval& a, const Interval& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

Interval operator*(const Interval& a, const Interval& b);

/// Image of the interval under max(0, .).
constexpr Interval relu(const Interval& a) {
  return {std::max(0.0, a.lo), std::max(0.0, a.hi)};
}

/// Dense row-major matrix. Used for interval weights and concrete selections.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<T>& data() const noexcept { return data_; }
  std::vector<T>& data() noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

}  // namespace innrange
