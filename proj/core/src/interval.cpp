// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include "innrange/interval.hpp"

namespace innrange {

Interval operator*(const Interval& a, const Interval& b) {
  const double p1 = a.lo * b.lo;
  const double p2 = a.lo * b.hi;
  const double p3 = a.hi * b.lo;
  const double p4 = a.hi * b.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)), std::max(std::max(p1, p2), std::max(p3, p4))};
}

}  // namespace innrange
