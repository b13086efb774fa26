// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace innrange {

/// 17 significant digits; parses back to the identical double.
std::string format_real(double value);

}  // namespace innrange
