// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <initializer_list>

namespace innrange {

/// Mixes a master seed with stream identifiers (splitmix64 finalizer) so that
/// independent runs get independent, reproducible RNG streams.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> ids) {
  std::uint64_t state = master;
  for (std::uint64_t id : ids) {
    state += 0x9e3779b97f4a7c15ULL + id;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    state = z ^ (z >> 31);
  }
  return state;
}

}  // namespace innrange
