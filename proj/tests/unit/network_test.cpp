// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "generators.hpp"
#include "innrange/errors.hpp"
#include "innrange/network.hpp"

namespace innrange {
namespace {

using testing::Rng;

// x -> h1 (w 1), x -> h2 (w 1), h1, h2 -> y (w 1); no biases.
InnNetwork fan_net() {
  Matrix<double> w0(1, 2, 1.0), w1(2, 1, 1.0);
  return InnNetwork::concrete({1, 2, 1}, {w0, w1}, {{0.0, 0.0}, {0.0}});
}

TEST(Interval, ProductTakesAllFourCorners) {
  const Interval p = Interval{-2, 3} * Interval{-1, 4};
  EXPECT_EQ(p.lo, -8);
  EXPECT_EQ(p.hi, 12);
  EXPECT_EQ(relu({-3, 2}), (Interval{0, 2}));
  EXPECT_EQ(relu({-3, -1}), (Interval{0, 0}));
  EXPECT_EQ(hull({1, 2}, {5, 6}), (Interval{1, 6}));
}

TEST(Validate, AcceptsWellFormedNetwork) { EXPECT_TRUE(validate(fan_net()).empty()); }

TEST(Validate, ReportsEveryViolation) {
  InnNetwork net = fan_net();
  net.weights[0](0, 1) = {5, 3};
  net.biases[1].push_back({0, 0});
  net.node_names = {{"x"}, {"h", "h"}, {"y"}};
  const auto v = validate(net);
  ASSERT_EQ(v.size(), 3u);
  EXPECT_NE(v[0].find("(0,1)"), std::string::npos);
  EXPECT_NE(v[1].find("layer 2"), std::string::npos);
  EXPECT_NE(v[2].find("duplicate node name 'h'"), std::string::npos);
  EXPECT_THROW(require_valid(net), ValidationError);
}

TEST(Validate, RejectsMissingLayers) {
  InnNetwork net;
  net.layer_sizes = {3};
  EXPECT_FALSE(validate(net).empty());
  net.layer_sizes = {2, 0};
  EXPECT_FALSE(validate(net).empty());
}

TEST(Eval, AppliesReluOnEveryLayer) {
  Matrix<double> w0(1, 1, -1.0), w1(1, 1, 1.0);
  const InnNetwork net = InnNetwork::concrete({1, 1, 1}, {w0, w1}, {{0.5}, {-2.0}});
  const auto sel = endpoint_selection(net, Endpoint::lower);
  EXPECT_EQ(eval(net, {0, {0.25}}, sel).values, std::vector<double>{0.0});
  const auto trace = eval_trace(net, {0, {0.25}}, sel);
  EXPECT_EQ(trace.pre_activation[1][0], 0.25);
  EXPECT_EQ(trace.pre_activation[2][0], -1.75);
  EXPECT_EQ(eval(fan_net(), {0, {1.0}}, endpoint_selection(fan_net(), Endpoint::upper)).values[0], 2.0);
}

TEST(Eval, ShapeMismatchThrows) {
  const InnNetwork net = fan_net();
  EXPECT_THROW(eval(net, {0, {1.0, 2.0}}, endpoint_selection(net, Endpoint::lower)), ShapeError);
  EXPECT_THROW(eval(net, {1, {1.0}}, endpoint_selection(net, Endpoint::lower)), ShapeError);
}

TEST(SampleSelection, DeterministicAndInside) {
  Rng rng(11);
  const InnNetwork net = testing::random_inn(rng, {3, 4, 2}, 2.0, 1.0);
  const auto a = sample_selection(net, 99);
  const auto b = sample_selection(net, 99);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.biases, b.biases);
  for (std::size_t i = 0; i < net.weights.size(); ++i) {
    for (std::size_t r = 0; r < net.weights[i].rows(); ++r)
      for (std::size_t c = 0; c < net.weights[i].cols(); ++c)
        EXPECT_TRUE(net.weights[i](r, c).contains(a.weights[i](r, c), 0.0));
    for (std::size_t t = 0; t < net.biases[i].size(); ++t) EXPECT_TRUE(net.biases[i][t].contains(a.biases[i][t], 0.0));
  }
  const auto c = sample_selection(net, 100);
  EXPECT_NE(a.weights, c.weights);
}

TEST(SampleSelection, SingularIntervalsGiveTheirValue) {
  const InnNetwork net = fan_net();
  const auto sel = sample_selection(net, 5);
  EXPECT_EQ(sel.weights[0](0, 1), 1.0);
  EXPECT_EQ(sel.biases[1][0], 0.0);
}

TEST(IntervalBounds, ContainEverySampledExecution) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sizes = testing::random_shape(rng, 2, 4, 1, 5);
    const InnNetwork net = testing::random_inn(rng, sizes, 2.0, 1.0);
    const InputBox box = testing::random_box(rng, sizes[0], -1.0, 1.0);
    const LayerBounds bounds = interval_bounds(net, box);
    for (int s = 0; s < 20; ++s) {
      const auto trace = eval_trace(net, {0, testing::sample_box(rng, box)}, sample_selection(net, rng()));
      for (std::size_t i = 1; i < sizes.size(); ++i) {
        for (std::size_t t = 0; t < sizes[i]; ++t) {
          ASSERT_TRUE(bounds.pre_activation[i][t].contains(trace.pre_activation[i][t], 1e-9));
          ASSERT_TRUE(bounds.post_activation[i][t].contains(trace.post_activation[i][t], 1e-9));
        }
      }
    }
  }
}

// Brute force over every endpoint choice of the weights into `target` and its bias.
Interval endpoint_enumeration(const InnNetwork& net, std::size_t layer, const std::vector<double>& v,
                              std::size_t target) {
  const auto& w = net.weights[layer];
  const std::size_t n = w.rows() + 1;
  Interval out{INFINITY, -INFINITY};
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    const Interval& b = net.biases[layer][target];
    double sum = (mask >> w.rows()) & 1U ? b.hi : b.lo;
    for (std::size_t s = 0; s < w.rows(); ++s) sum += ((mask >> s) & 1U ? w(s, target).hi : w(s, target).lo) * v[s];
    out.lo = std::min(out.lo, sum);
    out.hi = std::max(out.hi, sum);
  }
  return out;
}

TEST(AffineRange, MatchesEndpointEnumeration) {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const InnNetwork net = testing::random_inn(rng, {testing::uniform_index(rng, 1, 5), 3}, 2.0, 1.5);
    std::vector<double> v(net.input_size());
    for (auto& x : v) x = testing::uniform(rng, -2.0, 2.0);
    for (std::size_t t = 0; t < 3; ++t) {
      const Interval got = affine_range(net, 0, {0, v}, t);
      const Interval want = endpoint_enumeration(net, 0, v, t);
      EXPECT_NEAR(got.lo, want.lo, 1e-12);
      EXPECT_NEAR(got.hi, want.hi, 1e-12);
    }
  }
}

TEST(LayerMembership, SoundForSampledSelections) {
  Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sizes = testing::random_shape(rng, 2, 2, 1, 5);
    const InnNetwork net = testing::random_inn(rng, sizes, 2.0, 1.0);
    Valuation v{0, {}};
    for (std::size_t s = 0; s < sizes[0]; ++s) v.values.push_back(testing::uniform(rng, -1.0, 1.0));
    const Valuation next = post_layer(net, 0, v, sample_selection(net, rng()));
    EXPECT_TRUE(layer_membership(net, 0, v, next));
  }
}

TEST(LayerMembership, CompleteAgainstTheRangeBoundary) {
  Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const InnNetwork net = testing::random_inn(rng, {3, 1}, 2.0, 1.0);
    Valuation v{0, {}};
    for (int s = 0; s < 3; ++s) v.values.push_back(testing::uniform(rng, -1.0, 1.0));
    const Interval range = affine_range(net, 0, v, 0);
    // Every value of relu(range) is reachable.
    for (double f : {0.0, 0.3, 1.0}) {
      const double y = std::max(0.0, range.lo + f * (range.hi - range.lo));
      EXPECT_TRUE(layer_membership(net, 0, v, {1, {y}}));
    }
    // Just outside is not.
    if (range.hi > 0) {
      EXPECT_FALSE(layer_membership(net, 0, v, {1, {range.hi + 1e-3}}));
    }
    if (range.lo > 1e-3) {
      EXPECT_FALSE(layer_membership(net, 0, v, {1, {range.lo - 1e-3}}));
      EXPECT_FALSE(layer_membership(net, 0, v, {1, {0.0}}));
    }
    EXPECT_FALSE(layer_membership(net, 0, v, {1, {-0.5}}));
  }
}

}  // namespace
}  // namespace innrange
