// Copyright 2026 The innrange Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "generators.hpp"
#include "innrange/encode.hpp"
#include "innrange/errors.hpp"
#include "innrange/solver.hpp"
#include "lp_reader.hpp"

namespace innrange {
namespace {

using testing::Rng;

double row_value(const MilpModel& model, const LinearConstraint& row, const std::vector<double>& x) {
  double lhs = 0.0;
  for (const auto& t : row.terms) lhs += t.coef * x[model.require_index(t.var)];
  return lhs;
}

bool row_holds(const MilpModel& model, const LinearConstraint& row, const std::vector<double>& x, double tol) {
  const double lhs = row_value(model, row, x);
  switch (row.sense) {
    case RowSense::le:
      return lhs <= row.rhs + tol;
    case RowSense::ge:
      return lhs >= row.rhs - tol;
    case RowSense::eq:
      return std::fabs(lhs - row.rhs) <= tol;
  }
  return false;
}

// Model assignment for one concrete execution: node values, q = 1 for inactive nodes,
// auxiliaries at max(0, -x).
std::vector<double> assignment_for(const MilpModel& model, const ExecutionTrace& trace) {
  std::vector<double> x(model.variables().size(), 0.0);
  for (std::size_t v = 0; v < x.size(); ++v) {
    const VarRef& ref = model.variables()[v].ref;
    switch (ref.kind) {
      case VarKind::continuous:
        x[v] = trace.post_activation[ref.layer][ref.node];
        break;
      case VarKind::binary:
        x[v] = trace.pre_activation[ref.layer][ref.node] > 0.0 ? 0.0 : 1.0;
        break;
      case VarKind::auxiliary:
        x[v] = std::max(0.0, -trace.post_activation[0][ref.node]);
        break;
    }
  }
  return x;
}

TEST(BigM, InflatedIntervalMagnitudeWithFloor) {
  Matrix<double> w0(1, 2);
  w0(0, 0) = 2.0;
  w0(0, 1) = 0.0;
  const InnNetwork net = InnNetwork::concrete({1, 2}, {w0}, {{-3.0, 0.0}});
  const auto m = compute_big_m(net, {{{-1.0, 2.0}}});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_TRUE(m[0].empty());
  // Pre-activation of node 0 spans [-5, 1].
  EXPECT_DOUBLE_EQ(m[1][0], 1.05 * 5.0);
  EXPECT_EQ(m[1][1], 1.0);
}

TEST(Encode, RowsOfASingleNode) {
  InnNetwork net;
  net.layer_sizes = {2, 1};
  net.weights.emplace_back(2, 1);
  net.weights[0](0, 0) = {1.0, 2.0};
  net.weights[0](1, 0) = {-1.0, -1.0};
  net.biases = {{{0.5, 1.5}}};
  const MilpModel model = encode(net, {{{0.0, 1.0}, {0.0, 2.0}}});
  // Pre-activation range: [0 - 2 + 0.5, 2 - 0 + 1.5] = [-1.5, 3.5].
  EXPECT_DOUBLE_EQ(model.big_m[1][0], 1.05 * 3.5);
  ASSERT_EQ(model.constraints().size(), 4u);
  const auto& rows = model.constraints();
  EXPECT_EQ(rows[0].tag, "C_1_0_1");
  EXPECT_EQ(rows[3].tag, "C_1_0_4");
  EXPECT_EQ(rows[0].sense, RowSense::le);
  EXPECT_EQ(rows[0].terms[0].coef, 1.0);
  EXPECT_EQ(rows[0].terms[1].coef, -1.0);
  EXPECT_EQ(rows[0].rhs, -0.5);
  EXPECT_EQ(rows[2].sense, RowSense::ge);
  EXPECT_EQ(rows[2].terms[0].coef, 2.0);
  EXPECT_EQ(rows[2].rhs, -1.5);
  const auto& out = model.variables()[model.require_index(node_var(1, 0))];
  EXPECT_EQ(out.lo, 0.0);
  EXPECT_EQ(out.hi, 3.5);
  EXPECT_EQ(model.binary_count(), 1u);
}

TEST(Encode, CensusOnRandomShapes) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sizes = testing::random_shape(rng, 2, 5, 1, 7);
    const InnNetwork net = testing::random_inn(rng, sizes, 2.0, 1.0);
    const InputBox box = testing::random_box(rng, sizes[0], -1.0, 1.0);
    std::vector<LinearConstraint> extra(testing::uniform_index(rng, 0, 3));
    for (auto& row : extra) row = {{{1.0, node_var(0, 0)}}, RowSense::le, 1.0, ""};
    const MilpModel model = encode(net, box, extra);

    std::size_t nodes = 0;
    for (std::size_t i = 1; i < sizes.size(); ++i) nodes += sizes[i];
    std::size_t splits = 0;
    for (std::size_t s = 0; s < sizes[0]; ++s) {
      if (!(box.bounds[s].lo < 0.0 && box.bounds[s].hi > 0.0)) continue;
      bool interval_weight = false;
      for (std::size_t t = 0; t < sizes[1]; ++t) interval_weight |= !net.weights[0](s, t).singular();
      splits += interval_weight ? 1 : 0;
    }
    EXPECT_EQ(model.count_rows(RowOrigin::relu), 4 * nodes);
    EXPECT_EQ(model.count_rows(RowOrigin::input_user), extra.size());
    EXPECT_EQ(model.count_rows(RowOrigin::input_sign_split), splits);
    EXPECT_EQ(model.constraints().size(), 4 * nodes + extra.size() + splits);
    EXPECT_EQ(model.binary_count(), nodes);
    if (!extra.empty()) {
      EXPECT_EQ(model.constraints().back().tag, "I_" + std::to_string(extra.size() - 1));
    }
  }
}

TEST(Encode, BigMDominatesEverySampledPreActivation) {
  Rng rng(32);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sizes = testing::random_shape(rng, 2, 4, 1, 5);
    const InnNetwork net = testing::random_inn(rng, sizes, 2.0, 1.0);
    const InputBox box = testing::random_box(rng, sizes[0], -1.0, 1.0);
    const auto m = compute_big_m(net, box);
    for (int s = 0; s < 20; ++s) {
      const auto trace = eval_trace(net, {0, testing::sample_box(rng, box)}, sample_selection(net, rng()));
      for (std::size_t i = 1; i < sizes.size(); ++i)
        for (std::size_t t = 0; t < sizes[i]; ++t) ASSERT_LE(std::fabs(trace.pre_activation[i][t]), m[i][t]);
    }
  }
}

TEST(Encode, EverySampledExecutionIsFeasible) {
  Rng rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    const auto sizes = testing::random_shape(rng, 2, 4, 1, 5);
    const InnNetwork net = testing::random_inn(rng, sizes, 2.0, 1.0);
    const InputBox box = testing::random_box(rng, sizes[0], -1.0, 1.0);
    const MilpModel model = encode(net, box);
    for (int s = 0; s < 10; ++s) {
      const auto trace = eval_trace(net, {0, testing::sample_box(rng, box)}, sample_selection(net, rng()));
      const Violation v = max_violation(model, assignment_for(model, trace));
      ASSERT_LE(v.row, 1e-9) << "trial " << trial;
      ASSERT_LE(v.bound, 1e-9) << "trial " << trial;
    }
  }
}

// For fixed (v, v') of one layer the ReLU rows admit some phase per node iff the pair
// belongs to the layer relation.
TEST(Encode, RowsMatchTheLayerRelationForEveryPhase) {
  Rng rng(34);
  for (int trial = 0; trial < 300; ++trial) {
    const auto sizes = testing::random_shape(rng, 2, 3, 1, 4);
    const InnNetwork net = testing::random_inn(rng, sizes, 2.0, 1.0);
    const InputBox box = testing::random_box(rng, sizes[0], -1.0, 1.0);
    const MilpModel model = encode(net, box);
    std::map<std::string, const LinearConstraint*> by_tag;
    for (const auto& row : model.constraints()) by_tag[row.tag] = &row;

    const auto trace = eval_trace(net, {0, testing::sample_box(rng, box)}, sample_selection(net, rng()));
    std::vector<double> x = assignment_for(model, trace);
    const std::size_t i = testing::uniform_index(rng, 0, net.layer_count() - 1);
    // Candidate v': the sampled one, perturbed half of the time.
    std::vector<double> next = trace.post_activation[i + 1];
    if (rng() % 2) {
      for (auto& y : next) y = std::max(0.0, y + testing::uniform(rng, -1.0, 1.0));
    }
    for (std::size_t t = 0; t < next.size(); ++t) x[model.require_index(node_var(i + 1, t))] = next[t];

    bool rows_ok = true;
    for (std::size_t t = 0; t < next.size(); ++t) {
      bool some_phase = false;
      for (double q : {0.0, 1.0}) {
        x[model.require_index(phase_var(i + 1, t))] = q;
        bool all = true;
        for (int which = 1; which <= 4; ++which) {
          const std::string tag =
              "C_" + std::to_string(i + 1) + "_" + std::to_string(t) + "_" + std::to_string(which);
          all = all && row_holds(model, *by_tag.at(tag), x, 1e-9);
        }
        some_phase = some_phase || all;
      }
      rows_ok = rows_ok && some_phase;
    }
    const bool member = layer_membership(net, i, {i, trace.post_activation[i]}, {i + 1, next}, 1e-9);
    // Node bounds from interval propagation are part of the model too.
    bool bounds_ok = true;
    for (std::size_t t = 0; t < next.size(); ++t) {
      const auto& var = model.variables()[model.require_index(node_var(i + 1, t))];
      bounds_ok = bounds_ok && next[t] <= var.hi + 1e-9;
    }
    EXPECT_EQ(rows_ok && bounds_ok, member) << "trial " << trial << " layer " << i;
  }
}

TEST(Encode, NegativeInputsWithIntervalWeights) {
  // w in [1, 2], x = -1, b = 5: the true pre-activation is [3, 4].
  InnNetwork net;
  net.layer_sizes = {1, 1};
  net.weights.emplace_back(1, 1, Interval{1.0, 2.0});
  net.biases = {{Interval::point(5.0)}};
  const InputBox box{{{-1.0, -1.0}}};

  MilpModel model = set_objective(encode(net, box), node_var(1, 0), ObjectiveSense::maximize);
  SolveResult hi = solve(model);
  ASSERT_EQ(hi.status, SolveStatus::optimal);
  EXPECT_NEAR(hi.objective, 4.0, 1e-9);
  model = set_objective(std::move(model), node_var(1, 0), ObjectiveSense::minimize);
  SolveResult lo = solve(model);
  ASSERT_EQ(lo.status, SolveStatus::optimal);
  EXPECT_NEAR(lo.objective, 3.0, 1e-9);

  // The verbatim rows put the lower endpoint on the wrong side and lose every solution.
  const MilpModel literal = set_objective(encode(net, box, {}, {.paper_literal = true}), node_var(1, 0),
                                          ObjectiveSense::maximize);
  EXPECT_TRUE(literal.paper_literal);
  EXPECT_EQ(solve(literal).status, SolveStatus::infeasible);
  EXPECT_EQ(literal.variables()[literal.require_index(node_var(1, 0))].hi, literal.big_m[1][0]);
}

TEST(Encode, StraddlingInputGetsAnAuxiliary) {
  InnNetwork net;
  net.layer_sizes = {1, 1};
  net.weights.emplace_back(1, 1, Interval{1.0, 2.0});
  net.biases = {{Interval::point(0.0)}};
  const MilpModel model = encode(net, {{{-1.0, 1.0}}});
  ASSERT_TRUE(model.index_of(aux_var(0, 0)).has_value());
  EXPECT_EQ(model.constraints().front().tag, "S_0_0");
  EXPECT_EQ(model.variables()[*model.index_of(aux_var(0, 0))].hi, 1.0);
}

TEST(Encode, RejectsBadInputRowsAndObjectives) {
  Matrix<double> w(1, 1, 1.0);
  const InnNetwork net = InnNetwork::concrete({1, 1, 1}, {w, w}, {{0.0}, {0.0}});
  const InputBox box{{{0.0, 1.0}}};
  EXPECT_THROW(encode(net, box, {{{{1.0, node_var(1, 0)}}, RowSense::le, 0.0, "bad"}}), Error);
  EXPECT_THROW(encode(net, {{{0.0, 1.0}, {0.0, 1.0}}}), ShapeError);
  const MilpModel model = encode(net, box);
  EXPECT_THROW(set_objective(model, node_var(1, 0), ObjectiveSense::maximize), Error);
  EXPECT_THROW(set_objective(model, phase_var(2, 0), ObjectiveSense::maximize), Error);
  EXPECT_NO_THROW(set_objective(model, node_var(2, 0), ObjectiveSense::maximize));
  EXPECT_THROW(to_lp_string(model), Error);
}

TEST(LpFile, RoundTripsEveryRowAndBound) {
  Rng rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sizes = testing::random_shape(rng, 2, 4, 1, 5);
    const InnNetwork net = testing::random_inn(rng, sizes, 2.0, 1.0);
    const InputBox box = testing::random_box(rng, sizes[0], -1.0, 1.0);
    const MilpModel model =
        set_objective(encode(net, box, {{{{-0.5, node_var(0, 0)}}, RowSense::ge, -2.0, "cap"}}),
                      node_var(sizes.size() - 1, 0), trial % 2 ? ObjectiveSense::maximize : ObjectiveSense::minimize);
    const testing::LpFile lp = testing::read_lp(to_lp_string(model));
    EXPECT_EQ(lp.maximize, trial % 2 == 1);
    EXPECT_EQ(lp.objective, var_name(model.objective()->var));
    ASSERT_EQ(lp.rows.size(), model.constraints().size());
    for (std::size_t r = 0; r < lp.rows.size(); ++r) {
      const auto& want = model.constraints()[r];
      const auto& got = lp.rows[r];
      EXPECT_EQ(got.tag, want.tag);
      EXPECT_TRUE(testing::same_bits(got.rhs, want.rhs));
      ASSERT_EQ(got.terms.size(), want.terms.size());
      for (std::size_t t = 0; t < got.terms.size(); ++t) {
        EXPECT_TRUE(testing::same_bits(got.terms[t].first, want.terms[t].coef));
        EXPECT_EQ(got.terms[t].second, var_name(want.terms[t].var));
      }
    }
    std::size_t binaries = 0;
    for (const auto& v : model.variables()) {
      if (v.is_binary()) {
        ++binaries;
        continue;
      }
      const auto& b = lp.bounds.at(var_name(v.ref));
      EXPECT_TRUE(testing::same_bits(b.first, v.lo));
      EXPECT_TRUE(testing::same_bits(b.second, v.hi));
    }
    EXPECT_EQ(lp.binaries.size(), binaries);
  }
}

TEST(ModelJson, ListsVariablesRowsAndObjective) {
  Matrix<double> w(1, 1, 1.0);
  const InnNetwork net = InnNetwork::concrete({1, 1}, {w}, {{0.0}});
  const std::string doc = model_to_json(set_objective(encode(net, {{{0.0, 1.0}}}), node_var(1, 0),
                                                      ObjectiveSense::maximize));
  EXPECT_NE(doc.find("\"C_1_0_4\""), std::string::npos);
  EXPECT_NE(doc.find("\"q_1_0\""), std::string::npos);
  EXPECT_NE(doc.find("\"max\""), std::string::npos);
}

}  // namespace
}  // namespace innrange
