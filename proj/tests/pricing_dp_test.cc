// Copyright 2026 The mwsp Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mwsp/pricing_dp.h"

#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "mwsp/pricing_nbd.h"
#include "test_util.h"

namespace mwsp {
namespace {

using testing::MakeData;

// Minimum reduced cost over every pose whose neck part is exactly `neck`,
// by walking the product of all capped state spaces.
double ExhaustivePrice(const PricingModel& model,
                       const std::vector<DetectionId>& neck,
                       const std::vector<double>& lambda) {
  const auto& order = model.tree.order;
  std::vector<int> digit(order.size(), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<DetectionId> dets = neck;
    for (size_t k = 0; k < order.size(); ++k) {
      const auto m = model.spaces[order[k]].Members(digit[k]);
      dets.insert(dets.end(), m.begin(), m.end());
    }
    best = std::min(best, ReducedCost(*model.instance, Pose(dets), lambda));
    size_t k = 0;
    while (k < order.size() && ++digit[k] == model.spaces[order[k]].size()) {
      digit[k++] = 0;
    }
    if (k == order.size()) break;
  }
  return best;
}

TEST(DpPrice, SinglePartOneDetection) {
  // Neck detection 0 and part detection 1 with θ¹+λ = -5.
  const ProblemInstance inst(MakeData({1, 1}, {}, 1, 0.0, {0.0, -5.0}, {}));
  const PricingModel model = BuildPricingModel(inst, 100, 1);
  const std::vector<double> lambda(2, 0.0);
  const std::vector<DetectionId> neck = {0};
  const PricedPose p = DpPrice(model, BuildContext(model, lambda, neck), lambda);
  EXPECT_EQ(p.pose, Pose({0, 1}));
  EXPECT_DOUBLE_EQ(p.reduced_cost, -5.0);
}

TEST(DpPrice, NonnegativeCostsSelectEmptyStates) {
  const ProblemInstance inst(MakeData({1, 2, 2}, {{1, 2}}, 1, 4.0,
                                      {1.0, 2.0, 0.5, 3.0, 0.0},
                                      {{1, 3, 2.0}, {0, 4, 1.0}}));
  const PricingModel model = BuildPricingModel(inst, 100, 1);
  const std::vector<double> lambda = {0.5, 0.0, 0.0, 1.0, 0.0};
  const std::vector<DetectionId> neck = {0};
  const auto ctx = BuildContext(model, lambda, neck);
  const PricedPose p = DpPrice(model, ctx, lambda);
  EXPECT_EQ(p.pose, Pose({0}));
  EXPECT_DOUBLE_EQ(p.reduced_cost, ctx.constant);
  EXPECT_DOUBLE_EQ(ctx.constant, 4.0 + 1.0 + 0.5);
}

TEST(DpMessages, LeafWithNonnegativePsiSendsZeros) {
  const ProblemInstance inst(
      MakeData({1, 1, 2}, {{1, 2}}, 1, 0.0, {0.0, -1.0, 2.0, 3.0}, {}));
  const PricingModel model = BuildPricingModel(inst, 100, 1);
  const std::vector<double> lambda(4, 0.0);
  const std::vector<DetectionId> neck = {0};
  const MessageTable t = DpMessages(model, BuildContext(model, lambda, neck));
  for (double v : t.message[2]) EXPECT_EQ(v, 0.0);
  for (int a : t.argmin[2]) EXPECT_EQ(a, 0);
}

TEST(DpMessages, TwoPartChainMatchesHandTable) {
  // Parts 1 -> 2 with one detection each (ids 1 and 2); neck detection 0.
  // ψ₁ = {0, -3}, ψ₂ = {0, 2}, Φ({1},{2}) = -4.
  const ProblemInstance inst(MakeData({1, 1, 1}, {{1, 2}}, 1, 0.0,
                                      {0.0, -3.0, 2.0}, {{1, 2, -4.0}}));
  const PricingModel model = BuildPricingModel(inst, 100, 1);
  const std::vector<double> lambda(3, 0.0);
  const std::vector<DetectionId> neck = {0};
  const auto ctx = BuildContext(model, lambda, neck);
  const MessageTable t = DpMessages(model, ctx);
  // Parent empty: min(0, 2) = 0. Parent {1}: min(0, -4 + 2) = -2.
  ASSERT_EQ(t.message[2].size(), 2u);
  EXPECT_DOUBLE_EQ(t.message[2][0], 0.0);
  EXPECT_DOUBLE_EQ(t.message[2][1], -2.0);
  EXPECT_EQ(t.argmin[2][1], 1);
  // Joint table over four states: (∅,∅)=0, (∅,{2})=2, ({1},∅)=-3,
  // ({1},{2})=-3+2-4=-5.
  const PricedPose p = DpPrice(model, ctx, lambda);
  EXPECT_DOUBLE_EQ(p.reduced_cost, -5.0);
  EXPECT_EQ(p.pose, Pose({0, 1, 2}));
}

class DpRandom : public ::testing::TestWithParam<int> {};

TEST_P(DpRandom, MatchesExhaustivePricing) {
  GeneratorConfig config;
  config.num_parts = 3 + GetParam() % 3;
  config.dets_per_part = 2;
  config.neck_dets = 2;
  const auto gen = GenerateInstance(config, GetParam());
  const ProblemInstance& inst = gen.instance;
  ASSERT_LE(inst.num_detections(), 10);
  const PricingModel model = BuildPricingModel(inst, 100, SelectRoot(inst));
  std::mt19937 rng(GetParam());
  std::uniform_real_distribution<double> u(0.0, 4.0);
  std::vector<double> lambda(inst.num_detections());
  for (double& l : lambda) l = u(rng);
  const std::vector<std::vector<DetectionId>> contexts = {
      {inst.neck_detections()[0]},
      {inst.neck_detections()[1]},
      {inst.neck_detections()[0], inst.neck_detections()[1]}};
  for (const auto& neck : contexts) {
    const auto ctx = BuildContext(model, lambda, neck);
    const PricedPose p = DpPrice(model, ctx, lambda);
    EXPECT_NEAR(p.reduced_cost, ExhaustivePrice(model, neck, lambda), 1e-9);

    const MessageTable t = DpMessages(model, ctx);
    for (PartId r : model.tree.order) {
      const PartId parent = model.tree.parent[r];
      if (parent == kNoPart) continue;
      for (int h = 0; h < model.spaces[parent].size(); ++h) {
        const int s = t.argmin[r][h];
        const double at_argmin =
            PhiValue(inst, model.spaces[parent], model.spaces[r], h, s) +
            t.subtree[r][s];
        EXPECT_NEAR(t.message[r][h], at_argmin, 1e-9);
        for (int k = 0; k < model.spaces[r].size(); ++k) {
          EXPECT_LE(t.message[r][h],
                    PhiValue(inst, model.spaces[parent], model.spaces[r], h, k) +
                        t.subtree[r][k] + 1e-12);
        }
      }
    }
  }
}

TEST_P(DpRandom, InvariantToRootAndChildOrder) {
  GeneratorConfig config;
  config.num_parts = 5;
  config.dets_per_part = 3;
  const auto gen = GenerateInstance(config, 100 + GetParam());
  const ProblemInstance& inst = gen.instance;
  std::vector<double> lambda(inst.num_detections(), 1.0);
  const std::vector<DetectionId> neck = {inst.neck_detections()[0]};
  double reference = 0.0;
  bool first = true;
  for (PartId root : inst.non_neck_parts()) {
    const PricingModel model = BuildPricingModel(inst, 1000, root);
    const double v =
        DpPrice(model, BuildContext(model, lambda, neck), lambda).reduced_cost;
    if (first) reference = v;
    first = false;
    EXPECT_NEAR(v, reference, 1e-9);
    // Reversed child lists.
    PricingModel reversed = model;
    for (auto& c : reversed.tree.children) std::reverse(c.begin(), c.end());
    EXPECT_NEAR(
        DpPrice(reversed, BuildContext(reversed, lambda, neck), lambda).reduced_cost,
        v, 1e-9);
  }
}

TEST_P(DpRandom, LipschitzInLambdaAndDeterministic) {
  const auto gen = GenerateInstance(GeneratorConfig{}, 200 + GetParam());
  const ProblemInstance& inst = gen.instance;
  const PricingModel model = BuildPricingModel(inst, 1000, SelectRoot(inst));
  std::vector<double> lambda(inst.num_detections(), 0.5);
  const std::vector<DetectionId> neck = {inst.neck_detections()[0]};
  const PricedPose a = DpPrice(model, BuildContext(model, lambda, neck), lambda);
  const PricedPose again =
      DpPrice(model, BuildContext(model, lambda, neck), lambda);
  EXPECT_EQ(a.pose, again.pose);
  const DetectionId d = GetParam() % inst.num_detections();
  lambda[d] += 3.0;
  const PricedPose b = DpPrice(model, BuildContext(model, lambda, neck), lambda);
  EXPECT_GE(b.reduced_cost, a.reduced_cost - 1e-12);
  EXPECT_LE(b.reduced_cost, a.reduced_cost + 3.0 + 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, DpRandom, ::testing::Range(0, 20));

}  // namespace
}  // namespace mwsp
