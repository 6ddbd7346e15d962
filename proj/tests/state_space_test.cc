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

#include "mwsp/state_space.h"

#include <random>

#include <gtest/gtest.h>

#include "test_util.h"

namespace mwsp {
namespace {

using testing::MakeData;

std::vector<std::vector<DetectionId>> AllStates(const StateSpace& space) {
  std::vector<std::vector<DetectionId>> out;
  for (int s = 0; s < space.size(); ++s) out.push_back(space.Members(s));
  return out;
}

TEST(BuildStateSpace, FullPowerSetWhenItFits) {
  const ProblemInstance inst(MakeData({0, 2}, {}, 1, 0.0, {}, {}));
  const StateSpace space = BuildStateSpace(inst, 1, 10);
  const std::vector<std::vector<DetectionId>> expected = {{}, {0}, {1}, {0, 1}};
  EXPECT_EQ(AllStates(space), expected);
}

TEST(BuildStateSpace, StopsBeforeAGroupThatWouldExceedTheCap) {
  const ProblemInstance inst(MakeData({0, 3}, {}, 1, 0.0, {}, {}));
  const StateSpace space = BuildStateSpace(inst, 1, 4);
  const std::vector<std::vector<DetectionId>> expected = {{}, {0}, {1}, {2}};
  EXPECT_EQ(AllStates(space), expected);
  EXPECT_EQ(space.max_cardinality(), 1);
}

TEST(BuildStateSpace, DefaultCap) { EXPECT_EQ(kDefaultStateCap, 50000); }

TEST(BuildStateSpace, CapOfOneKeepsOnlyTheEmptyState) {
  const ProblemInstance inst(MakeData({0, 3}, {}, 1, 0.0, {}, {}));
  EXPECT_EQ(BuildStateSpace(inst, 1, 1).size(), 1);
  EXPECT_THROW(BuildStateSpace(inst, 1, 0), std::invalid_argument);
}

TEST(BuildStateSpace, OrderingIsByCardinalityThenLexicographic) {
  const ProblemInstance inst(MakeData({0, 5}, {}, 1, 0.0, {}, {}));
  const StateSpace space = BuildStateSpace(inst, 1, 1000);
  ASSERT_EQ(space.size(), 32);
  for (int s = 1; s < space.size(); ++s) {
    const auto a = space.Members(s - 1);
    const auto b = space.Members(s);
    EXPECT_TRUE(a.size() < b.size() || (a.size() == b.size() && a < b));
  }
  // Two builds agree.
  EXPECT_EQ(AllStates(space), AllStates(BuildStateSpace(inst, 1, 1000)));
}

TEST(BuildStateSpace, EachSingletonAppearsOnce) {
  const ProblemInstance inst(MakeData({1, 6}, {}, 1, 0.0, {}, {}));
  const StateSpace space = BuildStateSpace(inst, 1, 30);
  for (DetectionId d : space.detections()) {
    int count = 0;
    for (int s = 0; s < space.size(); ++s) {
      if (space.cardinality(s) == 1 && space.Contains(s, d)) ++count;
    }
    EXPECT_EQ(count, 1);
  }
}

TEST(StateIndicator, Basics) {
  const ProblemInstance inst(MakeData({0, 2}, {}, 1, 0.0, {}, {}));
  const StateSpace space = BuildStateSpace(inst, 1, 10);
  EXPECT_FALSE(StateIndicator(space, 0, 0));
  EXPECT_FALSE(StateIndicator(space, 0, 1));
  EXPECT_TRUE(StateIndicator(space, 3, 0));
  EXPECT_FALSE(StateIndicator(space, 1, 1));
  EXPECT_THROW(StateIndicator(space, 4, 0), std::out_of_range);
  EXPECT_THROW(StateIndicator(space, 0, 7), std::out_of_range);
}

TEST(PsiTable, EmptyStateIsZero) {
  const ProblemInstance inst(
      MakeData({1, 2}, {}, 1, 3.0, {-1.0, -2.0, 4.0}, {{0, 1, -3.0}}));
  const StateSpace space = BuildStateSpace(inst, 1);
  const std::vector<double> lambda = {1.0, 2.0, 3.0};
  const std::vector<DetectionId> neck = {0};
  EXPECT_EQ(PsiTable(inst, 1, space, lambda, neck).psi[0], 0.0);
}

TEST(PsiTable, SingleDetectionWithNeckLink) {
  // Neck detection 0, part detection 1: θ¹=-3, λ=1, θ²(n,d)=-2.
  const ProblemInstance inst(
      MakeData({1, 1}, {}, 1, 0.0, {0.0, -3.0}, {{0, 1, -2.0}}));
  const StateSpace space = BuildStateSpace(inst, 1);
  const std::vector<double> lambda = {0.0, 1.0};
  const std::vector<DetectionId> neck = {0};
  EXPECT_DOUBLE_EQ(PsiTable(inst, 1, space, lambda, neck).psi[1], -4.0);
}

TEST(PsiTable, LinearInLambda) {
  const auto gen = GenerateInstance(GeneratorConfig{}, 11);
  const ProblemInstance& inst = gen.instance;
  const StateSpace space = BuildStateSpace(inst, 2);
  std::vector<double> lambda(inst.num_detections(), 0.5);
  const std::vector<DetectionId> neck = {inst.neck_detections()[0]};
  const auto before = PsiTable(inst, 2, space, lambda, neck).psi;
  const DetectionId d = space.detections()[1];
  lambda[d] += 2.5;
  const auto after = PsiTable(inst, 2, space, lambda, neck).psi;
  for (int s = 0; s < space.size(); ++s) {
    EXPECT_NEAR(after[s] - before[s], space.Contains(s, d) ? 2.5 : 0.0, 1e-12);
  }
}

// ψ recomputed from scratch: unary, every ordered intra pair, every neck
// link in both orders.
TEST(PsiTable, MatchesNaiveSumsOnRandomInstances) {
  for (int seed = 0; seed < 20; ++seed) {
    GeneratorConfig config;
    config.dets_per_part = 4;
    const auto gen = GenerateInstance(config, seed);
    const ProblemInstance& inst = gen.instance;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    std::vector<double> lambda(inst.num_detections());
    for (double& l : lambda) l = u(rng);
    std::vector<DetectionId> neck;
    for (DetectionId n : inst.neck_detections()) {
      if (rng() % 2) neck.push_back(n);
    }
    for (PartId r : inst.non_neck_parts()) {
      const StateSpace space = BuildStateSpace(inst, r);
      const auto psi = PsiTable(inst, r, space, lambda, neck).psi;
      for (int s = 0; s < space.size(); ++s) {
        const auto members = space.Members(s);
        double expected = 0.0;
        for (DetectionId a : members) {
          expected += inst.theta1(a) + lambda[a];
          for (DetectionId b : members) expected += inst.theta2(a, b);
          for (DetectionId n : neck) {
            expected += inst.theta2(n, a) + inst.theta2(a, n);
          }
        }
        EXPECT_NEAR(psi[s], expected, 1e-12);
      }
    }
  }
}

TEST(PhiValue, EmptyStatesGiveZero) {
  const ProblemInstance inst(
      MakeData({0, 1, 1}, {{1, 2}}, 1, 0.0, {}, {{0, 1, -7.0}}));
  const StateSpace parent = BuildStateSpace(inst, 1);
  const StateSpace child = BuildStateSpace(inst, 2);
  EXPECT_EQ(PhiValue(inst, parent, child, 0, 1), 0.0);
  EXPECT_EQ(PhiValue(inst, parent, child, 1, 0), 0.0);
  EXPECT_EQ(PhiValue(inst, parent, child, 1, 1), -7.0);
}

TEST(PhiValue, MatchesDoubleSumOnRandomPairs) {
  for (int seed = 0; seed < 10; ++seed) {
    GeneratorConfig config;
    config.num_parts = 3;
    config.dets_per_part = 3;
    const auto gen = GenerateInstance(config, seed);
    const ProblemInstance& inst = gen.instance;
    // Generated trees root at part 1 with part 2 as its child.
    const StateSpace parent = BuildStateSpace(inst, 1);
    const StateSpace child = BuildStateSpace(inst, 2);
    for (int a = 0; a < parent.size(); ++a) {
      for (int b = 0; b < child.size(); ++b) {
        double expected = 0.0;
        for (DetectionId d1 : parent.detections()) {
          for (DetectionId d2 : child.detections()) {
            for (const PairCost& pc : inst.data().theta2) {
              const bool fwd = pc.first == d1 && pc.second == d2;
              const bool bwd = pc.first == d2 && pc.second == d1;
              if ((fwd || bwd) && parent.Contains(a, d1) && child.Contains(b, d2)) {
                expected += pc.value;
              }
            }
          }
        }
        EXPECT_NEAR(PhiValue(inst, parent, child, a, b), expected, 1e-12);
      }
    }
  }
}

TEST(StateSpace, CachedSumsMatchNaive) {
  const auto gen = GenerateInstance(GeneratorConfig{}, 4);
  const StateSpace space = BuildStateSpace(gen.instance, 1);
  std::vector<double> w(space.num_detections());
  for (size_t i = 0; i < w.size(); ++i) w[i] = 0.37 * i - 1.1;
  const auto sums = space.SumOverStates(w);
  for (int s = 0; s < space.size(); ++s) {
    double expected = 0.0;
    for (int i = 0; i < space.num_detections(); ++i) {
      if ((space.mask(s) >> i) & 1u) expected += w[i];
    }
    EXPECT_NEAR(sums[s], expected, 1e-12);
    double intra = 0.0;
    for (DetectionId a : space.Members(s)) {
      for (DetectionId b : space.Members(s)) intra += gen.instance.theta2(a, b);
    }
    EXPECT_NEAR(space.intra_cost(s), intra, 1e-12);
  }
}

}  // namespace
}  // namespace mwsp
