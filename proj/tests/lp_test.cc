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

#include "mwsp/lp.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

namespace mwsp {
namespace {

// Checks primal feasibility, dual sign conventions, dual feasibility and
// complementary slackness for a problem whose variables are all x ≥ 0 with
// no finite upper bounds.
void ExpectCertified(const LpProblem& p, const LpSolution& s) {
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  const int n = p.num_variables();
  const int m = p.num_rows();
  const double sign = p.sense == ObjectiveSense::kMinimize ? 1.0 : -1.0;
  for (int j = 0; j < n; ++j) EXPECT_GE(s.primal[j], -1e-7);
  double dual_obj = 0.0;
  for (int i = 0; i < m; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) lhs += p.rows[i][j] * s.primal[j];
    const double y = s.duals[i];
    switch (p.row_senses[i]) {
      case RowSense::kLessEqual:
        EXPECT_LE(lhs, p.rhs[i] + 1e-7);
        EXPECT_GE(y, -1e-9);
        break;
      case RowSense::kGreaterEqual:
        EXPECT_GE(lhs, p.rhs[i] - 1e-7);
        EXPECT_LE(y, 1e-9);
        break;
      case RowSense::kEqual:
        EXPECT_NEAR(lhs, p.rhs[i], 1e-7);
        break;
    }
    EXPECT_NEAR(y * (lhs - p.rhs[i]), 0.0, 1e-6);
    dual_obj += p.rhs[i] * y;
  }
  // With reported duals y, the internal minimization's multipliers are
  // -y, so c_min - Aᵀ(-y) ≥ 0 with c_min = sign · c.
  for (int j = 0; j < n; ++j) {
    double reduced = sign * p.objective[j];
    for (int i = 0; i < m; ++i) reduced += p.rows[i][j] * s.duals[i];
    EXPECT_GE(reduced, -1e-6);
    EXPECT_NEAR(reduced * s.primal[j], 0.0, 1e-6);
  }
  const double expected_dual = sign > 0 ? -dual_obj : dual_obj;
  EXPECT_NEAR(s.objective, expected_dual, 1e-6 * (1.0 + std::abs(s.objective)));
}

TEST(SolveLp, EmptyConstraintMaximization) {
  LpProblem p;
  p.sense = ObjectiveSense::kMaximize;
  p.AddVariable(-1.0);
  const LpSolution s = SolveLp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_EQ(s.primal[0], 0.0);
  EXPECT_EQ(s.objective, 0.0);
}

TEST(SolveLp, OneVariableWithDual) {
  LpProblem p;
  p.AddVariable(-1.0);
  p.AddRow({1.0}, RowSense::kLessEqual, 1.0);
  const LpSolution s = SolveLp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.primal[0], 1.0, 1e-12);
  EXPECT_NEAR(s.duals[0], 1.0, 1e-12);
  EXPECT_NEAR(s.objective, -1.0, 1e-12);
  ExpectCertified(p, s);
}

TEST(SolveLp, DetectsInfeasibleAndUnbounded) {
  LpProblem infeasible;
  infeasible.AddVariable(1.0);
  infeasible.AddRow({1.0}, RowSense::kLessEqual, -1.0);
  EXPECT_EQ(SolveLp(infeasible).status, LpStatus::kInfeasible);

  LpProblem unbounded;
  unbounded.AddVariable(-1.0);
  unbounded.AddRow({-1.0}, RowSense::kLessEqual, 1.0);
  EXPECT_EQ(SolveLp(unbounded).status, LpStatus::kUnbounded);
}

TEST(SolveLp, DimensionMismatchThrows) {
  LpProblem p;
  p.AddVariable(1.0);
  p.rows.push_back({1.0, 2.0});
  p.row_senses.push_back(RowSense::kLessEqual);
  p.rhs.push_back(1.0);
  EXPECT_THROW(SolveLp(p), std::invalid_argument);
}

TEST(SolveLp, FreeAndBoundedVariables) {
  // min x + y, x free, -2 ≤ y ≤ 3, x - y ≥ -1, x + y ≥ -4.
  LpProblem p;
  p.AddVariable(1.0, -kInfinity, kInfinity);
  p.AddVariable(1.0, -2.0, 3.0);
  p.AddRow({1.0, -1.0}, RowSense::kGreaterEqual, -1.0);
  p.AddRow({1.0, 1.0}, RowSense::kGreaterEqual, -4.0);
  const LpSolution s = SolveLp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, -4.0, 1e-9);
  EXPECT_GE(s.primal[1], -2.0 - 1e-9);
  EXPECT_LE(s.primal[1], 3.0 + 1e-9);
}

TEST(SolveLp, EqualityRows) {
  // max 2x + 3y s.t. x + y = 4, x ≤ 3 → y = 4, objective 12.
  LpProblem p;
  p.sense = ObjectiveSense::kMaximize;
  p.AddVariable(2.0);
  p.AddVariable(3.0);
  p.AddRow({1.0, 1.0}, RowSense::kEqual, 4.0);
  p.AddRow({1.0, 0.0}, RowSense::kLessEqual, 3.0);
  const LpSolution s = SolveLp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 12.0, 1e-9);
  ExpectCertified(p, s);
}

// Vertex enumeration: every choice of n tight constraints among the rows
// and the x ≥ 0 bounds, solved by Gaussian elimination.
double VertexOracle(const LpProblem& p) {
  const int n = p.num_variables();
  const int m = p.num_rows();
  std::vector<std::vector<double>> a = p.rows;
  std::vector<double> b = p.rhs;
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    a.push_back(e);
    b.push_back(0.0);
  }
  const int total = m + n;
  const double sign = p.sense == ObjectiveSense::kMinimize ? 1.0 : -1.0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    std::vector<std::vector<double>> mat(n, std::vector<double>(n + 1));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) mat[i][j] = a[pick[i]][j];
      mat[i][n] = b[pick[i]];
    }
    bool singular = false;
    for (int c = 0; c < n && !singular; ++c) {
      int piv = c;
      for (int r = c + 1; r < n; ++r) {
        if (std::abs(mat[r][c]) > std::abs(mat[piv][c])) piv = r;
      }
      if (std::abs(mat[piv][c]) < 1e-12) {
        singular = true;
        break;
      }
      std::swap(mat[piv], mat[c]);
      for (int r = 0; r < n; ++r) {
        if (r == c) continue;
        const double f = mat[r][c] / mat[c][c];
        for (int k = c; k <= n; ++k) mat[r][k] -= f * mat[c][k];
      }
    }
    if (!singular) {
      std::vector<double> x(n);
      for (int i = 0; i < n; ++i) x[i] = mat[i][n] / mat[i][i];
      bool feasible = true;
      for (int i = 0; i < total && feasible; ++i) {
        double lhs = 0.0;
        for (int j = 0; j < n; ++j) lhs += a[i][j] * x[j];
        if (i >= m) {
          feasible = lhs >= -1e-9;
        } else if (p.row_senses[i] == RowSense::kLessEqual) {
          feasible = lhs <= b[i] + 1e-9;
        } else if (p.row_senses[i] == RowSense::kGreaterEqual) {
          feasible = lhs >= b[i] - 1e-9;
        } else {
          feasible = std::abs(lhs - b[i]) <= 1e-9;
        }
      }
      if (feasible) {
        double obj = 0.0;
        for (int j = 0; j < n; ++j) obj += p.objective[j] * x[j];
        best = std::min(best, sign * obj);
      }
    }
    int i = n - 1;
    while (i >= 0 && pick[i] == total - n + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return sign * best;
}

class RandomLp : public ::testing::TestWithParam<int> {};

TEST_P(RandomLp, MatchesVertexEnumeration) {
  std::mt19937 rng(GetParam());
  std::uniform_real_distribution<double> coef(-5.0, 5.0);
  std::uniform_real_distribution<double> pos(0.5, 5.0);
  LpProblem p;
  p.sense = GetParam() % 2 ? ObjectiveSense::kMaximize : ObjectiveSense::kMinimize;
  for (int j = 0; j < 5; ++j) p.AddVariable(coef(rng));
  // A box keeps the problem bounded; the other rows are random.
  for (int j = 0; j < 5; ++j) {
    std::vector<double> row(5, 0.0);
    row[j] = 1.0;
    p.AddRow(row, RowSense::kLessEqual, pos(rng) * 2.0);
  }
  for (int i = 0; i < 4; ++i) {
    std::vector<double> row(5);
    for (double& v : row) v = coef(rng);
    const int kind = rng() % 3;
    if (kind == 0) {
      p.AddRow(row, RowSense::kLessEqual, pos(rng));
    } else if (kind == 1) {
      p.AddRow(row, RowSense::kGreaterEqual, -pos(rng));
    } else {
      p.AddRow(row, RowSense::kLessEqual, pos(rng) * 3.0);
    }
  }
  const LpSolution s = SolveLp(p);
  ASSERT_EQ(s.status, LpStatus::kOptimal);
  EXPECT_NEAR(s.objective, VertexOracle(p), 1e-7);
  ExpectCertified(p, s);
  EXPECT_LT(s.iterations, LpOptions{}.max_iterations);
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomLp, ::testing::Range(0, 40));

TEST(SolveLpLexicographic, PicksPointOnOptimalFace) {
  // min x + y s.t. x + y ≥ 1 is optimal on a segment.
  LpProblem p;
  p.AddVariable(1.0, 0.0, 2.0);
  p.AddVariable(1.0, 0.0, 2.0);
  p.AddRow({1.0, 1.0}, RowSense::kGreaterEqual, 1.0);
  const std::vector<std::vector<double>> x_first = {{1.0, 0.0}};
  const LpSolution a = SolveLpLexicographic(p, x_first);
  ASSERT_EQ(a.status, LpStatus::kOptimal);
  EXPECT_NEAR(a.primal[0], 0.0, 1e-12);
  EXPECT_NEAR(a.primal[1], 1.0, 1e-12);
  EXPECT_NEAR(a.objective, 1.0, 1e-12);
  const std::vector<std::vector<double>> y_first = {{0.0, 1.0}};
  const LpSolution b = SolveLpLexicographic(p, y_first);
  EXPECT_NEAR(b.primal[0], 1.0, 1e-12);
  EXPECT_NEAR(b.primal[1], 0.0, 1e-12);
  // A secondary objective cannot trade away primary optimality.
  const std::vector<std::vector<double>> push_up = {{-1.0, 0.0}};
  const LpSolution c = SolveLpLexicographic(p, push_up);
  EXPECT_NEAR(c.primal[0], 1.0, 1e-12);
  EXPECT_NEAR(c.objective, 1.0, 1e-12);
}

// Oracle: solve each stage separately, pinning earlier stage values with
// explicit rows.
std::vector<double> SequentialLexOracle(LpProblem p,
                                        const std::vector<std::vector<double>>& stages) {
  LpSolution s = SolveLp(p);
  std::vector<double> cost = p.objective;
  for (const auto& next : stages) {
    p.AddRow(cost, RowSense::kLessEqual, s.objective + 1e-10);
    p.objective = next;
    cost = next;
    s = SolveLp(p);
  }
  return s.primal;
}

class RandomLexCover : public ::testing::TestWithParam<int> {};

TEST_P(RandomLexCover, MatchesSequentialStages) {
  std::mt19937 rng(GetParam());
  const int n = 6;
  LpProblem p;
  for (int j = 0; j < n; ++j) p.AddVariable(1.0, 0.0, 2.0 + rng() % 2);
  for (int i = 0; i < 8; ++i) {
    std::vector<double> row(n, 0.0);
    for (double& v : row) v = rng() % 2;
    row[rng() % n] = 1.0;
    p.AddRow(row, RowSense::kGreaterEqual, 1.0 + rng() % 2);
  }
  std::vector<std::vector<double>> stages;
  for (int k = 0; k + 1 < n; ++k) {
    stages.emplace_back(n, 0.0);
    stages.back()[k] = 1.0;
  }
  const LpSolution lex = SolveLpLexicographic(p, stages);
  ASSERT_EQ(lex.status, LpStatus::kOptimal);
  EXPECT_NEAR(lex.objective, SolveLp(p).objective, 1e-9);
  const auto expect = SequentialLexOracle(p, stages);
  for (int j = 0; j < n; ++j) EXPECT_NEAR(lex.primal[j], expect[j], 1e-7) << j;
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomLexCover, ::testing::Range(0, 30));

TEST(SolveBinaryIlp, IntegralRelaxationNeedsNoBranching) {
  LpProblem p;
  p.AddVariable(-1.0, 0.0, 1.0);
  p.AddVariable(-2.0, 0.0, 1.0);
  p.AddRow({1.0, 0.0}, RowSense::kLessEqual, 1.0);
  const std::vector<int> bin = {0, 1};
  const IlpSolution s = SolveBinaryIlp(p, bin);
  ASSERT_EQ(s.solution.status, LpStatus::kOptimal);
  EXPECT_EQ(s.nodes, 1);
  EXPECT_NEAR(s.solution.objective, -3.0, 1e-9);
}

TEST(SolveBinaryIlp, OverlappingColumnsPickTheCheapest) {
  // Three columns over detections {0,1}, {1,2}, {0,2}: every pair conflicts.
  LpProblem p;
  for (double c : {-5.0, -4.0, -3.0}) p.AddVariable(c, 0.0, 1.0);
  p.AddRow({1.0, 0.0, 1.0}, RowSense::kLessEqual, 1.0);
  p.AddRow({1.0, 1.0, 0.0}, RowSense::kLessEqual, 1.0);
  p.AddRow({0.0, 1.0, 1.0}, RowSense::kLessEqual, 1.0);
  const std::vector<int> bin = {0, 1, 2};
  const IlpSolution s = SolveBinaryIlp(p, bin);
  ASSERT_EQ(s.solution.status, LpStatus::kOptimal);
  // Exhaustive over 2³ assignments.
  double best = 0.0;
  for (int mask = 0; mask < 8; ++mask) {
    if (__builtin_popcount(mask) > 1) continue;
    double v = 0.0;
    for (int k = 0; k < 3; ++k) v += (mask >> k & 1) * p.objective[k];
    best = std::min(best, v);
  }
  EXPECT_NEAR(s.solution.objective, best, 1e-9);
  EXPECT_NEAR(s.solution.primal[0], 1.0, 1e-9);
  EXPECT_NEAR(s.solution.primal[1], 0.0, 1e-9);
  EXPECT_NEAR(s.solution.primal[2], 0.0, 1e-9);
}

TEST(SolveBinaryIlp, EmptyPool) {
  LpProblem p;
  const IlpSolution s = SolveBinaryIlp(p, {});
  ASSERT_EQ(s.solution.status, LpStatus::kOptimal);
  EXPECT_EQ(s.solution.objective, 0.0);
  EXPECT_TRUE(s.solution.primal.empty());
}

TEST(SolveBinaryIlp, InfeasibleReported) {
  LpProblem p;
  p.AddVariable(1.0, 0.0, 1.0);
  p.AddRow({2.0}, RowSense::kEqual, 1.0);
  const std::vector<int> bin = {0};
  EXPECT_EQ(SolveBinaryIlp(p, bin).solution.status, LpStatus::kInfeasible);
}

class RandomPacking : public ::testing::TestWithParam<int> {};

// Random set packing with up to 20 columns against exhaustive search.
TEST_P(RandomPacking, MatchesExhaustiveSearch) {
  std::mt19937 rng(GetParam());
  const int cols = 8 + GetParam() % 13;
  const int rows = 6;
  std::uniform_real_distribution<double> cost(-6.0, 1.0);
  LpProblem p;
  std::vector<int> masks(cols);
  for (int c = 0; c < cols; ++c) {
    p.AddVariable(cost(rng), 0.0, 1.0);
    masks[c] = 1 + rng() % ((1 << rows) - 1);
  }
  for (int r = 0; r < rows; ++r) {
    std::vector<double> row(cols);
    for (int c = 0; c < cols; ++c) row[c] = (masks[c] >> r) & 1;
    p.AddRow(row, RowSense::kLessEqual, 1.0);
  }
  std::vector<int> bin(cols);
  for (int c = 0; c < cols; ++c) bin[c] = c;
  const IlpSolution s = SolveBinaryIlp(p, bin);
  ASSERT_EQ(s.solution.status, LpStatus::kOptimal);
  double best = 0.0;
  for (long pick = 0; pick < (1L << cols); ++pick) {
    int used = 0;
    double v = 0.0;
    bool ok = true;
    for (int c = 0; c < cols && ok; ++c) {
      if (!((pick >> c) & 1)) continue;
      ok = (used & masks[c]) == 0;
      used |= masks[c];
      v += p.objective[c];
    }
    if (ok) best = std::min(best, v);
  }
  EXPECT_NEAR(s.solution.objective, best, 1e-7);
  for (double x : s.solution.primal) {
    EXPECT_NEAR(x, std::round(x), 1e-6);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, RandomPacking, ::testing::Range(0, 20));

}  // namespace
}  // namespace mwsp
