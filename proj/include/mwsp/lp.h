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

#ifndef MWSP_LP_H_
#define MWSP_LP_H_

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace mwsp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class ObjectiveSense { kMinimize, kMaximize };
enum class RowSense { kLessEqual, kEqual, kGreaterEqual };

// A dense LP: optimize c·x subject to rows (sense) rhs and lower <= x <=
// upper. Lower bounds may be -inf and upper bounds +inf.
struct LpProblem {
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  std::vector<double> objective;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> row_senses;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  int num_variables() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int AddVariable(double cost, double lo = 0.0, double hi = kInfinity);
  // `coefficients` is resized to num_variables().
  int AddRow(std::vector<double> coefficients, RowSense sense, double value);
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

std::string ToString(LpStatus status);

// Duals are reported so that a binding <= row has a nonnegative multiplier
// and a binding >= row a nonpositive one, for either objective sense. With
// only x >= 0 bounds the dual objective is b·y for maximization and -b·y for
// minimization.
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> primal;
  std::vector<double> duals;
  double objective = 0.0;
  int iterations = 0;
};

struct LpOptions {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-7;
  int max_iterations = 200000;
};

// Two-phase dense tableau simplex with Bland's rule. Throws
// std::invalid_argument when dimensions are inconsistent.
LpSolution SolveLp(const LpProblem& problem, const LpOptions& options = {});

// Optimizes `problem.objective`, then each `secondary` objective in turn
// over the optimal face of the ones before it. `objective` in the result is
// the primary value; duals belong to the last stage.
LpSolution SolveLpLexicographic(const LpProblem& problem,
                                std::span<const std::vector<double>> secondary,
                                const LpOptions& options = {});

struct IlpOptions {
  LpOptions lp;
  double integrality_tolerance = 1e-6;
  long max_nodes = 1000000;
};

struct IlpSolution {
  LpSolution solution;
  long nodes = 0;
  bool node_limit_hit = false;
};

// Depth-first branch and bound over `binary_vars` (forced into [0, 1]); the
// remaining variables stay continuous.
IlpSolution SolveBinaryIlp(const LpProblem& problem,
                           std::span<const int> binary_vars,
                           const IlpOptions& options = {});

}  // namespace mwsp

#endif  // MWSP_LP_H_
