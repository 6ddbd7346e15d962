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

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>

namespace mwsp {
namespace {

// A column of the standard-form problem: x[var] = offset + sign * column.
struct StdColumn {
  int var;
  double sign;
};

enum class ColumnKind { kStructural, kSlack, kArtificial };

class Tableau {
 public:
  Tableau(int rows, int cols)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * (cols + 1)) {}

  double& at(int r, int c) { return data_[static_cast<size_t>(r) * (cols_ + 1) + c]; }
  double at(int r, int c) const {
    return data_[static_cast<size_t>(r) * (cols_ + 1) + c];
  }
  double& rhs(int r) { return at(r, cols_); }
  double* row(int r) { return &data_[static_cast<size_t>(r) * (cols_ + 1)]; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void Pivot(int pr, int pc, std::vector<double>& reduced, double& objective) {
    double* p = row(pr);
    const double inv = 1.0 / p[pc];
    for (int c = 0; c <= cols_; ++c) p[c] *= inv;
    p[pc] = 1.0;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* q = row(r);
      const double f = q[pc];
      if (f == 0.0) continue;
      for (int c = 0; c <= cols_; ++c) q[c] -= f * p[c];
      q[pc] = 0.0;
    }
    const double f = reduced[pc];
    if (f != 0.0) {
      for (int c = 0; c < cols_; ++c) reduced[c] -= f * p[c];
      reduced[pc] = 0.0;
      objective -= f * p[cols_];
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

}  // namespace

int LpProblem::AddVariable(double cost, double lo, double hi) {
  objective.push_back(cost);
  lower.push_back(lo);
  upper.push_back(hi);
  for (auto& row : rows) row.push_back(0.0);
  return num_variables() - 1;
}

int LpProblem::AddRow(std::vector<double> coefficients, RowSense row_sense,
                      double value) {
  coefficients.resize(objective.size(), 0.0);
  rows.push_back(std::move(coefficients));
  row_senses.push_back(row_sense);
  rhs.push_back(value);
  return num_rows() - 1;
}

std::string ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal:
      return "optimal";
    case LpStatus::kInfeasible:
      return "infeasible";
    case LpStatus::kUnbounded:
      return "unbounded";
    case LpStatus::kIterationLimit:
      return "iteration_limit";
  }
  return "unknown";
}

namespace {

LpSolution Solve(const LpProblem& problem,
                 std::span<const std::vector<double>> secondary,
                 const LpOptions& options) {
  const int n = problem.num_variables();
  const int m = problem.num_rows();
  if (static_cast<int>(problem.row_senses.size()) != m ||
      static_cast<int>(problem.rhs.size()) != m) {
    throw std::invalid_argument("row sense / rhs count mismatch");
  }
  for (const auto& row : problem.rows) {
    if (static_cast<int>(row.size()) != n) {
      throw std::invalid_argument("row length does not match variable count");
    }
  }
  const bool has_bounds = !problem.lower.empty() || !problem.upper.empty();
  if (has_bounds && (static_cast<int>(problem.lower.size()) != n ||
                     static_cast<int>(problem.upper.size()) != n)) {
    throw std::invalid_argument("bound vector length mismatch");
  }
  auto lower = [&](int j) { return has_bounds ? problem.lower[j] : 0.0; };
  auto upper = [&](int j) { return has_bounds ? problem.upper[j] : kInfinity; };

  LpSolution solution;
  const double direction =
      problem.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;

  // Map every variable onto nonnegative standard columns.
  std::vector<StdColumn> columns;
  std::vector<double> offset(n, 0.0);
  std::vector<std::pair<int, double>> bound_rows;  // (column, bound)
  for (int j = 0; j < n; ++j) {
    const double lo = lower(j);
    const double hi = upper(j);
    if (lo > hi) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
    if (std::isfinite(lo)) {
      offset[j] = lo;
      columns.push_back({j, 1.0});
      if (std::isfinite(hi)) {
        bound_rows.emplace_back(static_cast<int>(columns.size()) - 1, hi - lo);
      }
    } else if (std::isfinite(hi)) {
      offset[j] = hi;
      columns.push_back({j, -1.0});
    } else {
      columns.push_back({j, 1.0});
      columns.push_back({j, -1.0});
    }
  }
  const int num_structural = static_cast<int>(columns.size());
  const int total_rows = m + static_cast<int>(bound_rows.size());

  // Row data in standard orientation (rhs >= 0).
  std::vector<RowSense> sense(total_rows);
  std::vector<double> flip(total_rows, 1.0);
  std::vector<std::vector<double>> a(total_rows,
                                     std::vector<double>(num_structural, 0.0));
  std::vector<double> b(total_rows, 0.0);
  for (int i = 0; i < m; ++i) {
    double rhs = problem.rhs[i];
    for (int k = 0; k < num_structural; ++k) {
      a[i][k] = problem.rows[i][columns[k].var] * columns[k].sign;
    }
    for (int j = 0; j < n; ++j) rhs -= problem.rows[i][j] * offset[j];
    b[i] = rhs;
    sense[i] = problem.row_senses[i];
  }
  for (size_t t = 0; t < bound_rows.size(); ++t) {
    const int i = m + static_cast<int>(t);
    a[i][bound_rows[t].first] = 1.0;
    b[i] = bound_rows[t].second;
    sense[i] = RowSense::kLessEqual;
  }
  for (int i = 0; i < total_rows; ++i) {
    if (b[i] < 0.0) {
      flip[i] = -1.0;
      b[i] = -b[i];
      for (double& v : a[i]) v = -v;
      if (sense[i] == RowSense::kLessEqual) {
        sense[i] = RowSense::kGreaterEqual;
      } else if (sense[i] == RowSense::kGreaterEqual) {
        sense[i] = RowSense::kLessEqual;
      }
    }
  }

  // Column layout: structural, slack/surplus, artificial.
  std::vector<ColumnKind> kind(num_structural, ColumnKind::kStructural);
  std::vector<int> identity_col(total_rows, -1);
  std::vector<int> basis(total_rows, -1);
  std::vector<std::pair<int, double>> slack_cols;  // (row, coefficient)
  for (int i = 0; i < total_rows; ++i) {
    if (sense[i] == RowSense::kLessEqual) {
      slack_cols.emplace_back(i, 1.0);
    } else if (sense[i] == RowSense::kGreaterEqual) {
      slack_cols.emplace_back(i, -1.0);
    }
  }
  const int num_slack = static_cast<int>(slack_cols.size());
  int num_artificial = 0;
  for (int i = 0; i < total_rows; ++i) {
    if (sense[i] != RowSense::kLessEqual) ++num_artificial;
  }
  const int num_cols = num_structural + num_slack + num_artificial;
  Tableau tab(total_rows, num_cols);
  for (int i = 0; i < total_rows; ++i) {
    for (int k = 0; k < num_structural; ++k) tab.at(i, k) = a[i][k];
    tab.rhs(i) = b[i];
  }
  for (int s = 0; s < num_slack; ++s) {
    const auto [i, coef] = slack_cols[s];
    const int col = num_structural + s;
    tab.at(i, col) = coef;
    kind.push_back(ColumnKind::kSlack);
    if (coef > 0.0) {
      identity_col[i] = col;
      basis[i] = col;
    }
  }
  {
    int col = num_structural + num_slack;
    for (int i = 0; i < total_rows; ++i) {
      if (sense[i] == RowSense::kLessEqual) continue;
      tab.at(i, col) = 1.0;
      kind.push_back(ColumnKind::kArtificial);
      identity_col[i] = col;
      basis[i] = col;
      ++col;
    }
  }

  std::vector<double> reduced(num_cols, 0.0);
  double objective = 0.0;  // -(current objective) in tableau convention
  int iterations = 0;
  // Nonbasic columns pinned at zero by an earlier lexicographic stage.
  std::vector<char> frozen(num_cols, 0);

  // Runs Bland's-rule simplex on the current reduced costs. Returns the
  // status of the phase.
  auto run_phase = [&](bool allow_artificial) -> LpStatus {
    while (true) {
      int enter = -1;
      for (int c = 0; c < num_cols; ++c) {
        if (!allow_artificial && kind[c] == ColumnKind::kArtificial) continue;
        if (frozen[c]) continue;
        if (reduced[c] < -options.pivot_tolerance) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return LpStatus::kOptimal;
      int leave = -1;
      double best = kInfinity;
      for (int r = 0; r < total_rows; ++r) {
        const double coef = tab.at(r, enter);
        if (coef <= options.pivot_tolerance) continue;
        const double ratio = tab.rhs(r) / coef;
        if (leave < 0 || ratio < best - 1e-12) {
          best = ratio;
          leave = r;
        } else if (ratio <= best + 1e-12 && basis[r] < basis[leave]) {
          leave = r;
        }
      }
      if (leave < 0) return LpStatus::kUnbounded;
      if (++iterations > options.max_iterations) return LpStatus::kIterationLimit;
      tab.Pivot(leave, enter, reduced, objective);
      basis[leave] = enter;
    }
  };

  auto price_out = [&](const std::vector<double>& cost) {
    reduced = cost;
    objective = 0.0;
    for (int r = 0; r < total_rows; ++r) {
      const double cb = cost[basis[r]];
      if (cb == 0.0) continue;
      const double* row = tab.row(r);
      for (int c = 0; c < num_cols; ++c) reduced[c] -= cb * row[c];
      objective -= cb * row[num_cols];
    }
  };

  if (num_artificial > 0) {
    std::vector<double> phase1(num_cols, 0.0);
    for (int c = 0; c < num_cols; ++c) {
      if (kind[c] == ColumnKind::kArtificial) phase1[c] = 1.0;
    }
    price_out(phase1);
    const LpStatus status = run_phase(true);
    if (status == LpStatus::kIterationLimit) {
      solution.status = status;
      solution.iterations = iterations;
      return solution;
    }
    double scale = 1.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    if (-objective > options.feasibility_tolerance * scale) {
      solution.status = LpStatus::kInfeasible;
      solution.iterations = iterations;
      return solution;
    }
    // Drive zero-valued artificials out of the basis where possible.
    for (int r = 0; r < total_rows; ++r) {
      if (kind[basis[r]] != ColumnKind::kArtificial) continue;
      int col = -1;
      double best = options.pivot_tolerance;
      for (int c = 0; c < num_structural + num_slack; ++c) {
        if (std::abs(tab.at(r, c)) > best) {
          best = std::abs(tab.at(r, c));
          col = c;
        }
      }
      if (col >= 0) {
        tab.Pivot(r, col, reduced, objective);
        basis[r] = col;
      }
    }
  }

  auto standard_cost = [&](std::span<const double> cost) {
    std::vector<double> out(num_cols, 0.0);
    for (int k = 0; k < num_structural; ++k) {
      out[k] = direction * cost[columns[k].var] * columns[k].sign;
    }
    return out;
  };
  std::vector<double> phase2 = standard_cost(problem.objective);
  price_out(phase2);
  LpStatus status = run_phase(false);
  for (size_t stage = 0;
       stage < secondary.size() && status == LpStatus::kOptimal; ++stage) {
    if (static_cast<int>(secondary[stage].size()) != n) {
      throw std::invalid_argument("objective length does not match variable count");
    }
    // Every point of the current optimal face keeps these columns at zero.
    for (int c = 0; c < num_cols; ++c) {
      if (reduced[c] > options.pivot_tolerance) frozen[c] = 1;
    }
    phase2 = standard_cost(secondary[stage]);
    price_out(phase2);
    status = run_phase(false);
  }
  solution.iterations = iterations;
  solution.status = status;
  if (status != LpStatus::kOptimal) return solution;

  std::vector<double> value(num_cols, 0.0);
  for (int r = 0; r < total_rows; ++r) value[basis[r]] = tab.rhs(r);
  solution.primal = offset;
  for (int k = 0; k < num_structural; ++k) {
    solution.primal[columns[k].var] += columns[k].sign * value[k];
  }
  solution.objective = 0.0;
  for (int j = 0; j < n; ++j) {
    solution.objective += problem.objective[j] * solution.primal[j];
  }
  solution.duals.assign(m, 0.0);
  for (int i = 0; i < m; ++i) {
    const int col = identity_col[i];
    double pi = 0.0;
    for (int r = 0; r < total_rows; ++r) pi += phase2[basis[r]] * tab.at(r, col);
    // pi is the multiplier of the internal minimization; undo the row flip
    // and report with the sign convention documented in the header.
    solution.duals[i] = -flip[i] * pi;
  }
  return solution;
}

}  // namespace

LpSolution SolveLp(const LpProblem& problem, const LpOptions& options) {
  return Solve(problem, {}, options);
}

LpSolution SolveLpLexicographic(const LpProblem& problem,
                                std::span<const std::vector<double>> secondary,
                                const LpOptions& options) {
  return Solve(problem, secondary, options);
}

IlpSolution SolveBinaryIlp(const LpProblem& problem,
                           std::span<const int> binary_vars,
                           const IlpOptions& options) {
  IlpSolution result;
  LpProblem work = problem;
  const int n = work.num_variables();
  if (work.lower.empty()) work.lower.assign(n, 0.0);
  if (work.upper.empty()) work.upper.assign(n, kInfinity);
  for (int j : binary_vars) {
    if (j < 0 || j >= n) throw std::invalid_argument("binary index out of range");
    work.lower[j] = std::max(work.lower[j], 0.0);
    work.upper[j] = std::min(work.upper[j], 1.0);
  }
  const double direction =
      problem.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  double incumbent = kInfinity;  // in minimization orientation
  bool found = false;
  bool limited = false;

  std::function<void()> dive = [&]() {
    if (result.nodes >= options.max_nodes) {
      result.node_limit_hit = true;
      return;
    }
    ++result.nodes;
    LpSolution lp = SolveLp(work, options.lp);
    if (lp.status == LpStatus::kIterationLimit) limited = true;
    if (lp.status != LpStatus::kOptimal) return;
    const double value = direction * lp.objective;
    if (found && value >= incumbent - 1e-9) return;
    int branch = -1;
    double most = options.integrality_tolerance;
    for (int j : binary_vars) {
      const double frac = std::abs(lp.primal[j] - std::round(lp.primal[j]));
      if (frac > most) {
        most = frac;
        branch = j;
      }
    }
    if (branch < 0) {
      for (int j : binary_vars) lp.primal[j] = std::round(lp.primal[j]);
      lp.objective = 0.0;
      for (int j = 0; j < n; ++j) lp.objective += work.objective[j] * lp.primal[j];
      incumbent = direction * lp.objective;
      result.solution = std::move(lp);
      found = true;
      return;
    }
    const double lo = work.lower[branch];
    const double hi = work.upper[branch];
    const bool up_first = lp.primal[branch] >= 0.5;
    for (int side = 0; side < 2; ++side) {
      const bool up = (side == 0) == up_first;
      work.lower[branch] = up ? 1.0 : lo;
      work.upper[branch] = up ? hi : 0.0;
      dive();
    }
    work.lower[branch] = lo;
    work.upper[branch] = hi;
  };
  dive();
  if (!found) {
    result.solution.status =
        limited ? LpStatus::kIterationLimit : LpStatus::kInfeasible;
  }
  return result;
}

}  // namespace mwsp
