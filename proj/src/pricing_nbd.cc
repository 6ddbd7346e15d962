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

#include "mwsp/pricing_nbd.h"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mwsp/lp.h"

namespace mwsp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// State constraints with b at or below this are already met at δ⁴ = 0.
constexpr double kFilterThreshold = 1e-12;
// Q below this is treated as zero and its δ⁴ is fixed.
constexpr double kZeroCapacity = 1e-15;
constexpr int kConstraintsPerRound = 8;

int ArgMin(std::span<const double> v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] < v[best]) best = i;
  }
  return best;
}

std::vector<double> MaxCut(const RowPool& pool, int parent_size) {
  std::vector<double> best(parent_size, -kInf);
  for (const BendersRow& row : pool) {
    const double offset = row.offset();
    const auto& integrals = row.core->parent_integrals;
    for (int h = 0; h < parent_size; ++h) {
      best[h] = std::max(best[h], offset + integrals[h]);
    }
  }
  return best;
}

// Rebuilds the row from δ⁴ by splitting each δ⁴_d across parent detections
// in proportion to their share of Q_d.
BendersRow RowFromDelta4(const PricingModel& model, PartId part,
                         int parent_state, const CompressedRowLp& lp,
                         std::span<const double> delta4,
                         std::span<const double> mu_star_minus) {
  const PartId p = model.tree.parent[part];
  const EdgeCoupling& w = model.couplings[part];
  const std::uint64_t hat = model.spaces[p].mask(parent_state);
  const int np = w.parent_size();
  const int nc = w.child_size();
  std::vector<double> parent_coeffs(np, 0.0);
  std::vector<double> own_coeffs(nc, 0.0);
  double sum_delta1 = 0.0;
  for (int j = 0; j < nc; ++j) {
    own_coeffs[j] = delta4[j] + lp.negative_sums[j];
    if (lp.q[j] <= kZeroCapacity || delta4[j] == 0.0) continue;
    const double scale = delta4[j] / lp.q[j];
    for (int i = 0; i < np; ++i) {
      const double wij = w.at(i, j);
      if ((hat >> i) & 1u) {
        const double d1 = scale * std::max(0.0, wij);
        parent_coeffs[i] += d1;
        sum_delta1 += d1;
      } else {
        parent_coeffs[i] -= scale * -std::min(0.0, wij);
      }
    }
  }
  BendersRow row;
  row.core = MakeRowCore(model, part, std::move(parent_coeffs),
                         std::move(own_coeffs), sum_delta1);
  row.delta0 = RefreshedDelta0(*row.core, mu_star_minus);
  return row;
}

// Minimizes Σ δ⁴ over the given state rows. With `lexicographic`, then
// minimizes δ⁴_{active[0]}, δ⁴_{active[1]}, ... in turn over that optimal
// face. The face is often not a single point; pinning one makes the result
// independent of which rows are present, as long as the omitted rows hold.
std::vector<double> SolveCoveringLp(const CompressedRowLp& lp,
                                    const StateSpace& own,
                                    std::span<const int> states,
                                    std::span<const int> active,
                                    bool lexicographic) {
  const int n = static_cast<int>(active.size());
  LpProblem base;
  for (int j : active) base.AddVariable(0.0, 0.0, lp.q[j]);
  for (int s : states) {
    std::vector<double> coeffs(n, 0.0);
    const std::uint64_t mask = own.mask(s);
    for (int k = 0; k < n; ++k) {
      if ((mask >> active[k]) & 1u) coeffs[k] = 1.0;
    }
    base.AddRow(std::move(coeffs), RowSense::kGreaterEqual, lp.b[s]);
  }
  std::fill(base.objective.begin(), base.objective.end(), 1.0);
  std::vector<std::vector<double>> stages;
  if (lexicographic) {
    for (int k = 0; k + 1 < n; ++k) {
      stages.emplace_back(n, 0.0);
      stages.back()[k] = 1.0;
    }
  }
  const LpSolution sol = SolveLpLexicographic(base, stages);
  if (sol.status != LpStatus::kOptimal) {
    throw std::logic_error("row generation LP is " + ToString(sol.status));
  }
  std::vector<double> delta4(lp.q.size(), 0.0);
  for (int k = 0; k < n; ++k) {
    delta4[active[k]] = std::clamp(sol.primal[k], 0.0, lp.q[active[k]]);
  }
  return delta4;
}

std::vector<int> ActiveVariables(const CompressedRowLp& lp) {
  std::vector<int> active;
  for (int j = 0; j < static_cast<int>(lp.q.size()); ++j) {
    if (lp.q[j] > kZeroCapacity) active.push_back(j);
  }
  return active;
}

}  // namespace

PartId SelectRoot(const ProblemInstance& instance) {
  PartId best = kNoPart;
  for (PartId r : instance.non_neck_parts()) {
    if (best == kNoPart ||
        instance.detections_of(r).size() > instance.detections_of(best).size()) {
      best = r;
    }
  }
  return best;
}

std::shared_ptr<const RowCore> MakeRowCore(const PricingModel& model,
                                           PartId part,
                                           std::vector<double> parent_coeffs,
                                           std::vector<double> own_coeffs,
                                           double sum_delta1) {
  auto core = std::make_shared<RowCore>();
  core->part = part;
  core->sum_delta1 = sum_delta1;
  core->parent_integrals =
      model.spaces[model.tree.parent[part]].SumOverStates(parent_coeffs);
  core->own_integrals = model.spaces[part].SumOverStates(own_coeffs);
  core->parent_coeffs = std::move(parent_coeffs);
  core->own_coeffs = std::move(own_coeffs);
  return core;
}

double RefreshedDelta0(const RowCore& core,
                       std::span<const double> mu_star_minus) {
  double best = kInf;
  const auto& c = core.own_integrals;
  for (size_t s = 0; s < c.size(); ++s) {
    best = std::min(best, mu_star_minus[s] + c[s]);
  }
  return -best;
}

int RefreshOffsets(RowPool& pool, std::span<const double> mu_star_minus) {
  for (BendersRow& row : pool) {
    row.delta0 = RefreshedDelta0(*row.core, mu_star_minus);
  }
  return static_cast<int>(pool.size());
}

std::vector<double> MuStarMinus(const PricingModel& model, PartId part,
                                const RowPools& pools,
                                std::span<const double> psi,
                                double empty_pool_value) {
  std::vector<double> mu(psi.begin(), psi.end());
  for (PartId c : model.tree.children[part]) {
    if (pools[c].empty()) {
      for (double& v : mu) v += empty_pool_value;
      continue;
    }
    const auto best = MaxCut(pools[c], static_cast<int>(mu.size()));
    for (size_t s = 0; s < mu.size(); ++s) mu[s] += best[s];
  }
  return mu;
}

CompressedRowLp BuildCompressedRowLp(const PricingModel& model, PartId part,
                                     int parent_state,
                                     std::span<const double> mu_star_minus) {
  const PartId p = model.tree.parent[part];
  if (p == kNoPart) throw std::invalid_argument("rows need a non-root part");
  const StateSpace& parent = model.spaces[p];
  const StateSpace& own = model.spaces[part];
  const EdgeCoupling& w = model.couplings[part];
  const std::uint64_t hat = parent.mask(parent_state);

  CompressedRowLp lp;
  const auto neg = w.negative_column_sums();
  lp.negative_sums.assign(neg.begin(), neg.end());
  lp.q.assign(w.child_size(), 0.0);
  for (int j = 0; j < w.child_size(); ++j) {
    for (int i = 0; i < w.parent_size(); ++i) {
      const double wij = w.at(i, j);
      lp.q[j] += ((hat >> i) & 1u) ? std::max(0.0, wij) : -std::min(0.0, wij);
    }
  }
  std::vector<double> phi(own.size());
  w.PhiOverChildStates(parent, parent_state, own, phi);
  double tight = kInf;
  for (int s = 0; s < own.size(); ++s) {
    tight = std::min(tight, phi[s] + mu_star_minus[s]);
  }
  lp.tight_value = tight;
  const auto nsum = own.SumOverStates(lp.negative_sums);
  lp.b.resize(own.size());
  for (int s = 0; s < own.size(); ++s) {
    lp.b[s] = tight - mu_star_minus[s] - nsum[s];
  }
  return lp;
}

std::vector<double> SolveDelta4Filtered(const CompressedRowLp& lp,
                                        const StateSpace& own) {
  const int n = static_cast<int>(lp.q.size());
  std::vector<int> candidates;
  for (int s = 0; s < own.size(); ++s) {
    if (lp.b[s] > kFilterThreshold) candidates.push_back(s);
  }
  std::vector<double> delta4(n, 0.0);
  if (candidates.empty()) return delta4;
  const std::vector<int> active = ActiveVariables(lp);

  std::vector<int> working;
  std::vector<char> in_working(own.size(), 0);
  std::vector<double> covered(own.size());
  std::vector<std::pair<double, int>> violated;
  // Rounds minimize Σ δ⁴ only; the lexicographic pass runs once the working
  // set looks complete and is itself checked against the omitted rows.
  bool polished = false;
  while (true) {
    own.SumOverStates(delta4, covered);
    violated.clear();
    for (int s : candidates) {
      if (in_working[s]) continue;
      const double gap = lp.b[s] - covered[s];
      if (gap > 1e-11 * (1.0 + std::abs(lp.b[s]))) violated.push_back({gap, s});
    }
    if (violated.empty()) {
      if (polished || working.empty()) return delta4;
      delta4 = SolveCoveringLp(lp, own, working, active, true);
      polished = true;
      continue;
    }
    polished = false;
    const size_t take =
        std::min<size_t>(violated.size(), kConstraintsPerRound);
    std::partial_sort(violated.begin(), violated.begin() + take,
                      violated.end(), [](const auto& a, const auto& b) {
                        return a.first > b.first ||
                               (a.first == b.first && a.second < b.second);
                      });
    for (size_t k = 0; k < take; ++k) {
      working.push_back(violated[k].second);
      in_working[violated[k].second] = 1;
    }
    std::sort(working.begin(), working.end());
    delta4 = SolveCoveringLp(lp, own, working, active, false);
  }
}

std::vector<double> SolveDelta4Unfiltered(const CompressedRowLp& lp,
                                          const StateSpace& own) {
  std::vector<int> all(own.size());
  std::iota(all.begin(), all.end(), 0);
  return SolveCoveringLp(lp, own, all, ActiveVariables(lp), true);
}

BendersRow GenerateRowCompressed(const PricingModel& model, PartId part,
                                 int parent_state,
                                 std::span<const double> mu_star_minus) {
  const CompressedRowLp lp =
      BuildCompressedRowLp(model, part, parent_state, mu_star_minus);
  const auto delta4 = SolveDelta4Filtered(lp, model.spaces[part]);
  return RowFromDelta4(model, part, parent_state, lp, delta4, mu_star_minus);
}

BendersRow GenerateRowFull(const PricingModel& model, PartId part,
                           int parent_state,
                           std::span<const double> mu_star_minus,
                           double epsilon) {
  const PartId p = model.tree.parent[part];
  if (p == kNoPart) throw std::invalid_argument("rows need a non-root part");
  const StateSpace& parent = model.spaces[p];
  const StateSpace& own = model.spaces[part];
  const EdgeCoupling& w = model.couplings[part];
  const std::uint64_t hat = parent.mask(parent_state);
  const int np = w.parent_size();
  const int nc = w.child_size();

  // Column layout: δ⁰, then (δ¹, δ², δ³) for each pair (i, j).
  LpProblem problem;
  problem.sense = ObjectiveSense::kMaximize;
  problem.AddVariable(-1.0, -kInfinity, kInfinity);
  auto col = [&](int i, int j, int k) { return 1 + 3 * (i * nc + j) + k; };
  for (int i = 0; i < np; ++i) {
    const bool in_hat = (hat >> i) & 1u;
    for (int j = 0; j < nc; ++j) {
      // -δ¹ always, +δ¹ - δ² when i ∈ ŝ.
      problem.AddVariable((in_hat ? 0.0 : -1.0) - epsilon);
      problem.AddVariable((in_hat ? -1.0 : 0.0) - epsilon);
      problem.AddVariable(-epsilon);
    }
  }
  const int nv = problem.num_variables();
  for (int s = 0; s < own.size(); ++s) {
    std::vector<double> coeffs(nv, 0.0);
    coeffs[0] = 1.0;
    const std::uint64_t mask = own.mask(s);
    for (int j = 0; j < nc; ++j) {
      if (!((mask >> j) & 1u)) continue;
      for (int i = 0; i < np; ++i) {
        coeffs[col(i, j, 0)] = 1.0;
        coeffs[col(i, j, 2)] = -1.0;
      }
    }
    problem.AddRow(std::move(coeffs), RowSense::kGreaterEqual,
                   -mu_star_minus[s]);
  }
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < nc; ++j) {
      std::vector<double> coeffs(nv, 0.0);
      coeffs[col(i, j, 0)] = -1.0;
      coeffs[col(i, j, 1)] = 1.0;
      coeffs[col(i, j, 2)] = 1.0;
      problem.AddRow(std::move(coeffs), RowSense::kGreaterEqual, -w.at(i, j));
    }
  }
  const LpSolution sol = SolveLp(problem);
  if (sol.status != LpStatus::kOptimal) {
    throw std::logic_error("full row generation LP is " +
                           ToString(sol.status));
  }
  std::vector<double> parent_coeffs(np, 0.0);
  std::vector<double> own_coeffs(nc, 0.0);
  double sum_delta1 = 0.0;
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < nc; ++j) {
      const double d1 = sol.primal[col(i, j, 0)];
      const double d2 = sol.primal[col(i, j, 1)];
      const double d3 = sol.primal[col(i, j, 2)];
      parent_coeffs[i] += d1 - d2;
      own_coeffs[j] += d1 - d3;
      sum_delta1 += d1;
    }
  }
  BendersRow row;
  row.core = MakeRowCore(model, part, std::move(parent_coeffs),
                         std::move(own_coeffs), sum_delta1);
  row.delta0 = RefreshedDelta0(*row.core, mu_star_minus);
  return row;
}

NbdResult NbdPrice(const PricingModel& model, const ContextPotentials& ctx,
                   std::span<const double> lambda, RowPools& pools,
                   const NbdOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const PartTree& tree = model.tree;
  const int m = static_cast<int>(model.spaces.size());
  if (static_cast<int>(pools.size()) < m) pools.resize(m);

  NbdResult result;
  NbdStats& stats = result.stats;
  stats.context = ctx.neck_subset;
  std::vector<int> x(m, -1);

  if (tree.empty()) {
    result.priced.states = x;
    result.priced.pose = PoseFromStates(model, ctx.neck_subset, x);
    result.priced.reduced_cost =
        ReducedCost(*model.instance, result.priced.pose, lambda);
    stats.iterations = 1;
    stats.lb = stats.ub = result.priced.reduced_cost;
    return result;
  }

  const PartId root = tree.root;
  // mu[r]: ψ_r plus the best cut of every child with a nonempty pool.
  // maxcut[r]: best cut of r's pool over parent states.
  std::vector<std::vector<double>> mu(m);
  std::vector<std::vector<double>> maxcut(m);
  std::vector<std::vector<double>> phi(m);
  std::vector<int> phi_for(m, -1);

  auto covered = [&](PartId r) {
    for (PartId c : tree.children[r]) {
      if (pools[c].empty()) return false;
    }
    return true;
  };
  auto rebuild_mu = [&](PartId r) {
    const auto& psi = ctx.psi(r);
    mu[r].assign(psi.begin(), psi.end());
    for (PartId c : tree.children[r]) {
      if (pools[c].empty()) continue;
      const auto& best = maxcut[c];
      for (size_t s = 0; s < mu[r].size(); ++s) mu[r][s] += best[s];
    }
  };
  auto rebuild_maxcut = [&](PartId r) {
    maxcut[r] = MaxCut(pools[r], model.spaces[tree.parent[r]].size());
  };

  for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
    const PartId r = *it;
    rebuild_mu(r);
    if (r == root || pools[r].empty()) continue;
    if (!covered(r)) throw std::logic_error("row pool without child rows");
    stats.rows_refreshed += RefreshOffsets(pools[r], mu[r]);
    rebuild_maxcut(r);
  }

  long cap = options.iteration_cap;
  if (cap <= 0) cap = 10 * model.total_states();

  std::vector<char> reselect(m, 1);
  std::vector<char> changed(m, 0);
  std::vector<double> m1(m, 0.0);
  std::vector<double> gap(m, 0.0);
  std::vector<double> share(m, -kInf);
  double ub = 0.0;
  double lb = kLowerBoundSentinel;

  for (long iteration = 1;; ++iteration) {
    if (iteration > cap) throw std::runtime_error("nbd did not converge");
    stats.iterations = static_cast<int>(iteration);

    // Forward pass.
    std::fill(changed.begin(), changed.end(), 0);
    for (PartId r : tree.order) {
      const PartId p = tree.parent[r];
      if (p != kNoPart && changed[p]) reselect[r] = 1;
      if (!reselect[r]) continue;
      int best;
      if (p == kNoPart) {
        best = ArgMin(mu[r]);
      } else {
        if (phi_for[r] != x[p]) {
          phi[r].resize(model.spaces[r].size());
          model.couplings[r].PhiOverChildStates(model.spaces[p], x[p],
                                                model.spaces[r], phi[r]);
          phi_for[r] = x[p];
        }
        const auto& f = phi[r];
        const auto& u = mu[r];
        best = 0;
        double best_value = f[0] + u[0];
        for (size_t s = 1; s < u.size(); ++s) {
          const double v = f[s] + u[s];
          if (v < best_value) {
            best_value = v;
            best = static_cast<int>(s);
          }
        }
      }
      if (best != x[r]) changed[r] = 1;
      x[r] = best;
      reselect[r] = 0;
    }

    // Bounds and gap shares, leaves first.
    bool all_pools = true;
    for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
      const PartId r = *it;
      double v = ctx.psi(r)[x[r]];
      for (PartId c : tree.children[r]) v += m1[c];
      const PartId p = tree.parent[r];
      if (p == kNoPart) {
        m1[r] = v;
        continue;
      }
      v += phi[r][x[r]];
      m1[r] = v;
      if (pools[r].empty()) {
        all_pools = false;
        gap[r] = kInf;
      } else {
        gap[r] = v - maxcut[r][x[p]];
      }
    }
    ub = ctx.constant + m1[root];
    lb = all_pools ? ctx.constant + mu[root][x[root]] : kLowerBoundSentinel;

    PartId selected = kNoPart;
    for (PartId r : tree.order) {
      if (r == root) continue;
      if (gap[r] == kInf) {
        share[r] = covered(r) ? kInf : -kInf;
      } else {
        double s = gap[r];
        for (PartId c : tree.children[r]) s -= gap[c];
        share[r] = std::isinf(s) ? -kInf : s;
      }
    }
    const bool done =
        all_pools && ub - lb <= options.tolerance * std::max(1.0, std::abs(ub));
    if (!done) {
      for (PartId r = 0; r < m; ++r) {
        if (!tree.contains(r) || r == root) continue;
        if (share[r] == kInf) {
          selected = r;
          break;
        }
      }
      if (selected == kNoPart) {
        double best = -kInf;
        for (PartId r = 0; r < m; ++r) {
          if (!tree.contains(r) || r == root) continue;
          if (share[r] > best) {
            best = share[r];
            selected = r;
          }
        }
      }
    }
    if (options.observer) {
      NbdIterationView view;
      view.iteration = static_cast<int>(iteration);
      view.lb = lb;
      view.ub = ub;
      view.lb_finite = all_pools;
      view.states = x;
      view.gap_share = share;
      view.selected = selected;
      view.pools = &pools;
      options.observer(view);
    }
    if (done) break;
    if (selected == kNoPart) throw std::logic_error("no part to augment");

    // Add a row at the selected part, then refresh the ancestors' rows.
    const PartId p = tree.parent[selected];
    BendersRow row =
        options.full_rows
            ? GenerateRowFull(model, selected, x[p], mu[selected])
            : GenerateRowCompressed(model, selected, x[p], mu[selected]);
    if (pools[selected].empty()) {
      maxcut[selected].assign(model.spaces[p].size(), -kInf);
    }
    {
      auto& best = maxcut[selected];
      const double offset = row.offset();
      const auto& integrals = row.core->parent_integrals;
      for (size_t h = 0; h < best.size(); ++h) {
        best[h] = std::max(best[h], offset + integrals[h]);
      }
    }
    pools[selected].push_back(std::move(row));
    ++stats.rows_added;
    for (PartId a = p; a != kNoPart; a = tree.parent[a]) {
      rebuild_mu(a);
      reselect[a] = 1;
      if (a == root || pools[a].empty()) continue;
      stats.rows_refreshed += RefreshOffsets(pools[a], mu[a]);
      rebuild_maxcut(a);
    }
  }

  result.priced.states = x;
  result.priced.pose = PoseFromStates(model, ctx.neck_subset, x);
  result.priced.reduced_cost =
      ReducedCost(*model.instance, result.priced.pose, lambda);
  if (std::abs(result.priced.reduced_cost - ub) >
      1e-6 * (1.0 + std::abs(ub))) {
    throw std::logic_error("nbd upper bound " + std::to_string(ub) +
                           " disagrees with recomputed reduced cost " +
                           std::to_string(result.priced.reduced_cost));
  }
  stats.lb = lb;
  stats.ub = ub;
  stats.wall_time_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  return result;
}

}  // namespace mwsp
