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

#ifndef MWSP_PRICING_NBD_H_
#define MWSP_PRICING_NBD_H_

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "mwsp/pricing_model.h"

namespace mwsp {

// Stand-in for an unbounded-below value so that bounds stay finite.
inline constexpr double kLowerBoundSentinel = -1e18;

// Non-neck part with the most detections, lowest id on ties; kNoPart when
// the instance has no non-neck part.
PartId SelectRoot(const ProblemInstance& instance);

// The context-independent body of a cut on the subtree below `part`. Its
// value at a parent state ŝ is
//   -δ⁰ - sum_delta1 + Σ_{d∈ŝ} parent_coeffs[d],
// and it stays valid for any context once δ⁰ is refreshed against that
// context's μ*⁻ of `part`.
struct RowCore {
  PartId part = kNoPart;
  std::vector<double> parent_coeffs;  // by parent local detection
  std::vector<double> own_coeffs;     // by own local detection
  double sum_delta1 = 0.0;
  // Cached Σ parent_coeffs over each parent state, and Σ own_coeffs over
  // each own state.
  std::vector<double> parent_integrals;
  std::vector<double> own_integrals;
};

std::shared_ptr<const RowCore> MakeRowCore(const PricingModel& model,
                                           PartId part,
                                           std::vector<double> parent_coeffs,
                                           std::vector<double> own_coeffs,
                                           double sum_delta1);

struct BendersRow {
  std::shared_ptr<const RowCore> core;
  double delta0 = 0.0;

  double offset() const { return -delta0 - core->sum_delta1; }
  double Value(int parent_state) const {
    return offset() + core->parent_integrals[parent_state];
  }
};

using RowPool = std::vector<BendersRow>;
// Indexed by part id. Root and neck entries stay empty.
using RowPools = std::vector<RowPool>;

// Smallest feasible δ⁰: -min_s(mu_star_minus[s] + own_integrals[s]).
double RefreshedDelta0(const RowCore& core,
                       std::span<const double> mu_star_minus);

// Recomputes δ⁰ of every row in `pool`; returns the number of rows touched.
int RefreshOffsets(RowPool& pool, std::span<const double> mu_star_minus);

// ψ_r plus, for each child, the best cut of that child's pool. A child with
// an empty pool contributes `empty_pool_value` to every state.
std::vector<double> MuStarMinus(const PricingModel& model, PartId part,
                                const RowPools& pools,
                                std::span<const double> psi,
                                double empty_pool_value = kLowerBoundSentinel);

// Cut on the subtree of `part` that is tight at `parent_state`, obtained from
// the dual LP over δ⁰ (free) and δ¹, δ², δ³ per detection pair, with
// `epsilon` as the penalty on δ¹+δ²+δ³.
BendersRow GenerateRowFull(const PricingModel& model, PartId part,
                           int parent_state,
                           std::span<const double> mu_star_minus,
                           double epsilon = 1e-10);

// Same cut from the compressed LP over one variable per own detection.
BendersRow GenerateRowCompressed(const PricingModel& model, PartId part,
                                 int parent_state,
                                 std::span<const double> mu_star_minus);

// The compressed LP data for one (part, parent state):
//   min Σ δ⁴ s.t. Σ_{d∈s} δ⁴_d ≥ b[s] for every own state s,
//   0 ≤ δ⁴_d ≤ q[d].
struct CompressedRowLp {
  std::vector<double> q;
  std::vector<double> negative_sums;  // Σ_{d1} min(0, W_{d1 d})
  std::vector<double> b;
  double tight_value = 0.0;           // min_s Φ_{ŝs} + μ*⁻_s
};

CompressedRowLp BuildCompressedRowLp(const PricingModel& model, PartId part,
                                     int parent_state,
                                     std::span<const double> mu_star_minus);

// Solves for δ⁴ with constraint generation over the states with b > 0.
std::vector<double> SolveDelta4Filtered(const CompressedRowLp& lp,
                                        const StateSpace& own);
// Solves for δ⁴ in one dense LP holding every state constraint.
std::vector<double> SolveDelta4Unfiltered(const CompressedRowLp& lp,
                                          const StateSpace& own);

struct NbdIterationView {
  int iteration = 0;
  double lb = kLowerBoundSentinel;
  double ub = 0.0;
  bool lb_finite = false;
  // Indexed by part id.
  std::span<const int> states;
  // +inf marks a part selected because its pool is empty; -inf marks a part
  // that cannot be selected yet.
  std::span<const double> gap_share;
  PartId selected = kNoPart;
  const RowPools* pools = nullptr;
};

using NbdObserver = std::function<void(const NbdIterationView&)>;

struct NbdOptions {
  bool full_rows = false;
  // Stop when UB - LB ≤ tolerance · max(1, |UB|).
  double tolerance = 1e-9;
  // Non-positive means 10 · Σ_r |S^r|.
  long iteration_cap = 0;
  NbdObserver observer;
};

struct NbdStats {
  std::vector<DetectionId> context;
  int iterations = 0;
  int rows_added = 0;
  int rows_refreshed = 0;
  double lb = kLowerBoundSentinel;
  double ub = 0.0;
  double wall_time_ms = 0.0;
};

struct NbdResult {
  PricedPose priced;
  NbdStats stats;
};

// Prices one context, adding rows to `pools`. Throws std::runtime_error
// ("nbd did not converge") when the iteration cap is reached.
NbdResult NbdPrice(const PricingModel& model, const ContextPotentials& ctx,
                   std::span<const double> lambda, RowPools& pools,
                   const NbdOptions& options = {});

}  // namespace mwsp

#endif  // MWSP_PRICING_NBD_H_
