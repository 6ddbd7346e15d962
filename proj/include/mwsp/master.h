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

#ifndef MWSP_MASTER_H_
#define MWSP_MASTER_H_

#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mwsp/instance.h"
#include "mwsp/lp.h"
#include "mwsp/pricing_nbd.h"
#include "mwsp/state_space.h"

namespace mwsp {

enum class NeckMode { kExactlyOne, kPowerSet };
enum class PricingEngine { kNbd, kDp, kBoth };

std::string ToString(NeckMode mode);
std::string ToString(PricingEngine engine);
// Accept "one"/"powerset" and "nbd"/"dp"/"both". Throw std::invalid_argument.
NeckMode ParseNeckMode(const std::string& text);
PricingEngine ParseEngine(const std::string& text);

// Upper bounds on the multipliers. Neck detections get +inf.
struct DoiBounds {
  std::vector<double> xi;
  double offset = 0.0;
};

DoiBounds ComputeDoi(const ProblemInstance& instance, NeckMode mode,
                     double offset = 1e-6);

// Exactly-one mode yields every singleton; power-set mode every nonempty
// subset of at most `subset_cap` neck detections. Power-set mode with more
// than 20 neck detections throws std::invalid_argument.
std::vector<std::vector<DetectionId>> EnumerateNeckContexts(
    const ProblemInstance& instance, NeckMode mode, int subset_cap = 3);

// Distinct poses with their costs and a membership index.
class ColumnPool {
 public:
  explicit ColumnPool(const ProblemInstance& instance);

  // Returns false, and stores nothing, if the detection set is present.
  bool Add(const Pose& pose);

  int size() const { return static_cast<int>(poses_.size()); }
  const Pose& pose(int i) const { return poses_[i]; }
  double cost(int i) const { return costs_[i]; }
  // Columns containing detection d.
  std::span<const int> columns_of(DetectionId d) const { return members_[d]; }
  int num_detections() const { return static_cast<int>(members_.size()); }

 private:
  const ProblemInstance* instance_;
  std::vector<Pose> poses_;
  std::vector<double> costs_;
  std::vector<std::vector<int>> members_;
  std::map<std::vector<DetectionId>, int> index_;
};

struct RmpResult {
  std::vector<double> lambda;
  double value = 0.0;
  // Column weights γ and per-detection slack ξ of the restricted primal.
  std::vector<double> gamma;
  std::vector<double> slack;
  int simplex_iterations = 0;
};

// max -Σλ s.t. Γ_p + Σ_{d∈p} λ_d ≥ 0 for pooled p and 0 ≤ λ ≤ xi, solved
// through its primal min Σ Γγ + Σ xi·ξ s.t. Σ_{p∋d} γ_p - ξ_d ≤ 1. An
// empty `xi` means no upper bounds. Throws std::runtime_error if the LP
// does not reach optimality.
RmpResult SolveRmp(const ColumnPool& pool, std::span<const double> xi);

// -Σλ + n·min(0, best_reduced_cost).
double AnytimeLowerBound(std::span<const double> lambda,
                         double best_reduced_cost, int num_detections);

struct IterationTrace {
  int iteration = 0;
  double rmp_value = 0.0;
  double lower_bound = 0.0;
  int columns_added = 0;
  double best_reduced_cost = 0.0;
};

// One pricing call for one context. Costs and times are set for every
// engine that ran.
struct PricingCallRecord {
  int iteration = 0;
  std::vector<DetectionId> context;
  bool ran_dp = false;
  bool ran_nbd = false;
  double dp_cost = 0.0;
  double nbd_cost = 0.0;
  double dp_ms = 0.0;
  double nbd_ms = 0.0;
  NbdStats nbd;
};

// Passed to the per-call observer right after a context is priced.
struct PricingCallView {
  const PricingModel* model = nullptr;
  const ContextPotentials* context = nullptr;
  std::span<const double> lambda;
  const RowPools* pools = nullptr;
  const PricingCallRecord* record = nullptr;
};

struct IcgConfig {
  PricingEngine engine = PricingEngine::kNbd;
  NeckMode neck_mode = NeckMode::kExactlyOne;
  int state_cap = kDefaultStateCap;
  int neck_subset_cap = 3;
  bool use_doi = true;
  double doi_offset = 1e-6;
  int max_iterations = 10000;
  double admission_threshold = -1e-7;
  // Largest |DP - NBD| accepted when both engines run.
  double engine_tolerance = 1e-6;
  bool full_rows = false;
  int threads = 1;
  NbdObserver nbd_observer;
  // Called once per pricing call; only used when threads == 1.
  std::function<void(const PricingCallView&)> call_observer;
};

struct SolveResult {
  std::vector<Pose> poses;
  double objective = 0.0;
  double lp_objective = 0.0;
  double best_lower_bound = 0.0;
  bool certificate = false;
  bool lp_integral = false;
  int iterations = 0;
  std::vector<IterationTrace> trace;
  std::vector<PricingCallRecord> calls;
  std::vector<double> lambda;
  std::vector<double> xi;
  std::vector<Pose> pool;
  std::vector<double> pool_costs;
  long ilp_nodes = 0;
};

// Both engines ran and disagreed on one call.
class EngineMismatchError : public std::runtime_error {
 public:
  EngineMismatchError(int iteration, std::vector<DetectionId> context,
                      double dp_cost, double nbd_cost);
  int iteration() const { return iteration_; }
  const std::vector<DetectionId>& context() const { return context_; }

 private:
  int iteration_;
  std::vector<DetectionId> context_;
};

class IcgNonConvergenceError : public std::runtime_error {
 public:
  explicit IcgNonConvergenceError(std::vector<IterationTrace> trace);
  const std::vector<IterationTrace>& trace() const { return trace_; }

 private:
  std::vector<IterationTrace> trace_;
};

// Implicit column generation followed by a binary ILP over the pool.
// Throws std::invalid_argument on an instance that fails validation.
SolveResult IcgSolve(const ProblemInstance& instance, const IcgConfig& config);

}  // namespace mwsp

#endif  // MWSP_MASTER_H_
