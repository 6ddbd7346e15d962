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

#include "mwsp/master.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "mwsp/pricing_dp.h"
#include "mwsp/pricing_model.h"

namespace mwsp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ElapsedMs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::string ContextString(const std::vector<DetectionId>& context) {
  std::ostringstream out;
  out << "{";
  for (size_t i = 0; i < context.size(); ++i) {
    out << (i ? "," : "") << context[i];
  }
  out << "}";
  return out.str();
}

struct CallOutcome {
  PricingCallRecord record;
  Pose pose;
  double reduced_cost = 0.0;
};

CallOutcome PriceContext(const PricingModel& model,
                         const std::vector<DetectionId>& context,
                         std::span<const double> lambda, RowPools& pools,
                         const IcgConfig& config, int iteration) {
  const ContextPotentials ctx = BuildContext(model, lambda, context);
  CallOutcome out;
  out.record.iteration = iteration;
  out.record.context = ctx.neck_subset;
  if (config.engine != PricingEngine::kNbd) {
    const auto start = std::chrono::steady_clock::now();
    PricedPose priced = DpPrice(model, ctx, lambda);
    out.record.dp_ms = ElapsedMs(start);
    out.record.ran_dp = true;
    out.record.dp_cost = priced.reduced_cost;
    out.pose = std::move(priced.pose);
    out.reduced_cost = out.record.dp_cost;
  }
  if (config.engine != PricingEngine::kDp) {
    NbdOptions options;
    options.full_rows = config.full_rows;
    options.observer = config.nbd_observer;
    const auto start = std::chrono::steady_clock::now();
    NbdResult nbd = NbdPrice(model, ctx, lambda, pools, options);
    out.record.nbd_ms = ElapsedMs(start);
    out.record.ran_nbd = true;
    out.record.nbd_cost = nbd.priced.reduced_cost;
    out.record.nbd = std::move(nbd.stats);
    out.pose = std::move(nbd.priced.pose);
    out.reduced_cost = out.record.nbd_cost;
  }
  if (config.call_observer) {
    PricingCallView view;
    view.model = &model;
    view.context = &ctx;
    view.lambda = lambda;
    view.pools = &pools;
    view.record = &out.record;
    config.call_observer(view);
  }
  return out;
}

// Prices every context against a snapshot of the pools, then appends the
// rows each context produced, in context order.
std::vector<CallOutcome> PriceParallel(
    const PricingModel& model,
    const std::vector<std::vector<DetectionId>>& contexts,
    std::span<const double> lambda, RowPools& pools, const IcgConfig& config,
    int iteration) {
  const int n = static_cast<int>(contexts.size());
  std::vector<CallOutcome> outcomes(n);
  std::vector<RowPools> local(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  IcgConfig worker_config = config;
  worker_config.call_observer = nullptr;
  auto work = [&]() {
    for (int i = next++; i < n; i = next++) {
      try {
        local[i] = pools;
        outcomes[i] = PriceContext(model, contexts[i], lambda, local[i],
                                   worker_config, iteration);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> workers;
  const int count = std::min(config.threads, n);
  for (int t = 0; t < count; ++t) workers.emplace_back(work);
  for (auto& w : workers) w.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  const RowPools base_sizes_source = pools;
  for (int i = 0; i < n; ++i) {
    for (size_t r = 0; r < pools.size(); ++r) {
      const auto& mine = local[i][r];
      for (size_t k = base_sizes_source[r].size(); k < mine.size(); ++k) {
        pools[r].push_back(mine[k]);
      }
    }
  }
  return outcomes;
}

}  // namespace

std::string ToString(NeckMode mode) {
  return mode == NeckMode::kExactlyOne ? "one" : "powerset";
}

std::string ToString(PricingEngine engine) {
  switch (engine) {
    case PricingEngine::kNbd:
      return "nbd";
    case PricingEngine::kDp:
      return "dp";
    case PricingEngine::kBoth:
      return "both";
  }
  return "?";
}

NeckMode ParseNeckMode(const std::string& text) {
  if (text == "one") return NeckMode::kExactlyOne;
  if (text == "powerset") return NeckMode::kPowerSet;
  throw std::invalid_argument("unknown neck mode '" + text + "'");
}

PricingEngine ParseEngine(const std::string& text) {
  if (text == "nbd") return PricingEngine::kNbd;
  if (text == "dp") return PricingEngine::kDp;
  if (text == "both") return PricingEngine::kBoth;
  throw std::invalid_argument("unknown engine '" + text + "'");
}

DoiBounds ComputeDoi(const ProblemInstance& instance, NeckMode mode,
                     double offset) {
  DoiBounds doi;
  doi.offset = offset;
  const int n = instance.num_detections();
  doi.xi.assign(n, kInf);
  std::vector<double> negative_pairs(n, 0.0);
  for (const PairCost& pc : instance.data().theta2) {
    const double v = std::min(0.0, pc.value);
    negative_pairs[pc.first] += v;
    negative_pairs[pc.second] += v;
  }
  const double theta0_minus =
      mode == NeckMode::kExactlyOne ? 0.0 : std::min(0.0, instance.theta0());
  for (DetectionId d = 0; d < n; ++d) {
    if (instance.is_neck_detection(d)) continue;
    const double worst = theta0_minus + instance.theta1(d) + negative_pairs[d];
    doi.xi[d] = -std::min(0.0, worst) + offset;
  }
  return doi;
}

std::vector<std::vector<DetectionId>> EnumerateNeckContexts(
    const ProblemInstance& instance, NeckMode mode, int subset_cap) {
  std::vector<DetectionId> necks(instance.neck_detections().begin(),
                                 instance.neck_detections().end());
  std::sort(necks.begin(), necks.end());
  std::vector<std::vector<DetectionId>> out;
  if (mode == NeckMode::kExactlyOne) {
    for (DetectionId d : necks) out.push_back({d});
    return out;
  }
  const int n = static_cast<int>(necks.size());
  if (n > 20) {
    throw std::invalid_argument("power-set neck mode supports at most 20 "
                                "neck detections, got " +
                                std::to_string(n));
  }
  const int k_max = std::min(subset_cap, n);
  std::vector<int> combo;
  for (int k = 1; k <= k_max; ++k) {
    combo.resize(k);
    for (int i = 0; i < k; ++i) combo[i] = i;
    while (true) {
      std::vector<DetectionId> subset;
      for (int i : combo) subset.push_back(necks[i]);
      out.push_back(std::move(subset));
      int i = k - 1;
      while (i >= 0 && combo[i] == n - k + i) --i;
      if (i < 0) break;
      ++combo[i];
      for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
  }
  return out;
}

ColumnPool::ColumnPool(const ProblemInstance& instance)
    : instance_(&instance), members_(instance.num_detections()) {}

bool ColumnPool::Add(const Pose& pose) {
  const auto [it, inserted] = index_.emplace(pose.detections, size());
  if (!inserted) return false;
  poses_.push_back(pose);
  costs_.push_back(PoseCost(*instance_, pose));
  for (DetectionId d : pose.detections) members_[d].push_back(it->second);
  return true;
}

RmpResult SolveRmp(const ColumnPool& pool, std::span<const double> xi) {
  const int n = pool.num_detections();
  const int cols = pool.size();
  RmpResult out;
  out.lambda.assign(n, 0.0);
  out.gamma.assign(cols, 0.0);
  out.slack.assign(n, 0.0);

  LpProblem problem;
  for (int c = 0; c < cols; ++c) problem.AddVariable(pool.cost(c));
  std::vector<int> slack_col(n, -1);
  for (DetectionId d = 0; d < n; ++d) {
    if (!xi.empty() && std::isfinite(xi[d]) && !pool.columns_of(d).empty()) {
      slack_col[d] = problem.AddVariable(xi[d]);
    }
  }
  if (problem.num_variables() == 0) return out;
  std::vector<DetectionId> row_of;
  for (DetectionId d = 0; d < n; ++d) {
    if (pool.columns_of(d).empty()) continue;
    std::vector<double> coeffs(problem.num_variables(), 0.0);
    for (int c : pool.columns_of(d)) coeffs[c] = 1.0;
    if (slack_col[d] >= 0) coeffs[slack_col[d]] = -1.0;
    problem.AddRow(std::move(coeffs), RowSense::kLessEqual, 1.0);
    row_of.push_back(d);
  }
  const LpSolution sol = SolveLp(problem);
  if (sol.status != LpStatus::kOptimal) {
    throw std::runtime_error("restricted master LP is " +
                             ToString(sol.status));
  }
  for (size_t i = 0; i < row_of.size(); ++i) {
    out.lambda[row_of[i]] = std::max(0.0, sol.duals[i]);
  }
  for (int c = 0; c < cols; ++c) out.gamma[c] = sol.primal[c];
  for (DetectionId d = 0; d < n; ++d) {
    if (slack_col[d] >= 0) out.slack[d] = sol.primal[slack_col[d]];
  }
  out.value = sol.objective;
  out.simplex_iterations = sol.iterations;
  return out;
}

double AnytimeLowerBound(std::span<const double> lambda,
                         double best_reduced_cost, int num_detections) {
  double sum = 0.0;
  for (double l : lambda) sum += l;
  return -sum + num_detections * std::min(0.0, best_reduced_cost);
}

EngineMismatchError::EngineMismatchError(int iteration,
                                         std::vector<DetectionId> context,
                                         double dp_cost, double nbd_cost)
    : std::runtime_error("pricing engines disagree at iteration " +
                         std::to_string(iteration) + ", context " +
                         ContextString(context) + ": dp " +
                         std::to_string(dp_cost) + " vs nbd " +
                         std::to_string(nbd_cost)),
      iteration_(iteration),
      context_(std::move(context)) {}

IcgNonConvergenceError::IcgNonConvergenceError(
    std::vector<IterationTrace> trace)
    : std::runtime_error("column generation hit its iteration cap after " +
                         std::to_string(trace.size()) + " iterations"),
      trace_(std::move(trace)) {}

SolveResult IcgSolve(const ProblemInstance& instance, const IcgConfig& config) {
  const ValidationReport report = ValidateInstance(instance);
  if (!report.ok()) {
    throw std::invalid_argument("invalid instance: " + report.ToString());
  }
  const int n = instance.num_detections();
  const auto contexts =
      EnumerateNeckContexts(instance, config.neck_mode, config.neck_subset_cap);
  const PricingModel model =
      BuildPricingModel(instance, config.state_cap, SelectRoot(instance));
  RowPools pools(instance.num_parts());

  SolveResult result;
  if (config.use_doi) {
    result.xi = ComputeDoi(instance, config.neck_mode, config.doi_offset).xi;
  } else {
    result.xi.assign(n, kInf);
  }

  ColumnPool pool(instance);
  RmpResult rmp;
  result.best_lower_bound = -kInf;
  for (int iteration = 1;; ++iteration) {
    if (iteration > config.max_iterations) {
      throw IcgNonConvergenceError(result.trace);
    }
    rmp = SolveRmp(pool, result.xi);

    std::vector<CallOutcome> outcomes;
    if (config.threads > 1 && contexts.size() > 1) {
      outcomes = PriceParallel(model, contexts, rmp.lambda, pools, config,
                               iteration);
    } else {
      for (const auto& context : contexts) {
        outcomes.push_back(PriceContext(model, context, rmp.lambda, pools,
                                        config, iteration));
      }
    }

    IterationTrace trace;
    trace.iteration = iteration;
    trace.rmp_value = rmp.value;
    trace.best_reduced_cost = kInf;
    for (auto& outcome : outcomes) {
      const PricingCallRecord& rec = outcome.record;
      if (rec.ran_dp && rec.ran_nbd &&
          std::abs(rec.dp_cost - rec.nbd_cost) > config.engine_tolerance) {
        throw EngineMismatchError(iteration, rec.context, rec.dp_cost,
                                  rec.nbd_cost);
      }
      trace.best_reduced_cost =
          std::min(trace.best_reduced_cost, outcome.reduced_cost);
      if (outcome.reduced_cost < config.admission_threshold &&
          pool.Add(outcome.pose)) {
        ++trace.columns_added;
      }
      result.calls.push_back(std::move(outcome.record));
    }
    trace.lower_bound =
        AnytimeLowerBound(rmp.lambda, trace.best_reduced_cost, n);
    result.best_lower_bound =
        std::max(result.best_lower_bound, trace.lower_bound);
    result.trace.push_back(trace);
    result.iterations = iteration;
    if (trace.columns_added == 0) break;
  }

  result.lambda = rmp.lambda;
  result.lp_objective = rmp.value;
  result.lp_integral = true;
  for (double g : rmp.gamma) {
    if (std::min(std::abs(g), std::abs(1.0 - g)) > 1e-6) {
      result.lp_integral = false;
    }
  }
  for (double s : rmp.slack) {
    if (s > 1e-6) result.lp_integral = false;
  }

  // Set packing over the pooled columns of negative cost.
  LpProblem ilp;
  std::vector<int> column_of;
  for (int c = 0; c < pool.size(); ++c) {
    if (pool.cost(c) < 0.0) {
      ilp.AddVariable(pool.cost(c), 0.0, 1.0);
      column_of.push_back(c);
    }
  }
  if (!column_of.empty()) {
    for (DetectionId d = 0; d < n; ++d) {
      std::vector<double> coeffs(column_of.size(), 0.0);
      bool any = false;
      for (size_t k = 0; k < column_of.size(); ++k) {
        if (pool.pose(column_of[k]).contains(d)) {
          coeffs[k] = 1.0;
          any = true;
        }
      }
      if (any) ilp.AddRow(std::move(coeffs), RowSense::kLessEqual, 1.0);
    }
    std::vector<int> binaries(column_of.size());
    for (size_t k = 0; k < binaries.size(); ++k) binaries[k] = static_cast<int>(k);
    const IlpSolution sol = SolveBinaryIlp(ilp, binaries);
    if (sol.solution.status != LpStatus::kOptimal) {
      throw std::runtime_error("pool ILP is " + ToString(sol.solution.status));
    }
    result.ilp_nodes = sol.nodes;
    for (size_t k = 0; k < column_of.size(); ++k) {
      if (sol.solution.primal[k] > 0.5) {
        result.poses.push_back(pool.pose(column_of[k]));
        result.objective += pool.cost(column_of[k]);
      }
    }
  }
  result.certificate =
      std::abs(result.objective - result.lp_objective) <= 1e-6;
  for (int c = 0; c < pool.size(); ++c) {
    result.pool.push_back(pool.pose(c));
    result.pool_costs.push_back(pool.cost(c));
  }
  return result;
}

}  // namespace mwsp
