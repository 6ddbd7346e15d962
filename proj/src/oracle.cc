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

#include "mwsp/oracle.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

#include "mwsp/lp.h"
#include "mwsp/state_space.h"

namespace mwsp {
namespace {

void CheckSize(const ProblemInstance& instance, const OracleConfig& config) {
  if (instance.num_detections() > config.max_detections) {
    throw std::invalid_argument(
        "oracle is limited to " + std::to_string(config.max_detections) +
        " detections, instance has " +
        std::to_string(instance.num_detections()));
  }
}

std::vector<std::pair<Pose, double>> NegativePoses(
    const ProblemInstance& instance, const OracleConfig& config) {
  std::vector<std::pair<Pose, double>> out;
  for (Pose& p : EnumeratePoses(instance, config)) {
    const double cost = PoseCost(instance, p);
    if (cost < 0.0) out.emplace_back(std::move(p), cost);
  }
  return out;
}

}  // namespace

std::vector<Pose> EnumeratePoses(const ProblemInstance& instance,
                                 const OracleConfig& config) {
  CheckSize(instance, config);
  const auto contexts = EnumerateNeckContexts(instance, config.neck_mode,
                                              config.neck_subset_cap);
  const auto parts = instance.non_neck_parts();
  std::vector<StateSpace> spaces;
  for (PartId r : parts) {
    spaces.push_back(BuildStateSpace(instance, r, config.state_cap));
  }
  std::vector<Pose> out;
  std::vector<int> digit(parts.size(), 0);
  for (const auto& context : contexts) {
    std::fill(digit.begin(), digit.end(), 0);
    while (true) {
      std::vector<DetectionId> dets = context;
      for (size_t k = 0; k < parts.size(); ++k) {
        const auto members = spaces[k].Members(digit[k]);
        dets.insert(dets.end(), members.begin(), members.end());
      }
      out.emplace_back(std::move(dets));
      size_t k = 0;
      while (k < parts.size() && ++digit[k] == spaces[k].size()) digit[k++] = 0;
      if (k == parts.size()) break;
    }
  }
  return out;
}

OracleResult BruteForceMwsp(const ProblemInstance& instance,
                            const OracleConfig& config) {
  CheckSize(instance, config);
  const auto candidates = NegativePoses(instance, config);
  const int n = instance.num_detections();
  OracleResult result;
  result.candidate_poses = static_cast<int>(candidates.size());

  std::vector<std::uint32_t> masks;
  for (const auto& [pose, cost] : candidates) {
    std::uint32_t m = 0;
    for (DetectionId d : pose.detections) m |= 1u << d;
    masks.push_back(m);
  }
  // by_lowest[i]: candidates whose lowest detection is i.
  std::vector<std::vector<int>> by_lowest(n);
  for (size_t k = 0; k < masks.size(); ++k) {
    by_lowest[std::countr_zero(masks[k])].push_back(static_cast<int>(k));
  }
  // best[m]: optimal packing inside detection set m; choice[m]: the pose
  // covering the lowest detection of m, or -1 if it stays uncovered.
  const std::uint32_t full = n == 32 ? ~0u : ((1u << n) - 1);
  std::vector<double> best(std::size_t{full} + 1, 0.0);
  std::vector<int> choice(std::size_t{full} + 1, -1);
  for (std::uint32_t m = 1; m <= full && m != 0; ++m) {
    const int low = std::countr_zero(m);
    double b = best[m & (m - 1)];
    int c = -1;
    for (int k : by_lowest[low]) {
      if ((masks[k] & m) != masks[k]) continue;
      const double v = candidates[k].second + best[m & ~masks[k]];
      if (v < b) {
        b = v;
        c = k;
      }
    }
    best[m] = b;
    choice[m] = c;
    if (m == full) break;
  }
  result.objective = n == 0 ? 0.0 : best[full];
  for (std::uint32_t m = full; m != 0;) {
    const int c = choice[m];
    if (c < 0) {
      m &= m - 1;
    } else {
      result.poses.push_back(candidates[c].first);
      m &= ~masks[c];
    }
  }

  if (!candidates.empty() && candidates.size() <= 60) {
    LpProblem ilp;
    for (const auto& [pose, cost] : candidates) ilp.AddVariable(cost, 0.0, 1.0);
    for (DetectionId d = 0; d < n; ++d) {
      std::vector<double> row(candidates.size(), 0.0);
      for (size_t k = 0; k < masks.size(); ++k) {
        if ((masks[k] >> d) & 1u) row[k] = 1.0;
      }
      ilp.AddRow(std::move(row), RowSense::kLessEqual, 1.0);
    }
    std::vector<int> binaries(candidates.size());
    for (size_t k = 0; k < binaries.size(); ++k) binaries[k] = static_cast<int>(k);
    const IlpSolution sol = SolveBinaryIlp(ilp, binaries);
    if (sol.solution.status != LpStatus::kOptimal ||
        std::abs(sol.solution.objective - result.objective) > 1e-6) {
      throw std::logic_error("oracle subset DP and ILP disagree");
    }
    result.ilp_cross_checked = true;
  }
  return result;
}

double FullLpOptimum(const ProblemInstance& instance,
                     const OracleConfig& config) {
  const auto candidates = NegativePoses(instance, config);
  if (candidates.empty()) return 0.0;
  LpProblem lp;
  for (const auto& [pose, cost] : candidates) lp.AddVariable(cost);
  for (DetectionId d = 0; d < instance.num_detections(); ++d) {
    std::vector<double> row(candidates.size(), 0.0);
    bool any = false;
    for (size_t k = 0; k < candidates.size(); ++k) {
      if (candidates[k].first.contains(d)) {
        row[k] = 1.0;
        any = true;
      }
    }
    if (any) lp.AddRow(std::move(row), RowSense::kLessEqual, 1.0);
  }
  const LpSolution sol = SolveLp(lp);
  if (sol.status != LpStatus::kOptimal) {
    throw std::runtime_error("full LP is " + ToString(sol.status));
  }
  return sol.objective;
}

}  // namespace mwsp
