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

#ifndef MWSP_PRICING_DP_H_
#define MWSP_PRICING_DP_H_

#include <span>
#include <vector>

#include "mwsp/pricing_model.h"

namespace mwsp {

// Upward messages of the exact tree DP for one context. Every vector is
// indexed by part id and left empty for parts outside the tree.
struct MessageTable {
  // message[r][ŝ] = min_s Φ_{ŝs} + subtree[r][s], over the parent's states.
  std::vector<std::vector<double>> message;
  // argmin[r][ŝ]: the minimizing child state, lowest index on ties.
  std::vector<std::vector<int>> argmin;
  // subtree[r][s] = ψ_{rs} + Σ_{children c} message[c][s].
  std::vector<std::vector<double>> subtree;
};

MessageTable DpMessages(const PricingModel& model, const ContextPotentials& ctx);

// Minimum reduced cost over poses whose neck detections are exactly the
// context's subset. The returned reduced cost is recomputed from the pose;
// std::logic_error is thrown if it disagrees with the DP value.
PricedPose DpPrice(const PricingModel& model, const ContextPotentials& ctx,
                   std::span<const double> lambda);

}  // namespace mwsp

#endif  // MWSP_PRICING_DP_H_
