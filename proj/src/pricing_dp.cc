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

#include "mwsp/pricing_dp.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mwsp {

MessageTable DpMessages(const PricingModel& model,
                        const ContextPotentials& ctx) {
  const PartTree& tree = model.tree;
  const int m = static_cast<int>(model.spaces.size());
  MessageTable table;
  table.message.resize(m);
  table.argmin.resize(m);
  table.subtree.resize(m);

  for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
    const PartId r = *it;
    std::vector<double> subtree = ctx.psi(r);
    for (PartId c : tree.children[r]) {
      const auto& msg = table.message[c];
      for (size_t s = 0; s < subtree.size(); ++s) subtree[s] += msg[s];
    }
    table.subtree[r] = std::move(subtree);

    const PartId p = tree.parent[r];
    if (p == kNoPart) continue;
    const StateSpace& parent = model.spaces[p];
    const StateSpace& own = model.spaces[r];
    const EdgeCoupling& coupling = model.couplings[r];
    const auto& sub = table.subtree[r];
    std::vector<double> phi(own.size());
    auto& message = table.message[r];
    auto& argmin = table.argmin[r];
    message.assign(parent.size(), 0.0);
    argmin.assign(parent.size(), 0);
    for (int hat = 0; hat < parent.size(); ++hat) {
      coupling.PhiOverChildStates(parent, hat, own, phi);
      double best = phi[0] + sub[0];
      int best_s = 0;
      for (int s = 1; s < own.size(); ++s) {
        const double v = phi[s] + sub[s];
        if (v < best) {
          best = v;
          best_s = s;
        }
      }
      message[hat] = best;
      argmin[hat] = best_s;
    }
  }
  return table;
}

PricedPose DpPrice(const PricingModel& model, const ContextPotentials& ctx,
                   std::span<const double> lambda) {
  const PartTree& tree = model.tree;
  PricedPose out;
  out.states.assign(model.spaces.size(), -1);
  double value = ctx.constant;
  if (!tree.empty()) {
    const MessageTable table = DpMessages(model, ctx);
    const auto& top = table.subtree[tree.root];
    int best_s = 0;
    for (int s = 1; s < static_cast<int>(top.size()); ++s) {
      if (top[s] < top[best_s]) best_s = s;
    }
    value += top[best_s];
    out.states[tree.root] = best_s;
    for (PartId r : tree.order) {
      const PartId p = tree.parent[r];
      if (p != kNoPart) out.states[r] = table.argmin[r][out.states[p]];
    }
  }
  out.pose = PoseFromStates(model, ctx.neck_subset, out.states);
  out.reduced_cost = ReducedCost(*model.instance, out.pose, lambda);
  if (std::abs(out.reduced_cost - value) > 1e-6 * (1.0 + std::abs(value))) {
    throw std::logic_error("dp value " + std::to_string(value) +
                           " disagrees with recomputed reduced cost " +
                           std::to_string(out.reduced_cost));
  }
  return out;
}

}  // namespace mwsp
