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

#include "mwsp/pricing_model.h"

#include <algorithm>
#include <bit>
#include <queue>
#include <stdexcept>
#include <string>

namespace mwsp {

PartTree BuildPartTree(const ProblemInstance& instance, PartId root) {
  PartTree tree;
  const int m = instance.num_parts();
  tree.parent.assign(m, kNoPart);
  tree.children.assign(m, {});
  const auto non_neck = instance.non_neck_parts();
  if (non_neck.empty()) return tree;
  if (root < 0 || root >= m || instance.is_neck(root)) {
    throw std::invalid_argument("root must be a non-neck part");
  }
  std::vector<std::vector<PartId>> adjacent(m);
  for (const auto& [p, c] : instance.data().tree_edges) {
    adjacent[p].push_back(c);
    adjacent[c].push_back(p);
  }
  for (auto& list : adjacent) std::sort(list.begin(), list.end());
  std::vector<char> seen(m, 0);
  std::queue<PartId> queue;
  queue.push(root);
  seen[root] = 1;
  tree.root = root;
  while (!queue.empty()) {
    const PartId r = queue.front();
    queue.pop();
    tree.order.push_back(r);
    for (PartId c : adjacent[r]) {
      if (seen[c]) continue;
      seen[c] = 1;
      tree.parent[c] = r;
      tree.children[r].push_back(c);
      queue.push(c);
    }
  }
  if (tree.order.size() != non_neck.size()) {
    throw std::invalid_argument("non-neck parts are not a single tree");
  }
  return tree;
}

EdgeCoupling::EdgeCoupling(const ProblemInstance& instance,
                           const StateSpace& parent, const StateSpace& child)
    : parent_size_(parent.num_detections()),
      child_size_(child.num_detections()),
      weights_(static_cast<size_t>(parent_size_) * child_size_, 0.0),
      negative_sums_(child_size_, 0.0) {
  const auto pd = parent.detections();
  const auto cd = child.detections();
  for (int i = 0; i < parent_size_; ++i) {
    for (int j = 0; j < child_size_; ++j) {
      const double w = instance.coupling(pd[i], cd[j]);
      weights_[static_cast<size_t>(i) * child_size_ + j] = w;
      negative_sums_[j] += std::min(0.0, w);
    }
  }
}

void EdgeCoupling::ChildWeights(std::uint64_t parent_mask,
                                std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::uint64_t m = parent_mask; m != 0; m &= m - 1) {
    const double* row =
        &weights_[static_cast<size_t>(std::countr_zero(m)) * child_size_];
    for (int j = 0; j < child_size_; ++j) out[j] += row[j];
  }
}

void EdgeCoupling::PhiOverChildStates(const StateSpace& parent,
                                      int parent_state, const StateSpace& child,
                                      std::span<double> out) const {
  std::vector<double> a(child_size_);
  ChildWeights(parent.mask(parent_state), a);
  child.SumOverStates(a, out);
}

long PricingModel::total_states() const {
  long total = 0;
  for (PartId r : tree.order) total += spaces[r].size();
  return total;
}

PricingModel BuildPricingModel(const ProblemInstance& instance, int state_cap,
                               PartId root) {
  PricingModel model;
  model.instance = &instance;
  model.tree = BuildPartTree(instance, root);
  model.spaces.resize(instance.num_parts());
  model.couplings.resize(instance.num_parts());
  for (PartId r : model.tree.order) {
    model.spaces[r] = BuildStateSpace(instance, r, state_cap);
  }
  for (PartId r : model.tree.order) {
    const PartId p = model.tree.parent[r];
    if (p == kNoPart) continue;
    model.couplings[r] = EdgeCoupling(instance, model.spaces[p], model.spaces[r]);
  }
  return model;
}

ContextPotentials BuildContext(const PricingModel& model,
                               std::span<const double> lambda,
                               std::span<const DetectionId> neck_subset) {
  const ProblemInstance& instance = *model.instance;
  ContextPotentials ctx;
  ctx.neck_subset.assign(neck_subset.begin(), neck_subset.end());
  std::sort(ctx.neck_subset.begin(), ctx.neck_subset.end());
  ctx.tables.resize(instance.num_parts());
  for (PartId r : model.tree.order) {
    ctx.tables[r] =
        PsiTable(instance, r, model.spaces[r], lambda, ctx.neck_subset);
  }
  double constant = instance.theta0();
  for (DetectionId d : ctx.neck_subset) {
    constant += instance.theta1(d) + lambda[d];
    for (DetectionId e : ctx.neck_subset) constant += instance.theta2(d, e);
  }
  ctx.constant = constant;
  return ctx;
}

Pose PoseFromStates(const PricingModel& model,
                    std::span<const DetectionId> neck_subset,
                    std::span<const int> states) {
  std::vector<DetectionId> dets(neck_subset.begin(), neck_subset.end());
  for (PartId r : model.tree.order) {
    const auto members = model.spaces[r].Members(states[r]);
    dets.insert(dets.end(), members.begin(), members.end());
  }
  return Pose(std::move(dets));
}

}  // namespace mwsp
