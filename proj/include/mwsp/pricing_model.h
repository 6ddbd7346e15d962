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

#ifndef MWSP_PRICING_MODEL_H_
#define MWSP_PRICING_MODEL_H_

#include <span>
#include <vector>

#include "mwsp/instance.h"
#include "mwsp/state_space.h"

namespace mwsp {

// The tree over non-neck parts, re-rooted at an arbitrary non-neck part.
struct PartTree {
  PartId root = kNoPart;
  std::vector<PartId> parent;
  std::vector<std::vector<PartId>> children;
  // Root first; every part appears after its parent.
  std::vector<PartId> order;

  bool empty() const { return order.empty(); }
  bool contains(PartId r) const {
    return r >= 0 && r < static_cast<int>(parent.size()) &&
           (r == root || parent[r] != kNoPart);
  }
};

// Throws std::invalid_argument if `root` is not a non-neck part of a valid
// tree. Returns an empty tree when the instance has no non-neck part.
PartTree BuildPartTree(const ProblemInstance& instance, PartId root);

// W_{d1 d2} = θ²_{d1d2} + θ²_{d2d1} for d1 in the parent part and d2 in the
// child part, indexed by local detection positions.
class EdgeCoupling {
 public:
  EdgeCoupling() = default;
  EdgeCoupling(const ProblemInstance& instance, const StateSpace& parent,
               const StateSpace& child);

  int parent_size() const { return parent_size_; }
  int child_size() const { return child_size_; }
  double at(int parent_local, int child_local) const {
    return weights_[static_cast<size_t>(parent_local) * child_size_ + child_local];
  }
  // Σ_{d1} min(0, W_{d1 d2}) for each child detection.
  std::span<const double> negative_column_sums() const { return negative_sums_; }

  // a[d2] = Σ_{d1 ∈ parent_mask} W_{d1 d2}.
  void ChildWeights(std::uint64_t parent_mask, std::span<double> out) const;
  // Φ_{ŝ s} for every child state s.
  void PhiOverChildStates(const StateSpace& parent, int parent_state,
                          const StateSpace& child, std::span<double> out) const;

 private:
  int parent_size_ = 0;
  int child_size_ = 0;
  std::vector<double> weights_;
  std::vector<double> negative_sums_;
};

// Immutable data shared by every pricing call on one instance. Holds a
// pointer to the instance, which must outlive the model.
struct PricingModel {
  const ProblemInstance* instance = nullptr;
  PartTree tree;
  // Indexed by part id; the neck entry is left empty.
  std::vector<StateSpace> spaces;
  // Indexed by child part id; the root entry is left empty.
  std::vector<EdgeCoupling> couplings;

  long total_states() const;
};

PricingModel BuildPricingModel(const ProblemInstance& instance, int state_cap,
                               PartId root);

// ψ tables for every non-neck part plus the per-context constant
// θ⁰ + Σ_{d∈D̆}(θ¹_d+λ_d) + Σ_{d1,d2∈D̆} θ²_{d1d2}.
struct ContextPotentials {
  std::vector<DetectionId> neck_subset;
  std::vector<PotentialTable> tables;  // indexed by part id
  double constant = 0.0;

  const std::vector<double>& psi(PartId r) const { return tables[r].psi; }
};

ContextPotentials BuildContext(const PricingModel& model,
                               std::span<const double> lambda,
                               std::span<const DetectionId> neck_subset);

// A pricing answer: the pose, its reduced cost recomputed from the instance,
// and the chosen state per part (-1 for parts outside the tree).
struct PricedPose {
  Pose pose;
  double reduced_cost = 0.0;
  std::vector<int> states;
};

Pose PoseFromStates(const PricingModel& model,
                    std::span<const DetectionId> neck_subset,
                    std::span<const int> states);

}  // namespace mwsp

#endif  // MWSP_PRICING_MODEL_H_
