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

#include "mwsp/state_space.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <string>

namespace mwsp {
namespace {

// C(n, k), saturating at `limit + 1`.
std::int64_t BoundedBinomial(int n, int k, std::int64_t limit) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t value = 1;
  for (int i = 1; i <= k; ++i) {
    value = value * (n - k + i) / i;
    if (value > limit) return limit + 1;
  }
  return value;
}

}  // namespace

int StateSpace::LocalIndex(DetectionId d) const {
  auto it = std::lower_bound(detections_.begin(), detections_.end(), d);
  if (it == detections_.end() || *it != d) return -1;
  return static_cast<int>(it - detections_.begin());
}

int StateSpace::cardinality(int s) const { return std::popcount(masks_[s]); }

bool StateSpace::Contains(int s, DetectionId d) const {
  if (s < 0 || s >= size()) {
    throw std::out_of_range("state index " + std::to_string(s));
  }
  const int local = LocalIndex(d);
  if (local < 0) {
    throw std::out_of_range("detection " + std::to_string(d) +
                            " is not in part " + std::to_string(part_));
  }
  return (masks_[s] >> local) & 1u;
}

std::vector<DetectionId> StateSpace::Members(int s) const {
  std::vector<DetectionId> out;
  for (std::uint64_t m = masks_[s]; m != 0; m &= m - 1) {
    out.push_back(detections_[std::countr_zero(m)]);
  }
  return out;
}

int StateSpace::IndexOf(std::uint64_t mask) const {
  auto it = std::lower_bound(sorted_masks_.begin(), sorted_masks_.end(), mask);
  if (it == sorted_masks_.end() || *it != mask) return -1;
  return sorted_index_[it - sorted_masks_.begin()];
}

void StateSpace::SumOverStates(std::span<const double> weights,
                               std::span<double> out) const {
  out[0] = 0.0;
  for (int s = 1; s < size(); ++s) out[s] = out[prefix_[s]] + weights[last_[s]];
}

std::vector<double> StateSpace::SumOverStates(
    std::span<const double> weights) const {
  std::vector<double> out(masks_.size());
  SumOverStates(weights, out);
  return out;
}

StateSpace BuildStateSpace(const ProblemInstance& instance, PartId part,
                           int cap) {
  if (cap < 1) throw std::invalid_argument("state cap must be at least 1");
  StateSpace space;
  space.part_ = part;
  space.cap_ = cap;
  const auto dets = instance.detections_of(part);
  space.detections_.assign(dets.begin(), dets.end());
  std::sort(space.detections_.begin(), space.detections_.end());
  const int n = space.num_detections();
  if (n > 63) {
    throw std::invalid_argument("part " + std::to_string(part) +
                                " has more than 63 detections");
  }

  std::int64_t total = 0;
  std::vector<int> combo;
  for (int k = 0; k <= n; ++k) {
    const std::int64_t group = BoundedBinomial(n, k, cap);
    if (total + group > cap) break;
    total += group;
    space.max_cardinality_ = k;
    combo.resize(k);
    std::iota(combo.begin(), combo.end(), 0);
    while (true) {
      std::uint64_t mask = 0;
      for (int i : combo) mask |= std::uint64_t{1} << i;
      space.masks_.push_back(mask);
      // Advance to the next k-combination in lexicographic order.
      int i = k - 1;
      while (i >= 0 && combo[i] == n - k + i) --i;
      if (i < 0) break;
      ++combo[i];
      for (int j = i + 1; j < k; ++j) combo[j] = combo[j - 1] + 1;
    }
  }

  const int size = space.size();
  std::vector<int> order(size);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return space.masks_[a] < space.masks_[b];
  });
  space.sorted_masks_.resize(size);
  space.sorted_index_ = order;
  for (int i = 0; i < size; ++i) space.sorted_masks_[i] = space.masks_[order[i]];

  space.prefix_.assign(size, -1);
  space.last_.assign(size, -1);
  space.intra_.assign(size, 0.0);
  for (int s = 1; s < size; ++s) {
    const std::uint64_t mask = space.masks_[s];
    const int hi = 63 - std::countl_zero(mask);
    const std::uint64_t rest = mask & ~(std::uint64_t{1} << hi);
    space.last_[s] = hi;
    space.prefix_[s] = space.IndexOf(rest);
    const DetectionId d = space.detections_[hi];
    double added = instance.theta2(d, d);
    for (std::uint64_t m = rest; m != 0; m &= m - 1) {
      const DetectionId e = space.detections_[std::countr_zero(m)];
      added += instance.theta2(d, e) + instance.theta2(e, d);
    }
    space.intra_[s] = space.intra_[space.prefix_[s]] + added;
  }
  return space;
}

PotentialTable PsiTable(const ProblemInstance& instance, PartId part,
                        const StateSpace& space,
                        std::span<const double> lambda,
                        std::span<const DetectionId> neck_subset) {
  PotentialTable table;
  table.part = part;
  table.neck_subset.assign(neck_subset.begin(), neck_subset.end());
  table.lambda.assign(lambda.begin(), lambda.end());
  const auto dets = space.detections();
  std::vector<double> unary(dets.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    const DetectionId d = dets[i];
    double u = instance.theta1(d) + lambda[d];
    for (DetectionId n : neck_subset) u += instance.coupling(n, d);
    unary[i] = u;
  }
  table.psi = space.SumOverStates(unary);
  for (int s = 0; s < space.size(); ++s) table.psi[s] += space.intra_cost(s);
  return table;
}

double PhiValue(const ProblemInstance& instance, const StateSpace& parent,
                const StateSpace& child, int parent_state, int child_state) {
  double phi = 0.0;
  for (DetectionId a : parent.Members(parent_state)) {
    for (DetectionId b : child.Members(child_state)) {
      phi += instance.coupling(a, b);
    }
  }
  return phi;
}

}  // namespace mwsp
