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

#ifndef MWSP_STATE_SPACE_H_
#define MWSP_STATE_SPACE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "mwsp/instance.h"

namespace mwsp {

inline constexpr int kDefaultStateCap = 50000;

// The capped power set of one part's detections. State 0 is the empty set;
// states are grouped by cardinality, lexicographic by detection id inside a
// group, and a group is only ever included whole.
class StateSpace {
 public:
  StateSpace() = default;

  PartId part() const { return part_; }
  int size() const { return static_cast<int>(masks_.size()); }
  int cap() const { return cap_; }
  // Largest cardinality whose group was included.
  int max_cardinality() const { return max_cardinality_; }

  // Detections of the part, sorted; position is the local index.
  std::span<const DetectionId> detections() const { return detections_; }
  int num_detections() const { return static_cast<int>(detections_.size()); }
  // Local index of `d`, or -1 if `d` is not in this part.
  int LocalIndex(DetectionId d) const;

  std::uint64_t mask(int s) const { return masks_[s]; }
  int cardinality(int s) const;
  // S^r_{ds}. Throws std::out_of_range on a bad state index or a detection
  // outside the part.
  bool Contains(int s, DetectionId d) const;
  std::vector<DetectionId> Members(int s) const;
  // Index of the state with the given local-bit mask, or -1.
  int IndexOf(std::uint64_t mask) const;

  // The state obtained by dropping the highest local index; -1 for state 0.
  int prefix(int s) const { return prefix_[s]; }
  // Local index of the highest element; -1 for state 0.
  int last(int s) const { return last_[s]; }

  // out[s] = Σ_{local i ∈ s} weights[i], via the prefix chain.
  void SumOverStates(std::span<const double> weights,
                     std::span<double> out) const;
  std::vector<double> SumOverStates(std::span<const double> weights) const;

  // Intra-part pairwise cost Σ_{d1,d2∈s} θ²_{d1d2}, independent of λ and of
  // the neck context.
  double intra_cost(int s) const { return intra_[s]; }

 private:
  friend StateSpace BuildStateSpace(const ProblemInstance&, PartId, int);

  PartId part_ = kNoPart;
  int cap_ = 0;
  int max_cardinality_ = 0;
  std::vector<DetectionId> detections_;
  std::vector<std::uint64_t> masks_;
  std::vector<int> prefix_;
  std::vector<int> last_;
  std::vector<double> intra_;
  std::vector<std::uint64_t> sorted_masks_;
  std::vector<int> sorted_index_;
};

// Throws std::invalid_argument when cap < 1 or the part has more than 63
// detections.
StateSpace BuildStateSpace(const ProblemInstance& instance, PartId part,
                           int cap = kDefaultStateCap);

inline bool StateIndicator(const StateSpace& space, int s, DetectionId d) {
  return space.Contains(s, d);
}

// ψ over the states of a non-neck part for one (λ, neck subset) context.
struct PotentialTable {
  PartId part = kNoPart;
  std::vector<double> psi;
  std::vector<DetectionId> neck_subset;
  std::vector<double> lambda;
};

// ψ_{rs} = Σ_{d∈s}(θ¹_d+λ_d) + Σ_{d1,d2∈s} θ²_{d1d2} + Σ_{n∈D̆, d∈s} θ²
// between n and d.
PotentialTable PsiTable(const ProblemInstance& instance, PartId part,
                        const StateSpace& space,
                        std::span<const double> lambda,
                        std::span<const DetectionId> neck_subset);

// Φ_{ŝs} by direct double sum over the two parts' members. Pairs are summed
// in both orders.
double PhiValue(const ProblemInstance& instance, const StateSpace& parent,
                const StateSpace& child, int parent_state, int child_state);

}  // namespace mwsp

#endif  // MWSP_STATE_SPACE_H_
