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

#ifndef MWSP_INSTANCE_H_
#define MWSP_INSTANCE_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <unordered_map>

namespace mwsp {

using DetectionId = int;
using PartId = int;

inline constexpr PartId kNoPart = -1;

struct Part {
  PartId id = kNoPart;
  std::string name;
  bool is_neck = false;
};

// One stored pairwise cost. Entries are ordered: (a, b) and (b, a) are
// distinct and both contribute to a pose containing a and b.
struct PairCost {
  DetectionId first = 0;
  DetectionId second = 0;
  double value = 0.0;
};

// Raw description of a problem. Detection ids are 0..n-1 and part ids are
// 0..m-1; `part_of[d] == kNoPart` marks an unassigned detection.
struct InstanceData {
  std::vector<Part> parts;
  // Edges of the tree over non-neck parts, as (parent, child). Neck edges to
  // every non-neck part are implicit.
  std::vector<std::pair<PartId, PartId>> tree_edges;
  PartId root = kNoPart;
  std::vector<PartId> part_of;
  double theta0 = 0.0;
  std::vector<double> theta1;
  std::vector<PairCost> theta2;
};

// Immutable view over an InstanceData with the lookup tables the solvers
// need. Construction never throws on invariant violations; use
// ValidateInstance() to check them.
class ProblemInstance {
 public:
  ProblemInstance() = default;
  explicit ProblemInstance(InstanceData data);

  const InstanceData& data() const { return data_; }

  int num_detections() const { return static_cast<int>(data_.part_of.size()); }
  int num_parts() const { return static_cast<int>(data_.parts.size()); }

  PartId part_of(DetectionId d) const { return data_.part_of[d]; }
  const Part& part(PartId r) const { return data_.parts[r]; }
  std::span<const DetectionId> detections_of(PartId r) const {
    return detections_of_[r];
  }

  // kNoPart when the instance has no neck part.
  PartId neck_part() const { return neck_part_; }
  bool is_neck(PartId r) const { return r != kNoPart && data_.parts[r].is_neck; }
  bool is_neck_detection(DetectionId d) const { return is_neck(part_of(d)); }
  std::span<const DetectionId> neck_detections() const;
  std::vector<PartId> non_neck_parts() const;

  PartId root() const { return data_.root; }
  // Children in the tree over non-neck parts as given by `tree_edges`.
  std::span<const PartId> tree_children(PartId r) const { return children_[r]; }
  PartId tree_parent(PartId r) const { return parent_[r]; }

  double theta0() const { return data_.theta0; }
  double theta1(DetectionId d) const { return data_.theta1[d]; }
  // Sum of stored entries for the ordered pair (a, b); 0 when absent.
  double theta2(DetectionId a, DetectionId b) const;
  // Stored (second, value) entries whose first element is `d`.
  std::span<const std::pair<DetectionId, double>> theta2_from(
      DetectionId d) const {
    return out_[d];
  }
  // theta2(a, b) + theta2(b, a).
  double coupling(DetectionId a, DetectionId b) const {
    return theta2(a, b) + theta2(b, a);
  }

 private:
  InstanceData data_;
  PartId neck_part_ = kNoPart;
  std::vector<std::vector<DetectionId>> detections_of_;
  std::vector<std::vector<PartId>> children_;
  std::vector<PartId> parent_;
  std::vector<std::vector<std::pair<DetectionId, double>>> out_;
  std::unordered_map<std::uint64_t, double> pair_index_;
};

// A set of detections, kept sorted and duplicate free.
struct Pose {
  std::vector<DetectionId> detections;

  Pose() = default;
  explicit Pose(std::vector<DetectionId> dets);
  bool contains(DetectionId d) const;
  bool operator==(const Pose&) const = default;
  auto operator<=>(const Pose&) const = default;
};

struct Violation {
  std::string kind;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool Has(const std::string& kind) const;
  std::string ToString() const;
};

ValidationReport ValidateInstance(const ProblemInstance& instance);

// Γ_p = θ⁰ + Σ θ¹ + Σ over ordered pairs of θ². Throws std::out_of_range on
// unknown detection ids.
double PoseCost(const ProblemInstance& instance, const Pose& pose);

// Γ_p + Σ_{d∈p} λ_d. Throws std::invalid_argument on a negative multiplier.
double ReducedCost(const ProblemInstance& instance, const Pose& pose,
                   std::span<const double> lambda);

struct GeneratorConfig {
  // Total number of parts, the neck included.
  int num_parts = 4;
  int dets_per_part = 3;
  // Detections of the neck part; negative means `dets_per_part`.
  int neck_dets = -1;
  double theta0 = 10.0;
  double theta1_min = -12.0;
  double theta1_max = 4.0;
  // Probability that an admissible pair gets a nonzero θ².
  double theta2_density = 0.7;
  // Pairs belonging to the same latent person attract, others repel.
  double attract_min = -10.0;
  double attract_max = -1.0;
  double repel_min = 1.0;
  double repel_max = 12.0;
  double clutter_fraction = 0.2;
};

struct GeneratedInstance {
  ProblemInstance instance;
  // Degenerate configurations ("no_parts", "no_neck_detections").
  std::vector<std::string> flags;
};

// Deterministic for a fixed (config, seed). Part 0 is the neck when
// num_parts > 0; the tree over the remaining parts is a random recursive
// tree rooted at part 1.
GeneratedInstance GenerateInstance(const GeneratorConfig& config,
                                   std::uint64_t seed);

}  // namespace mwsp

#endif  // MWSP_INSTANCE_H_
