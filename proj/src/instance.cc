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

#include "mwsp/instance.h"

#include <algorithm>
#include <cmath>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

namespace mwsp {
namespace {

std::uint64_t PairKey(DetectionId a, DetectionId b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

ProblemInstance::ProblemInstance(InstanceData data) : data_(std::move(data)) {
  const int n = num_detections();
  const int m = num_parts();
  data_.theta1.resize(n, 0.0);
  detections_of_.assign(m, {});
  children_.assign(m, {});
  parent_.assign(m, kNoPart);
  out_.assign(n, {});
  for (int r = 0; r < m; ++r) {
    if (data_.parts[r].is_neck && neck_part_ == kNoPart) neck_part_ = r;
  }
  for (DetectionId d = 0; d < n; ++d) {
    const PartId r = data_.part_of[d];
    if (r >= 0 && r < m) detections_of_[r].push_back(d);
  }
  for (const auto& [p, c] : data_.tree_edges) {
    if (p < 0 || p >= m || c < 0 || c >= m) continue;
    children_[p].push_back(c);
    parent_[c] = p;
  }
  for (const PairCost& e : data_.theta2) {
    if (e.first < 0 || e.first >= n || e.second < 0 || e.second >= n) continue;
    pair_index_[PairKey(e.first, e.second)] += e.value;
  }
  for (const auto& [key, value] : pair_index_) {
    const auto a = static_cast<DetectionId>(key >> 32);
    const auto b = static_cast<DetectionId>(key & 0xffffffffu);
    out_[a].emplace_back(b, value);
  }
  for (auto& row : out_) std::sort(row.begin(), row.end());
}

std::span<const DetectionId> ProblemInstance::neck_detections() const {
  if (neck_part_ == kNoPart) return {};
  return detections_of_[neck_part_];
}

std::vector<PartId> ProblemInstance::non_neck_parts() const {
  std::vector<PartId> out;
  for (int r = 0; r < num_parts(); ++r) {
    if (!data_.parts[r].is_neck) out.push_back(r);
  }
  return out;
}

double ProblemInstance::theta2(DetectionId a, DetectionId b) const {
  auto it = pair_index_.find(PairKey(a, b));
  return it == pair_index_.end() ? 0.0 : it->second;
}

Pose::Pose(std::vector<DetectionId> dets) : detections(std::move(dets)) {
  std::sort(detections.begin(), detections.end());
  detections.erase(std::unique(detections.begin(), detections.end()),
                   detections.end());
}

bool Pose::contains(DetectionId d) const {
  return std::binary_search(detections.begin(), detections.end(), d);
}

bool ValidationReport::Has(const std::string& kind) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.kind == kind; });
}

std::string ValidationReport::ToString() const {
  std::ostringstream os;
  for (const Violation& v : violations) {
    os << v.kind << ": " << v.message << "\n";
  }
  return os.str();
}

ValidationReport ValidateInstance(const ProblemInstance& instance) {
  ValidationReport report;
  auto add = [&](std::string kind, std::string message) {
    report.violations.push_back({std::move(kind), std::move(message)});
  };
  const InstanceData& data = instance.data();
  const int n = instance.num_detections();
  const int m = instance.num_parts();

  int necks = 0;
  for (int r = 0; r < m; ++r) {
    if (data.parts[r].id != r) {
      add("ids", "part at position " + std::to_string(r) + " has id " +
                     std::to_string(data.parts[r].id));
    }
    if (data.parts[r].is_neck) ++necks;
  }
  if (necks > 1) add("neck", "more than one neck part");

  for (DetectionId d = 0; d < n; ++d) {
    const PartId r = data.part_of[d];
    if (r < 0 || r >= m) {
      add("surjection", "detection " + std::to_string(d) + " has no part");
    }
  }
  if (!std::isfinite(data.theta0)) add("finite", "theta0 is not finite");
  if (static_cast<int>(data.theta1.size()) > n) {
    add("theta1", "theta1 has more entries than detections");
  }
  for (std::size_t d = 0; d < data.theta1.size(); ++d) {
    if (!std::isfinite(data.theta1[d])) {
      add("finite", "theta1 of detection " + std::to_string(d));
    }
  }

  // Tree over non-neck parts.
  const std::vector<PartId> non_neck = instance.non_neck_parts();
  std::vector<int> parent_count(m, 0);
  bool edges_ok = true;
  for (const auto& [p, c] : data.tree_edges) {
    if (p < 0 || p >= m || c < 0 || c >= m) {
      add("tree", "edge with unknown part");
      edges_ok = false;
      continue;
    }
    if (data.parts[p].is_neck || data.parts[c].is_neck) {
      add("tree", "tree edges may not touch the neck part");
      edges_ok = false;
      continue;
    }
    ++parent_count[c];
  }
  if (data.root < 0 || data.root >= m) {
    add("tree", "root is not a part");
  } else if (!non_neck.empty()) {
    if (data.parts[data.root].is_neck) {
      add("tree", "root must be a non-neck part");
    } else if (edges_ok) {
      if (parent_count[data.root] != 0) add("tree", "root has a parent");
      for (PartId r : non_neck) {
        if (r != data.root && parent_count[r] != 1) {
          add("tree", "part " + std::to_string(r) + " has " +
                          std::to_string(parent_count[r]) + " parents");
        }
      }
      std::vector<char> seen(m, 0);
      std::queue<PartId> queue;
      queue.push(data.root);
      seen[data.root] = 1;
      int reached = 0;
      while (!queue.empty()) {
        const PartId r = queue.front();
        queue.pop();
        ++reached;
        for (PartId c : instance.tree_children(r)) {
          if (!seen[c]) {
            seen[c] = 1;
            queue.push(c);
          }
        }
      }
      if (reached != static_cast<int>(non_neck.size())) {
        add("tree", "non-neck parts do not form a single tree");
      }
    }
  }

  // Pairwise sparsity follows the augmented tree.
  for (const PairCost& e : data.theta2) {
    if (e.first < 0 || e.first >= n || e.second < 0 || e.second >= n) {
      add("theta2", "pair references an unknown detection");
      continue;
    }
    if (!std::isfinite(e.value)) {
      add("finite", "theta2 entry is not finite");
      continue;
    }
    if (e.value == 0.0) continue;
    const PartId a = data.part_of[e.first];
    const PartId b = data.part_of[e.second];
    if (a < 0 || a >= m || b < 0 || b >= m) continue;
    const bool same = a == b;
    const bool neck_link = data.parts[a].is_neck && !data.parts[b].is_neck;
    const bool tree_link = instance.tree_parent(b) == a &&
                           !data.parts[a].is_neck && !data.parts[b].is_neck;
    if (!same && !neck_link && !tree_link) {
      add("tree sparsity", "theta2(" + std::to_string(e.first) + "," +
                               std::to_string(e.second) +
                               ") couples parts that are not parent/child");
    }
  }
  return report;
}

double PoseCost(const ProblemInstance& instance, const Pose& pose) {
  const int n = instance.num_detections();
  for (DetectionId d : pose.detections) {
    if (d < 0 || d >= n) {
      throw std::out_of_range("unknown detection id " + std::to_string(d));
    }
  }
  double cost = instance.theta0();
  for (DetectionId d : pose.detections) {
    cost += instance.theta1(d);
    for (const auto& [other, value] : instance.theta2_from(d)) {
      if (pose.contains(other)) cost += value;
    }
  }
  return cost;
}

double ReducedCost(const ProblemInstance& instance, const Pose& pose,
                   std::span<const double> lambda) {
  for (double l : lambda) {
    if (l < 0.0) throw std::invalid_argument("negative multiplier");
  }
  double cost = PoseCost(instance, pose);
  for (DetectionId d : pose.detections) cost += lambda[d];
  return cost;
}

GeneratedInstance GenerateInstance(const GeneratorConfig& config,
                                   std::uint64_t seed) {
  GeneratedInstance out;
  std::mt19937_64 rng(seed);
  auto uniform = [&](double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto bernoulli = [&](double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
  };

  InstanceData data;
  data.theta0 = config.theta0;
  const int num_parts = std::max(0, config.num_parts);
  if (num_parts == 0) {
    out.flags.push_back("no_parts");
    out.instance = ProblemInstance(std::move(data));
    return out;
  }
  const int neck_dets =
      config.neck_dets < 0 ? config.dets_per_part : config.neck_dets;
  if (neck_dets == 0) out.flags.push_back("no_neck_detections");

  data.parts.push_back({0, "neck", true});
  for (int r = 1; r < num_parts; ++r) {
    data.parts.push_back({r, "part" + std::to_string(r), false});
  }
  data.root = num_parts > 1 ? 1 : 0;
  for (int r = 2; r < num_parts; ++r) {
    std::uniform_int_distribution<int> pick(1, r - 1);
    data.tree_edges.emplace_back(pick(rng), r);
  }

  // Each neck detection anchors one latent person; other detections belong
  // to one of those people or are clutter (-1).
  const int people = std::max(1, neck_dets);
  std::vector<int> person;
  for (int r = 0; r < num_parts; ++r) {
    const int count = r == 0 ? neck_dets : config.dets_per_part;
    for (int k = 0; k < count; ++k) {
      data.part_of.push_back(r);
      if (r == 0) {
        person.push_back(k);
      } else if (bernoulli(config.clutter_fraction)) {
        person.push_back(-1);
      } else {
        person.push_back(
            std::uniform_int_distribution<int>(0, people - 1)(rng));
      }
      data.theta1.push_back(uniform(config.theta1_min, config.theta1_max));
    }
  }

  const int n = static_cast<int>(data.part_of.size());
  auto pair_value = [&](DetectionId a, DetectionId b) {
    const bool together = person[a] >= 0 && person[a] == person[b];
    return together ? uniform(config.attract_min, config.attract_max)
                    : uniform(config.repel_min, config.repel_max);
  };
  std::vector<PartId> parent(num_parts, kNoPart);
  for (const auto& [p, c] : data.tree_edges) parent[c] = p;
  for (DetectionId a = 0; a < n; ++a) {
    for (DetectionId b = 0; b < n; ++b) {
      if (a == b) continue;
      const PartId pa = data.part_of[a];
      const PartId pb = data.part_of[b];
      const bool admissible = (pa == pb && a < b) ||
                              (pa == 0 && pb != 0) ||
                              (pb != 0 && parent[pb] == pa && pa != 0);
      if (!admissible || !bernoulli(config.theta2_density)) continue;
      data.theta2.push_back({a, b, pair_value(a, b)});
    }
  }
  out.instance = ProblemInstance(std::move(data));
  return out;
}

}  // namespace mwsp
