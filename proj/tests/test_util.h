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

#ifndef MWSP_TESTS_TEST_UTIL_H_
#define MWSP_TESTS_TEST_UTIL_H_

#include <initializer_list>
#include <string>
#include <tuple>
#include <vector>

#include "mwsp/instance.h"

namespace mwsp::testing {

// Builds an instance from part sizes. Part 0 is the neck; `edges` link the
// non-neck parts and `root` is their tree root. Detections are numbered
// part by part.
inline InstanceData MakeData(std::vector<int> part_sizes,
                             std::vector<std::pair<PartId, PartId>> edges,
                             PartId root, double theta0,
                             std::vector<double> theta1,
                             std::vector<std::tuple<int, int, double>> theta2) {
  InstanceData data;
  for (size_t r = 0; r < part_sizes.size(); ++r) {
    data.parts.push_back({static_cast<PartId>(r), "p" + std::to_string(r), r == 0});
    for (int k = 0; k < part_sizes[r]; ++k) {
      data.part_of.push_back(static_cast<PartId>(r));
    }
  }
  data.tree_edges = std::move(edges);
  data.root = root;
  data.theta0 = theta0;
  data.theta1 = std::move(theta1);
  data.theta1.resize(data.part_of.size(), 0.0);
  for (const auto& [a, b, v] : theta2) data.theta2.push_back({a, b, v});
  return data;
}

}  // namespace mwsp::testing

#endif  // MWSP_TESTS_TEST_UTIL_H_
