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

#ifndef MWSP_ORACLE_H_
#define MWSP_ORACLE_H_

#include <vector>

#include "mwsp/instance.h"
#include "mwsp/master.h"

namespace mwsp {

// Exhaustive references for small instances. Poses are limited the same way
// the solver limits them: by neck mode, neck subset cap and state cap.
struct OracleConfig {
  NeckMode neck_mode = NeckMode::kExactlyOne;
  int state_cap = kDefaultStateCap;
  int neck_subset_cap = 3;
  int max_detections = 14;
};

// Every admissible pose, whatever its cost.
std::vector<Pose> EnumeratePoses(const ProblemInstance& instance,
                                 const OracleConfig& config);

struct OracleResult {
  double objective = 0.0;
  std::vector<Pose> poses;
  int candidate_poses = 0;  // admissible poses of negative cost
  bool ilp_cross_checked = false;
};

// Exact MWSP by a DP over detection subsets. When there are at most 60
// negative-cost poses the answer is also checked against SolveBinaryIlp.
// Throws std::invalid_argument above `max_detections`.
OracleResult BruteForceMwsp(const ProblemInstance& instance,
                            const OracleConfig& config = {});

// Optimum of the LP relaxation over every admissible pose.
double FullLpOptimum(const ProblemInstance& instance,
                     const OracleConfig& config = {});

}  // namespace mwsp

#endif  // MWSP_ORACLE_H_
