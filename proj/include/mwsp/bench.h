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

#ifndef MWSP_BENCH_H_
#define MWSP_BENCH_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "mwsp/instance.h"
#include "mwsp/io.h"
#include "mwsp/master.h"

namespace mwsp {

struct BenchTier {
  std::string name;
  GeneratorConfig generator;
  int instances = 10;
  std::uint64_t first_seed = 1;
};

struct BenchSuite {
  std::vector<BenchTier> tiers;
  NeckMode neck_mode = NeckMode::kExactlyOne;
  int state_cap = 20000;
};

// Suite file: {"neck_mode": "one", "state_cap": V, "tiers": [{"name",
// "parts", "dets_per_part", "neck_dets", "instances", "seed", and optional
// generator overrides "theta0", "theta2_density"}]}.
BenchSuite ParseBenchSuite(const std::string& json_text);
// Three tiers of ten instances with 5 parts and 8, 12 and 16 detections
// per part.
BenchSuite DefaultBenchSuite();

struct BenchRow {
  std::string instance;
  std::string tier;
  double dp_ms = 0.0;
  double nbd_ms = 0.0;
  double speedup = 0.0;
  int calls = 0;
  bool equal = true;
  // Set when the engines disagreed: "iteration N, context {..}: ...".
  std::string mismatch;
};

struct TierSummary {
  std::string tier;
  double total_dp_ms = 0.0;
  double total_nbd_ms = 0.0;
  double median_speedup = 0.0;
  double max_speedup = 0.0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::vector<TierSummary> tiers;
  double total_dp_ms = 0.0;
  double total_nbd_ms = 0.0;
  double median_speedup = 0.0;
  double max_speedup = 0.0;
  bool all_equal() const;
};

// Solves every instance once with both engines priced on the same calls,
// timing each engine separately.
BenchReport RunBenchmark(const BenchSuite& suite);
void WriteBenchCsv(const BenchReport& report, std::ostream& out);
double Median(std::vector<double> values);

struct VerifyReport {
  std::vector<std::string> problems;
  double recomputed_objective = 0.0;
  bool ok() const { return problems.empty(); }
};

// Recomputes pose costs and the objective, checks disjointness, id ranges
// and that the reported lower bound does not exceed the objective.
VerifyReport VerifySolution(const ProblemInstance& instance,
                            const SolutionRecord& solution);

}  // namespace mwsp

#endif  // MWSP_BENCH_H_
