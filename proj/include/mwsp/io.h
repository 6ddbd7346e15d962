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

#ifndef MWSP_IO_H_
#define MWSP_IO_H_

#include <stdexcept>
#include <string>
#include <vector>

#include "mwsp/instance.h"
#include "mwsp/master.h"

namespace mwsp {

// Raised for malformed input. The message starts with the JSON path of the
// offending field, e.g. "$.parts[1].is_neck: expected a boolean".
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Parses and validates an instance. Unknown fields are rejected.
ProblemInstance ParseInstanceJson(const std::string& text);
ProblemInstance ParseInstanceFile(const std::string& path);
std::string SerializeInstance(const ProblemInstance& instance);

// The on-disk view of a solution.
struct SolutionRecord {
  double objective = 0.0;
  double lp_objective = 0.0;
  double best_lower_bound = 0.0;
  bool certificate = false;
  std::vector<std::vector<DetectionId>> poses;
  std::vector<IterationTrace> trace;
};

SolutionRecord ToRecord(const SolveResult& result);
std::string SerializeSolution(const SolutionRecord& solution);
SolutionRecord ParseSolutionJson(const std::string& text);
SolutionRecord ParseSolutionFile(const std::string& path);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& contents);

}  // namespace mwsp

#endif  // MWSP_IO_H_
