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

#include "mwsp/bench.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace mwsp {

bool BenchReport::all_equal() const {
  return std::all_of(rows.begin(), rows.end(),
                     [](const BenchRow& r) { return r.equal; });
}

double Median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BenchSuite DefaultBenchSuite() {
  BenchSuite suite;
  const int sizes[] = {8, 12, 16};
  std::uint64_t seed = 1000;
  for (int size : sizes) {
    BenchTier tier;
    tier.name = "d" + std::to_string(size);
    tier.generator.num_parts = 5;
    tier.generator.dets_per_part = size;
    tier.generator.neck_dets = 3;
    tier.instances = 10;
    tier.first_seed = seed;
    seed += 1000;
    suite.tiers.push_back(tier);
  }
  return suite;
}

BenchSuite ParseBenchSuite(const std::string& json_text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("$", "expected an object");
  BenchSuite suite;
  for (const auto& [key, value] : doc.items()) {
    if (key == "neck_mode") {
      suite.neck_mode = ParseNeckMode(value.get<std::string>());
    } else if (key == "state_cap") {
      suite.state_cap = value.get<int>();
    } else if (key != "tiers") {
      throw ParseError("$." + key, "unknown field");
    }
  }
  if (!doc.contains("tiers") || !doc["tiers"].is_array()) {
    throw ParseError("$.tiers", "expected an array");
  }
  for (size_t i = 0; i < doc["tiers"].size(); ++i) {
    const json& t = doc["tiers"][i];
    const std::string path = "$.tiers[" + std::to_string(i) + "]";
    if (!t.is_object()) throw ParseError(path, "expected an object");
    BenchTier tier;
    tier.name = "tier" + std::to_string(i);
    for (const auto& [key, value] : t.items()) {
      try {
        if (key == "name") tier.name = value.get<std::string>();
        else if (key == "parts") tier.generator.num_parts = value.get<int>();
        else if (key == "dets_per_part") tier.generator.dets_per_part = value.get<int>();
        else if (key == "neck_dets") tier.generator.neck_dets = value.get<int>();
        else if (key == "instances") tier.instances = value.get<int>();
        else if (key == "seed") tier.first_seed = value.get<std::uint64_t>();
        else if (key == "theta0") tier.generator.theta0 = value.get<double>();
        else if (key == "theta2_density") tier.generator.theta2_density = value.get<double>();
        else throw ParseError(path + "." + key, "unknown field");
      } catch (const json::exception& e) {
        throw ParseError(path + "." + key, e.what());
      }
    }
    suite.tiers.push_back(tier);
  }
  return suite;
}

BenchReport RunBenchmark(const BenchSuite& suite) {
  BenchReport report;
  std::vector<double> all_speedups;
  for (const BenchTier& tier : suite.tiers) {
    TierSummary summary;
    summary.tier = tier.name;
    std::vector<double> speedups;
    for (int k = 0; k < tier.instances; ++k) {
      const std::uint64_t seed = tier.first_seed + k;
      const GeneratedInstance gen = GenerateInstance(tier.generator, seed);
      BenchRow row;
      row.tier = tier.name;
      row.instance = tier.name + "-s" + std::to_string(seed);
      IcgConfig config;
      config.engine = PricingEngine::kBoth;
      config.neck_mode = suite.neck_mode;
      config.state_cap = suite.state_cap;
      std::vector<PricingCallRecord> calls;
      config.call_observer = [&](const PricingCallView& view) {
        calls.push_back(*view.record);
      };
      try {
        IcgSolve(gen.instance, config);
      } catch (const EngineMismatchError& e) {
        row.equal = false;
        row.mismatch = e.what();
      }
      for (const PricingCallRecord& c : calls) {
        row.dp_ms += c.dp_ms;
        row.nbd_ms += c.nbd_ms;
      }
      row.calls = static_cast<int>(calls.size());
      row.speedup = row.nbd_ms > 0.0 ? row.dp_ms / row.nbd_ms : 0.0;
      summary.total_dp_ms += row.dp_ms;
      summary.total_nbd_ms += row.nbd_ms;
      // Row order, so the report total is exactly the sum of its rows.
      report.total_dp_ms += row.dp_ms;
      report.total_nbd_ms += row.nbd_ms;
      speedups.push_back(row.speedup);
      report.rows.push_back(row);
    }
    summary.median_speedup = Median(speedups);
    summary.max_speedup =
        speedups.empty() ? 0.0 : *std::max_element(speedups.begin(), speedups.end());
    all_speedups.insert(all_speedups.end(), speedups.begin(), speedups.end());
    report.tiers.push_back(summary);
  }
  report.median_speedup = Median(all_speedups);
  report.max_speedup = all_speedups.empty()
                           ? 0.0
                           : *std::max_element(all_speedups.begin(),
                                               all_speedups.end());
  return report;
}

void WriteBenchCsv(const BenchReport& report, std::ostream& out) {
  out << "instance,dp_ms,nbd_ms,speedup,calls,equal\n";
  for (const BenchRow& r : report.rows) {
    out << r.instance << ',' << r.dp_ms << ',' << r.nbd_ms << ',' << r.speedup
        << ',' << r.calls << ',' << (r.equal ? "true" : "false") << '\n';
  }
}

VerifyReport VerifySolution(const ProblemInstance& instance,
                            const SolutionRecord& solution) {
  VerifyReport report;
  const int n = instance.num_detections();
  std::vector<int> owner(n, -1);
  double objective = 0.0;
  for (size_t i = 0; i < solution.poses.size(); ++i) {
    const auto& dets = solution.poses[i];
    bool valid = !dets.empty();
    if (dets.empty()) report.problems.push_back("pose " + std::to_string(i) + " is empty");
    for (DetectionId d : dets) {
      if (d < 0 || d >= n) {
        report.problems.push_back("pose " + std::to_string(i) +
                                  " has unknown detection " + std::to_string(d));
        valid = false;
        continue;
      }
      if (owner[d] >= 0) {
        report.problems.push_back("detection " + std::to_string(d) +
                                  " is used by poses " + std::to_string(owner[d]) +
                                  " and " + std::to_string(i));
      }
      owner[d] = static_cast<int>(i);
    }
    if (valid) objective += PoseCost(instance, Pose(dets));
  }
  report.recomputed_objective = objective;
  const double tol = 1e-6 * std::max(1.0, std::abs(objective));
  if (std::abs(objective - solution.objective) > tol) {
    std::ostringstream msg;
    msg << "objective mismatch: reported " << solution.objective
        << ", recomputed " << objective;
    report.problems.push_back(msg.str());
  }
  if (solution.best_lower_bound > objective + tol) {
    std::ostringstream msg;
    msg << "lower bound " << solution.best_lower_bound
        << " exceeds objective " << objective;
    report.problems.push_back(msg.str());
  }
  return report;
}

}  // namespace mwsp
