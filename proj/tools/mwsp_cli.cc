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

// Command-line front end: solve, gen, bench, verify and oracle.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mwsp/bench.h"
#include "mwsp/instance.h"
#include "mwsp/io.h"
#include "mwsp/master.h"
#include "mwsp/oracle.h"

namespace {

mwsp::ProblemInstance WithTheta0(const mwsp::ProblemInstance& instance,
                                 double theta0) {
  mwsp::InstanceData data = instance.data();
  data.theta0 = theta0;
  return mwsp::ProblemInstance(std::move(data));
}

int RunSolve(const std::string& path, const std::string& engine,
             const std::string& neck_mode, int state_cap,
             std::optional<double> theta0, const std::string& out_path) {
  mwsp::ProblemInstance instance = mwsp::ParseInstanceFile(path);
  if (theta0) instance = WithTheta0(instance, *theta0);
  mwsp::IcgConfig config;
  config.engine = mwsp::ParseEngine(engine);
  config.neck_mode = mwsp::ParseNeckMode(neck_mode);
  config.state_cap = state_cap;
  const mwsp::SolveResult result = mwsp::IcgSolve(instance, config);
  const std::string json = mwsp::SerializeSolution(mwsp::ToRecord(result));
  if (out_path.empty()) {
    std::cout << json;
  } else {
    mwsp::WriteFile(out_path, json);
    std::cout << "objective " << result.objective << ", lp "
              << result.lp_objective << ", certificate "
              << (result.certificate ? "yes" : "no") << ", iterations "
              << result.iterations << "\n";
  }
  return 0;
}

int RunBench(const std::string& suite_path, const std::string& out_path) {
  const mwsp::BenchSuite suite = suite_path.empty()
                                     ? mwsp::DefaultBenchSuite()
                                     : mwsp::ParseBenchSuite(mwsp::ReadFile(suite_path));
  const mwsp::BenchReport report = mwsp::RunBenchmark(suite);
  std::ostringstream csv;
  mwsp::WriteBenchCsv(report, csv);
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    mwsp::WriteFile(out_path, csv.str());
  }
  for (const auto& tier : report.tiers) {
    std::cerr << tier.tier << ": dp " << tier.total_dp_ms << " ms, nbd "
              << tier.total_nbd_ms << " ms, median speedup "
              << tier.median_speedup << ", max " << tier.max_speedup << "\n";
  }
  std::cerr << "total: dp " << report.total_dp_ms << " ms, nbd "
            << report.total_nbd_ms << " ms\n";
  for (const auto& row : report.rows) {
    if (!row.equal) std::cerr << row.instance << ": " << row.mismatch << "\n";
  }
  return report.all_equal() ? 0 : 1;
}

int RunVerify(const std::string& instance_path,
              const std::string& solution_path) {
  const auto instance = mwsp::ParseInstanceFile(instance_path);
  const auto solution = mwsp::ParseSolutionFile(solution_path);
  const auto report = mwsp::VerifySolution(instance, solution);
  for (const auto& p : report.problems) std::cout << p << "\n";
  std::cout << (report.ok() ? "ok" : "invalid") << ", recomputed objective "
            << report.recomputed_objective << "\n";
  return report.ok() ? 0 : 1;
}

int RunOracle(const std::string& path, const std::string& neck_mode,
              int state_cap) {
  const auto instance = mwsp::ParseInstanceFile(path);
  mwsp::OracleConfig config;
  config.neck_mode = mwsp::ParseNeckMode(neck_mode);
  config.state_cap = state_cap;
  const auto result = mwsp::BruteForceMwsp(instance, config);
  mwsp::SolutionRecord record;
  record.objective = result.objective;
  record.lp_objective = mwsp::FullLpOptimum(instance, config);
  record.best_lower_bound = record.lp_objective;
  record.certificate =
      std::abs(record.objective - record.lp_objective) <= 1e-6;
  for (const auto& p : result.poses) record.poses.push_back(p.detections);
  std::cout << mwsp::SerializeSolution(record);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimum-weight set packing by column generation"};
  app.require_subcommand(1);

  std::string instance_path, out_path, engine = "nbd", neck_mode = "one";
  int state_cap = mwsp::kDefaultStateCap;
  std::optional<double> theta0;
  auto* solve = app.add_subcommand("solve", "Solve an instance");
  solve->add_option("instance", instance_path, "Instance JSON")->required();
  solve->add_option("--engine", engine, "nbd, dp or both")
      ->check(CLI::IsMember({"nbd", "dp", "both"}));
  solve->add_option("--neck-mode", neck_mode, "one or powerset")
      ->check(CLI::IsMember({"one", "powerset"}));
  solve->add_option("--state-cap", state_cap, "Maximum states per part")
      ->check(CLI::PositiveNumber);
  solve->add_option("--theta0-override", theta0, "Replace the pose prior");
  solve->add_option("--out", out_path, "Solution JSON path");

  mwsp::GeneratorConfig gen_config;
  std::uint64_t seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--parts", gen_config.num_parts, "Parts, neck included");
  gen->add_option("--dets-per-part", gen_config.dets_per_part);
  gen->add_option("--neck-dets", gen_config.neck_dets);
  gen->add_option("--theta0", gen_config.theta0);
  gen->add_option("--density", gen_config.theta2_density);
  gen->add_option("--seed", seed);
  gen->add_option("--out", gen_out, "Instance JSON path");

  std::string suite_path, report_path;
  auto* bench = app.add_subcommand("bench", "Compare DP and NBD pricing");
  bench->add_option("--suite", suite_path, "Suite JSON (default suite if absent)");
  bench->add_option("--out", report_path, "CSV report path");

  std::string solution_path;
  auto* verify = app.add_subcommand("verify", "Check a solution file");
  verify->add_option("instance", instance_path)->required();
  verify->add_option("solution", solution_path)->required();

  auto* oracle = app.add_subcommand("oracle", "Exhaustive reference solve");
  oracle->add_option("instance", instance_path)->required();
  oracle->add_option("--neck-mode", neck_mode)
      ->check(CLI::IsMember({"one", "powerset"}));
  oracle->add_option("--state-cap", state_cap)->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*solve) {
      return RunSolve(instance_path, engine, neck_mode, state_cap, theta0,
                      out_path);
    }
    if (*gen) {
      const auto generated = mwsp::GenerateInstance(gen_config, seed);
      for (const auto& flag : generated.flags) {
        std::cerr << "warning: " << flag << "\n";
      }
      const std::string json = mwsp::SerializeInstance(generated.instance);
      if (gen_out.empty()) {
        std::cout << json;
      } else {
        mwsp::WriteFile(gen_out, json);
      }
      return 0;
    }
    if (*bench) return RunBench(suite_path, report_path);
    if (*verify) return RunVerify(instance_path, solution_path);
    if (*oracle) return RunOracle(instance_path, neck_mode, state_cap);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
