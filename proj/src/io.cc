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

#include "mwsp/io.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mwsp {
namespace {

using nlohmann::json;

void CheckFields(const json& object, const std::string& path,
                 const std::set<std::string>& required,
                 const std::set<std::string>& optional = {}) {
  if (!object.is_object()) throw ParseError(path, "expected an object");
  for (const auto& [key, value] : object.items()) {
    if (!required.count(key) && !optional.count(key)) {
      throw ParseError(path + "." + key, "unknown field");
    }
  }
  for (const auto& key : required) {
    if (!object.contains(key)) throw ParseError(path + "." + key, "missing");
  }
}

int GetInt(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ParseError(path, "expected an integer");
  const auto v = value.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ParseError(path, "integer out of range");
  }
  return static_cast<int>(v);
}

double GetNumber(const json& value, const std::string& path) {
  if (!value.is_number()) throw ParseError(path, "expected a number");
  return value.get<double>();
}

bool GetBool(const json& value, const std::string& path) {
  if (!value.is_boolean()) throw ParseError(path, "expected a boolean");
  return value.get<bool>();
}

const json& GetArray(const json& value, const std::string& path) {
  if (!value.is_array()) throw ParseError(path, "expected an array");
  return value;
}

std::string Index(const std::string& path, size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

json ParseText(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

ParseError::ParseError(const std::string& path, const std::string& message)
    : std::runtime_error(path + ": " + message), path_(path) {}

ProblemInstance ParseInstanceJson(const std::string& text) {
  const json doc = ParseText(text);
  CheckFields(doc, "$",
              {"parts", "tree_edges", "root", "detections", "theta0", "theta1",
               "theta2"});
  InstanceData data;

  const json& parts = GetArray(doc["parts"], "$.parts");
  for (size_t i = 0; i < parts.size(); ++i) {
    const std::string path = Index("$.parts", i);
    CheckFields(parts[i], path, {"id", "is_neck"}, {"name"});
    Part part;
    part.id = GetInt(parts[i]["id"], path + ".id");
    part.is_neck = GetBool(parts[i]["is_neck"], path + ".is_neck");
    if (parts[i].contains("name")) {
      if (!parts[i]["name"].is_string()) {
        throw ParseError(path + ".name", "expected a string");
      }
      part.name = parts[i]["name"].get<std::string>();
    }
    if (part.id != static_cast<int>(i)) {
      throw ParseError(path + ".id", "part ids must be 0..m-1 in order");
    }
    data.parts.push_back(std::move(part));
  }

  const json& edges = GetArray(doc["tree_edges"], "$.tree_edges");
  for (size_t i = 0; i < edges.size(); ++i) {
    const std::string path = Index("$.tree_edges", i);
    if (!edges[i].is_array() || edges[i].size() != 2) {
      throw ParseError(path, "expected [parent, child]");
    }
    data.tree_edges.emplace_back(GetInt(edges[i][0], Index(path, 0)),
                                 GetInt(edges[i][1], Index(path, 1)));
  }

  data.root = GetInt(doc["root"], "$.root");

  const json& dets = GetArray(doc["detections"], "$.detections");
  data.part_of.assign(dets.size(), kNoPart);
  std::vector<char> seen(dets.size(), 0);
  for (size_t i = 0; i < dets.size(); ++i) {
    const std::string path = Index("$.detections", i);
    CheckFields(dets[i], path, {"id", "part"});
    const int id = GetInt(dets[i]["id"], path + ".id");
    if (id < 0 || id >= static_cast<int>(dets.size()) || seen[id]) {
      throw ParseError(path + ".id", "detection ids must be a permutation of 0..n-1");
    }
    seen[id] = 1;
    data.part_of[id] = GetInt(dets[i]["part"], path + ".part");
  }

  data.theta0 = GetNumber(doc["theta0"], "$.theta0");

  data.theta1.assign(dets.size(), 0.0);
  const json& theta1 = doc["theta1"];
  if (!theta1.is_object()) throw ParseError("$.theta1", "expected an object");
  for (const auto& [key, value] : theta1.items()) {
    const std::string path = "$.theta1." + key;
    size_t used = 0;
    int id = -1;
    try {
      id = std::stoi(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || id < 0 || id >= static_cast<int>(dets.size())) {
      throw ParseError(path, "key is not a detection id");
    }
    data.theta1[id] = GetNumber(value, path);
  }

  const json& theta2 = GetArray(doc["theta2"], "$.theta2");
  for (size_t i = 0; i < theta2.size(); ++i) {
    const std::string path = Index("$.theta2", i);
    if (!theta2[i].is_array() || theta2[i].size() != 3) {
      throw ParseError(path, "expected [d1, d2, value]");
    }
    PairCost pc;
    pc.first = GetInt(theta2[i][0], Index(path, 0));
    pc.second = GetInt(theta2[i][1], Index(path, 1));
    pc.value = GetNumber(theta2[i][2], Index(path, 2));
    data.theta2.push_back(pc);
  }

  ProblemInstance instance(std::move(data));
  const ValidationReport report = ValidateInstance(instance);
  if (!report.ok()) throw ParseError("$", "invalid instance: " + report.ToString());
  return instance;
}

ProblemInstance ParseInstanceFile(const std::string& path) {
  return ParseInstanceJson(ReadFile(path));
}

std::string SerializeInstance(const ProblemInstance& instance) {
  const InstanceData& data = instance.data();
  json doc;
  doc["parts"] = json::array();
  for (const Part& p : data.parts) {
    doc["parts"].push_back({{"id", p.id}, {"name", p.name}, {"is_neck", p.is_neck}});
  }
  doc["tree_edges"] = json::array();
  for (const auto& [p, c] : data.tree_edges) doc["tree_edges"].push_back({p, c});
  doc["root"] = data.root;
  doc["detections"] = json::array();
  for (size_t d = 0; d < data.part_of.size(); ++d) {
    doc["detections"].push_back({{"id", d}, {"part", data.part_of[d]}});
  }
  doc["theta0"] = data.theta0;
  doc["theta1"] = json::object();
  for (size_t d = 0; d < data.theta1.size(); ++d) {
    doc["theta1"][std::to_string(d)] = data.theta1[d];
  }
  doc["theta2"] = json::array();
  for (const PairCost& pc : data.theta2) {
    doc["theta2"].push_back({pc.first, pc.second, pc.value});
  }
  return doc.dump(2) + "\n";
}

SolutionRecord ToRecord(const SolveResult& result) {
  SolutionRecord rec;
  rec.objective = result.objective;
  rec.lp_objective = result.lp_objective;
  rec.best_lower_bound = result.best_lower_bound;
  rec.certificate = result.certificate;
  for (const Pose& p : result.poses) rec.poses.push_back(p.detections);
  rec.trace = result.trace;
  return rec;
}

std::string SerializeSolution(const SolutionRecord& solution) {
  json doc;
  doc["objective"] = solution.objective;
  doc["lp_objective"] = solution.lp_objective;
  doc["best_lower_bound"] = solution.best_lower_bound;
  doc["certificate"] = solution.certificate;
  doc["poses"] = json::array();
  for (const auto& p : solution.poses) doc["poses"].push_back(p);
  doc["trace"] = json::array();
  for (const IterationTrace& t : solution.trace) {
    doc["trace"].push_back({{"iter", t.iteration},
                            {"rmp_value", t.rmp_value},
                            {"lb", t.lower_bound},
                            {"columns_added", t.columns_added}});
  }
  return doc.dump(2) + "\n";
}

SolutionRecord ParseSolutionJson(const std::string& text) {
  const json doc = ParseText(text);
  CheckFields(doc, "$",
              {"objective", "lp_objective", "best_lower_bound", "certificate",
               "poses"},
              {"trace"});
  SolutionRecord rec;
  rec.objective = GetNumber(doc["objective"], "$.objective");
  rec.lp_objective = GetNumber(doc["lp_objective"], "$.lp_objective");
  rec.best_lower_bound =
      GetNumber(doc["best_lower_bound"], "$.best_lower_bound");
  rec.certificate = GetBool(doc["certificate"], "$.certificate");
  const json& poses = GetArray(doc["poses"], "$.poses");
  for (size_t i = 0; i < poses.size(); ++i) {
    const std::string path = Index("$.poses", i);
    const json& pose = GetArray(poses[i], path);
    std::vector<DetectionId> dets;
    for (size_t k = 0; k < pose.size(); ++k) {
      dets.push_back(GetInt(pose[k], Index(path, k)));
    }
    rec.poses.push_back(std::move(dets));
  }
  if (doc.contains("trace")) {
    const json& trace = GetArray(doc["trace"], "$.trace");
    for (size_t i = 0; i < trace.size(); ++i) {
      const std::string path = Index("$.trace", i);
      CheckFields(trace[i], path, {"iter", "rmp_value", "lb", "columns_added"});
      IterationTrace t;
      t.iteration = GetInt(trace[i]["iter"], path + ".iter");
      t.rmp_value = GetNumber(trace[i]["rmp_value"], path + ".rmp_value");
      t.lower_bound = GetNumber(trace[i]["lb"], path + ".lb");
      t.columns_added =
          GetInt(trace[i]["columns_added"], path + ".columns_added");
      rec.trace.push_back(t);
    }
  }
  return rec;
}

SolutionRecord ParseSolutionFile(const std::string& path) {
  return ParseSolutionJson(ReadFile(path));
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
}

}  // namespace mwsp
