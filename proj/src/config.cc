// Copyright 2026 The Authors.
//
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

#include "config.h"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace hsm {

namespace {

[[noreturn]] void ParseFail(const std::string& message) {
  Fail(ErrorCode::kParse, message);
}

void CheckKeys(const YAML::Node& node, const std::set<std::string>& allowed,
               const std::string& where) {
  if (!node) return;
  if (!node.IsMap()) ParseFail(where + " must be a mapping");
  for (const auto& kv : node) {
    std::string key = kv.first.as<std::string>();
    if (!allowed.count(key)) ParseFail("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void Read(const YAML::Node& node, const char* key, T* out,
          const std::string& where) {
  if (!node || !node[key]) return;
  try {
    *out = node[key].as<T>();
  } catch (const YAML::Exception&) {
    ParseFail("bad value for '" + std::string(key) + "' in " + where);
  }
}

Marginal ParseMarginal(const YAML::Node& node, const std::string& where) {
  CheckKeys(node,
            {"kind", "lo", "hi", "bandwidth", "power", "noise", "fading_mean",
             "alpha_lo", "alpha_hi", "values", "probs"},
            where);
  Marginal m;
  std::string kind = "uniform";
  Read(node, "kind", &kind, where);
  if (kind == "uniform") {
    m.kind = MarginalKind::kUniform;
  } else if (kind == "shannon") {
    m.kind = MarginalKind::kShannon;
  } else if (kind == "discrete") {
    m.kind = MarginalKind::kDiscrete;
  } else {
    ParseFail("unknown utility kind '" + kind + "' in " + where);
  }
  Read(node, "lo", &m.lo, where);
  Read(node, "hi", &m.hi, where);
  Read(node, "bandwidth", &m.bandwidth, where);
  Read(node, "power", &m.power, where);
  Read(node, "noise", &m.noise, where);
  Read(node, "fading_mean", &m.fading_mean, where);
  Read(node, "alpha_lo", &m.alpha_lo, where);
  Read(node, "alpha_hi", &m.alpha_hi, where);
  Read(node, "values", &m.values, where);
  Read(node, "probs", &m.probs, where);
  return m;
}

const char* MarginalKindName(MarginalKind k) {
  switch (k) {
    case MarginalKind::kUniform:
      return "uniform";
    case MarginalKind::kShannon:
      return "shannon";
    case MarginalKind::kDiscrete:
      return "discrete";
  }
  return "";
}

void EmitMarginal(YAML::Emitter& out, const Marginal& m) {
  out << YAML::BeginMap << YAML::Key << "kind" << YAML::Value
      << MarginalKindName(m.kind);
  switch (m.kind) {
    case MarginalKind::kUniform:
      out << YAML::Key << "lo" << YAML::Value << m.lo << YAML::Key << "hi"
          << YAML::Value << m.hi;
      break;
    case MarginalKind::kShannon:
      out << YAML::Key << "bandwidth" << YAML::Value << m.bandwidth
          << YAML::Key << "power" << YAML::Value << m.power << YAML::Key
          << "noise" << YAML::Value << m.noise << YAML::Key << "fading_mean"
          << YAML::Value << m.fading_mean << YAML::Key << "alpha_lo"
          << YAML::Value << m.alpha_lo << YAML::Key << "alpha_hi"
          << YAML::Value << m.alpha_hi;
      break;
    case MarginalKind::kDiscrete:
      out << YAML::Key << "values" << YAML::Value << YAML::Flow << m.values
          << YAML::Key << "probs" << YAML::Value << YAML::Flow << m.probs;
      break;
  }
  out << YAML::EndMap;
}

Contract ParseContract(const YAML::Node& node, const std::string& where) {
  CheckKeys(node,
            {"payment", "demand", "penalty_kind", "unit_penalty",
             "total_penalty", "tau"},
            where);
  Contract c;
  Read(node, "payment", &c.payment, where);
  Read(node, "demand", &c.demand, where);
  std::string kind = "soft";
  Read(node, "penalty_kind", &kind, where);
  if (kind == "soft") {
    c.penalty_kind = PenaltyKind::kSoft;
  } else if (kind == "hard") {
    c.penalty_kind = PenaltyKind::kHard;
  } else {
    ParseFail("penalty_kind must be soft or hard in " + where);
  }
  Read(node, "unit_penalty", &c.unit_penalty, where);
  Read(node, "total_penalty", &c.total_penalty, where);
  Read(node, "tau", &c.tau, where);
  return c;
}

std::string SolverName(SolverKind s) {
  return s == SolverKind::kExact ? "exact" : "greedy";
}

}  // namespace

Config DefaultConfig() {
  Config c;
  Contract k;
  k.payment = 10.0;
  k.demand = 120.0;
  k.penalty_kind = PenaltyKind::kSoft;
  k.unit_penalty = 0.3;
  k.tau = 0.5;
  c.contracts = {k};
  return c;
}

Config ParseConfig(const std::string& text, const std::string& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    ParseFail(std::string("config is not valid YAML: ") + e.what());
  }
  Config c = DefaultConfig();
  if (!root || root.IsNull()) return c;
  CheckKeys(root, {"graph", "contracts", "utilities", "supply", "experiment"},
            "config");

  const YAML::Node graph = root["graph"];
  CheckKeys(graph, {"path", "generator"}, "graph");
  if (graph && graph["path"]) {
    std::filesystem::path p = graph["path"].as<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    c.graph_path = p.string();
  }
  if (graph && graph["generator"]) {
    const YAML::Node g = graph["generator"];
    CheckKeys(g, {"area", "M", "contract_positions", "IRs", "IRc"},
              "graph.generator");
    Read(g, "area", &c.generator.area, "graph.generator");
    Read(g, "M", &c.generator.M, "graph.generator");
    Read(g, "IRs", &c.generator.IRs, "graph.generator");
    Read(g, "IRc", &c.generator.IRc, "graph.generator");
    if (g["contract_positions"]) {
      c.generator.contract_positions.clear();
      for (const auto& p : g["contract_positions"]) {
        if (!p.IsSequence() || p.size() != 2) {
          ParseFail("contract_positions entries must be [x, y] pairs");
        }
        c.generator.contract_positions.push_back(
            {p[0].as<double>(), p[1].as<double>()});
      }
    }
  }

  if (root["contracts"]) {
    const YAML::Node list = root["contracts"];
    if (!list.IsSequence() || list.size() == 0) {
      ParseFail("contracts must be a nonempty list");
    }
    c.contracts.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      c.contracts.push_back(
          ParseContract(list[i], "contracts[" + std::to_string(i) + "]"));
    }
  }

  const YAML::Node util = root["utilities"];
  CheckKeys(util, {"marginal", "per_su", "common_quality"}, "utilities");
  if (util && util["marginal"] && util["per_su"]) {
    ParseFail("utilities takes either marginal or per_su, not both");
  }
  if (util && util["marginal"]) {
    c.utilities.marginals = {ParseMarginal(util["marginal"], "utilities.marginal")};
  }
  if (util && util["per_su"]) {
    c.utilities.marginals.clear();
    for (std::size_t i = 0; i < util["per_su"].size(); ++i) {
      c.utilities.marginals.push_back(ParseMarginal(
          util["per_su"][i], "utilities.per_su[" + std::to_string(i) + "]"));
    }
  }
  if (util && util["common_quality"]) {
    const YAML::Node q = util["common_quality"];
    CheckKeys(q, {"q_lo", "q_hi"}, "utilities.common_quality");
    c.utilities.common_quality = true;
    Read(q, "q_lo", &c.utilities.q_lo, "utilities.common_quality");
    Read(q, "q_hi", &c.utilities.q_hi, "utilities.common_quality");
  }

  const YAML::Node supply = root["supply"];
  CheckKeys(supply, {"rho", "K", "T"}, "supply");
  Read(supply, "rho", &c.rho, "supply");
  Read(supply, "K", &c.K, "supply");
  Read(supply, "T", &c.T, "supply");

  const YAML::Node ex = root["experiment"];
  const std::string w = "experiment";
  CheckKeys(ex,
            {"seeds", "samples", "eval_samples", "eval_periods", "tol",
             "max_iter", "batches", "e0_grid", "T_values", "gap_periods",
             "irc_values", "solver"},
            w);
  ExperimentSettings& e = c.experiment;
  Read(ex, "seeds", &e.seeds, w);
  Read(ex, "samples", &e.samples, w);
  Read(ex, "eval_samples", &e.eval_samples, w);
  Read(ex, "eval_periods", &e.eval_periods, w);
  Read(ex, "tol", &e.tol, w);
  Read(ex, "max_iter", &e.max_iter, w);
  Read(ex, "batches", &e.batches, w);
  Read(ex, "e0_grid", &e.e0_grid, w);
  Read(ex, "T_values", &e.T_values, w);
  Read(ex, "gap_periods", &e.gap_periods, w);
  Read(ex, "irc_values", &e.irc_values, w);
  if (ex && ex["solver"]) {
    std::string s = ex["solver"].as<std::string>();
    if (s == "exact") {
      e.solver = SolverKind::kExact;
    } else if (s == "greedy") {
      e.solver = SolverKind::kGreedy;
    } else {
      ParseFail("experiment.solver must be exact or greedy");
    }
  }
  Require(e.seeds >= 1 && e.samples >= 1 && e.eval_samples >= 1 &&
              e.eval_periods >= 1 && e.tol > 0.0 && e.max_iter >= 1 &&
              e.batches >= 1 && e.gap_periods >= 1,
          "experiment settings must be positive");
  return c;
}

Config LoadConfig(const std::string& path) {
  std::string dir = std::filesystem::path(path).parent_path().string();
  return ParseConfig(ReadFile(path), dir.empty() ? "." : dir);
}

std::string DumpConfig(const Config& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(12);
  out << YAML::BeginMap;
  out << YAML::Key << "graph" << YAML::Value << YAML::BeginMap;
  if (c.graph_path) {
    out << YAML::Key << "path" << YAML::Value << *c.graph_path;
  } else {
    const TopologySpec& g = c.generator;
    out << YAML::Key << "generator" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "area" << YAML::Value << g.area;
    out << YAML::Key << "M" << YAML::Value << g.M;
    out << YAML::Key << "contract_positions" << YAML::Value << YAML::BeginSeq;
    for (const Point& p : g.contract_positions) {
      out << YAML::Flow << std::vector<double>{p.x, p.y};
    }
    out << YAML::EndSeq;
    out << YAML::Key << "IRs" << YAML::Value << g.IRs;
    out << YAML::Key << "IRc" << YAML::Value << g.IRc;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  out << YAML::Key << "contracts" << YAML::Value << YAML::BeginSeq;
  for (const Contract& k : c.contracts) {
    out << YAML::BeginMap;
    out << YAML::Key << "payment" << YAML::Value << k.payment;
    out << YAML::Key << "demand" << YAML::Value << k.demand;
    out << YAML::Key << "penalty_kind" << YAML::Value
        << (k.penalty_kind == PenaltyKind::kSoft ? "soft" : "hard");
    out << YAML::Key << "unit_penalty" << YAML::Value << k.unit_penalty;
    out << YAML::Key << "total_penalty" << YAML::Value << k.total_penalty;
    out << YAML::Key << "tau" << YAML::Value << k.tau;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "utilities" << YAML::Value << YAML::BeginMap;
  if (c.utilities.marginals.size() == 1) {
    out << YAML::Key << "marginal" << YAML::Value;
    EmitMarginal(out, c.utilities.marginals[0]);
  } else {
    out << YAML::Key << "per_su" << YAML::Value << YAML::BeginSeq;
    for (const Marginal& m : c.utilities.marginals) EmitMarginal(out, m);
    out << YAML::EndSeq;
  }
  if (c.utilities.common_quality) {
    out << YAML::Key << "common_quality" << YAML::Value << YAML::BeginMap
        << YAML::Key << "q_lo" << YAML::Value << c.utilities.q_lo << YAML::Key
        << "q_hi" << YAML::Value << c.utilities.q_hi << YAML::EndMap;
  }
  out << YAML::EndMap;
  out << YAML::Key << "supply" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rho" << YAML::Value << c.rho;
  out << YAML::Key << "K" << YAML::Value << c.K;
  out << YAML::Key << "T" << YAML::Value << c.T;
  out << YAML::EndMap;
  const ExperimentSettings& e = c.experiment;
  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "seeds" << YAML::Value << e.seeds;
  out << YAML::Key << "samples" << YAML::Value << e.samples;
  out << YAML::Key << "eval_samples" << YAML::Value << e.eval_samples;
  out << YAML::Key << "eval_periods" << YAML::Value << e.eval_periods;
  out << YAML::Key << "tol" << YAML::Value << e.tol;
  out << YAML::Key << "max_iter" << YAML::Value << e.max_iter;
  out << YAML::Key << "batches" << YAML::Value << e.batches;
  out << YAML::Key << "e0_grid" << YAML::Value << YAML::Flow << e.e0_grid;
  out << YAML::Key << "T_values" << YAML::Value << YAML::Flow << e.T_values;
  out << YAML::Key << "gap_periods" << YAML::Value << e.gap_periods;
  out << YAML::Key << "irc_values" << YAML::Value << YAML::Flow << e.irc_values;
  out << YAML::Key << "solver" << YAML::Value << SolverName(e.solver);
  out << YAML::EndMap;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

MarketInstance BuildInstance(const Config& config, std::uint64_t seed) {
  MarketInstance inst;
  if (config.graph_path) {
    inst.graph = ConflictGraph::Load(*config.graph_path);
  } else {
    Rng rng = Rng::Stream(seed, "topology");
    inst.graph = GenerateTopology(config.generator, rng).graph;
  }
  const int n = inst.graph.num_contract();
  if (config.contracts.size() == 1) {
    inst.contracts.assign(n, config.contracts[0]);
  } else if (static_cast<int>(config.contracts.size()) == n) {
    inst.contracts = config.contracts;
  } else {
    Fail(ErrorCode::kInvalidArgument,
         "config lists " + std::to_string(config.contracts.size()) +
             " contracts for " + std::to_string(n) + " contract users");
  }
  inst.utilities = config.utilities;
  inst.rho = config.rho;
  inst.K = config.K;
  inst.T = config.T;
  inst.Validate();
  return inst;
}

std::string DumpPolicy(const Policy& p) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value
      << (p.kind == PenaltyKind::kSoft ? "soft" : "hard");
  out << YAML::Key << "lambdas" << YAML::Value << YAML::Flow << p.lambdas;
  std::vector<int> satisfied;
  for (int n : p.satisfied_set) satisfied.push_back(n + 1);
  out << YAML::Key << "satisfied_set" << YAML::Value << YAML::Flow << satisfied;
  out << YAML::Key << "active" << YAML::Value << p.active;
  out << YAML::Key << "expected_demand" << YAML::Value << YAML::Flow
      << p.expected_demand;
  out << YAML::Key << "expected_demand_stderr" << YAML::Value << YAML::Flow
      << p.expected_demand_stderr;
  std::vector<int> atom(p.atom.begin(), p.atom.end());
  out << YAML::Key << "atom" << YAML::Value << YAML::Flow << atom;
  out << YAML::Key << "converged" << YAML::Value << p.converged;
  out << YAML::Key << "sweeps" << YAML::Value << p.sweeps;
  out << YAML::Key << "expected_welfare" << YAML::Value << p.expected_welfare;
  out << YAML::Key << "samples" << YAML::Value << p.samples;
  out << YAML::Key << "seed" << YAML::Value << p.seed;
  out << YAML::Key << "notes" << YAML::Value << YAML::BeginSeq;
  for (const auto& note : p.notes) out << note;
  out << YAML::EndSeq;
  out << YAML::Key << "trace" << YAML::Value << YAML::BeginSeq;
  for (const auto& row : p.trace) out << YAML::Flow << row;
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

Policy ParsePolicy(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    ParseFail(std::string("policy is not valid YAML: ") + e.what());
  }
  const std::string w = "policy";
  CheckKeys(root,
            {"kind", "lambdas", "satisfied_set", "active", "expected_demand",
             "expected_demand_stderr", "atom", "converged", "sweeps",
             "expected_welfare", "samples", "seed", "notes", "trace"},
            w);
  if (!root["lambdas"]) ParseFail("policy lacks lambdas");
  Policy p;
  std::string kind = "soft";
  Read(root, "kind", &kind, w);
  if (kind != "soft" && kind != "hard") ParseFail("policy kind must be soft or hard");
  p.kind = kind == "soft" ? PenaltyKind::kSoft : PenaltyKind::kHard;
  Read(root, "lambdas", &p.lambdas, w);
  std::vector<int> satisfied;
  Read(root, "satisfied_set", &satisfied, w);
  for (int n : satisfied) p.satisfied_set.push_back(n - 1);
  p.active = p.lambdas.size() >= 32 ? ~0u : (1u << p.lambdas.size()) - 1;
  Read(root, "active", &p.active, w);
  Read(root, "expected_demand", &p.expected_demand, w);
  Read(root, "expected_demand_stderr", &p.expected_demand_stderr, w);
  std::vector<int> atom;
  Read(root, "atom", &atom, w);
  for (int a : atom) p.atom.push_back(a != 0);
  Read(root, "converged", &p.converged, w);
  Read(root, "sweeps", &p.sweeps, w);
  Read(root, "expected_welfare", &p.expected_welfare, w);
  Read(root, "samples", &p.samples, w);
  Read(root, "seed", &p.seed, w);
  Read(root, "notes", &p.notes, w);
  Read(root, "trace", &p.trace, w);
  return p;
}

void SavePolicy(const Policy& policy, const std::string& path) {
  WriteFile(path, DumpPolicy(policy));
}

Policy LoadPolicy(const std::string& path) { return ParsePolicy(ReadFile(path)); }

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write " + path);
  out << contents;
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path);
}

}  // namespace hsm
