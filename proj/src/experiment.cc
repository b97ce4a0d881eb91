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

#include "experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <sstream>

namespace hsm {

namespace {

bool AllHard(const MarketInstance& inst) {
  if (inst.contracts.empty()) return false;
  for (const auto& c : inst.contracts) {
    if (c.penalty_kind != PenaltyKind::kHard) return false;
  }
  return true;
}

std::string JoinPath(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) Fail(ErrorCode::kIo, "cannot create " + dir + ": " + ec.message());
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / v.size();
}

double Stderr(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  double m = Mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1) / v.size());
}

}  // namespace

Policy FitPolicy(const MarketInstance& inst, const ContractSetTable& table,
                 const ExperimentSettings& settings, std::uint64_t seed) {
  Rng rng = Rng::Stream(seed, "mc");
  SampleSet samples = DrawSamples(inst, table, settings.samples, rng);
  Policy policy;
  if (AllHard(inst)) {
    policy = SolveHardContracts(inst, table, samples, settings.tol,
                                settings.max_iter);
  } else {
    Evaluator eval(inst, table, samples, DefaultActiveMask(inst));
    policy = SolveShadowPrices(eval, settings.tol, settings.max_iter);
  }
  policy.seed = seed;
  return policy;
}

SeedContext PrepareSeed(const Config& config, std::uint64_t seed) {
  SeedContext ctx;
  ctx.inst = BuildInstance(config, seed);
  ctx.table = BuildContractSets(ctx.inst.graph);
  ctx.policy = FitPolicy(ctx.inst, ctx.table, config.experiment, seed);
  return ctx;
}

std::vector<StrategyRow> CompareStrategies(const SeedContext& ctx,
                                           const ExperimentSettings& settings,
                                           std::uint64_t seed) {
  Rng availability = Rng::Stream(seed, "availability");
  Rng utilities = Rng::Stream(seed, "utilities");
  SlotBank bank = DrawSlotBank(ctx.inst, ctx.table, settings.eval_periods,
                               ctx.inst.S(), availability, utilities);
  std::vector<StrategyRow> rows;
  for (Strategy s : AllStrategies()) {
    Rng rng = Rng::Stream(seed, "baseline");
    StrategyRow row;
    row.seed = seed;
    row.strategy = s;
    row.welfare = RunBaseline(ctx.inst, ctx.table, ctx.policy, s, bank, rng);
    rows.push_back(row);
  }
  return rows;
}

std::vector<LossBoundReport> LossSweep(const MarketInstance& inst,
                                       const ContractSetTable& table,
                                       const Policy& policy,
                                       const ExperimentSettings& settings,
                                       std::uint64_t seed,
                                       const std::vector<double>& e0_grid) {
  Rng rng = Rng::Stream(seed, "lossbound");
  SampleSet samples = DrawSamples(inst, table, settings.eval_samples, rng);
  Evaluator eval(inst, table, samples, policy.active);
  std::vector<LossBoundReport> out;
  for (double e0 : e0_grid) {
    Rng eps = Rng::Stream(seed, "epsilon");
    out.push_back(AnalyzeLoss(eval, policy.lambdas, e0, eps, settings.batches));
  }
  return out;
}

std::vector<GapRow> GapSweep(const Config& config, const MarketInstance& inst,
                             std::uint64_t seed) {
  const ExperimentSettings& e = config.experiment;
  Require(!e.T_values.empty(), "gap sweep needs T values");
  const int t_max = *std::max_element(e.T_values.begin(), e.T_values.end());
  ContractSetTable table = BuildContractSets(inst.graph);
  Rng availability = Rng::Stream(seed, "gap-availability");
  Rng utilities = Rng::Stream(seed, "gap-utilities");
  SlotBank bank = DrawSlotBank(inst, table, e.gap_periods, inst.K * t_max,
                               availability, utilities);
  std::vector<GapRow> rows;
  for (int t : e.T_values) {
    Require(t >= 1, "T values must be positive");
    MarketInstance scaled = inst;
    scaled.T = t;
    const double factor = static_cast<double>(t) / inst.T;
    for (auto& c : scaled.contracts) {
      c.demand *= factor;
      c.payment *= factor;
      c.total_penalty *= factor;
    }
    Policy policy = FitPolicy(scaled, table, e, seed);
    SlotBank cut = Regroup(bank, scaled.S());
    Rng unused(0);
    BankWelfare w =
        RunBaseline(scaled, table, policy, Strategy::kOptimal, cut, unused);
    GapRow row;
    row.T = t;
    row.expected = w.expected;
    row.strict = w.strict;
    row.gap = 1.0 - w.strict / w.expected;
    row.periods = cut.periods;
    rows.push_back(row);
  }
  return rows;
}

std::string FormatNumber(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string StrategyCsv(const std::vector<StrategyRow>& rows, int num_contract,
                        const std::string& param, double value) {
  std::ostringstream out;
  out << "seed," << param << ",strategy,welfare,strict_welfare,spot_welfare";
  for (int n = 1; n <= num_contract; ++n) out << ",delivered_" << n;
  out << "\n";
  for (const auto& r : rows) {
    out << r.seed << "," << FormatNumber(value) << "," << StrategyName(r.strategy)
        << "," << FormatNumber(r.welfare.expected) << ","
        << FormatNumber(r.welfare.strict) << "," << FormatNumber(r.welfare.spot);
    for (double d : r.welfare.mean_delivered) out << "," << FormatNumber(d);
    out << "\n";
  }
  return out.str();
}

std::string WelfareSweepCsv(const std::string& param,
                            const std::vector<SweepPoint>& points) {
  std::ostringstream out;
  out << param << ",strategy,mean_welfare,stderr,seeds\n";
  for (const auto& p : points) {
    for (Strategy s : AllStrategies()) {
      std::vector<double> values;
      for (const auto& r : p.rows) {
        if (r.strategy == s) values.push_back(r.welfare.expected);
      }
      if (values.empty()) continue;
      out << FormatNumber(p.value) << "," << StrategyName(s) << ","
          << FormatNumber(Mean(values)) << "," << FormatNumber(Stderr(values))
          << "," << values.size() << "\n";
    }
  }
  return out.str();
}

std::string LossboundCsv(const std::vector<LossBoundReport>& reports,
                         int num_contract) {
  std::ostringstream out;
  out << "e0,eps_bar,achieved_wr,bound_wr";
  for (int n = 1; n <= num_contract; ++n) out << ",gamma_" << n;
  for (int n = 1; n <= num_contract; ++n) out << ",t_" << n;
  out << ",achieved_wr_stderr,bound_wr_stderr";
  for (int n = 1; n <= num_contract; ++n) out << ",gamma_" << n << "_stderr";
  for (int n = 1; n <= num_contract; ++n) out << ",t_" << n << "_stderr";
  out << "\n";
  for (const auto& r : reports) {
    out << FormatNumber(r.e0) << "," << FormatNumber(r.eps_bar) << ","
        << FormatNumber(r.achieved_wr) << "," << FormatNumber(r.bound_wr);
    for (double g : r.gamma) out << "," << FormatNumber(g);
    for (double t : r.t) out << "," << FormatNumber(t);
    out << "," << FormatNumber(r.achieved_wr_stderr) << ","
        << FormatNumber(r.bound_wr_stderr);
    for (double g : r.gamma_stderr) out << "," << FormatNumber(g);
    for (double t : r.t_stderr) out << "," << FormatNumber(t);
    out << "\n";
  }
  return out.str();
}

std::string GapCsv(const std::vector<GapRow>& rows) {
  std::ostringstream out;
  out << "T,periods,expected_welfare,strict_welfare,gap\n";
  for (const auto& r : rows) {
    out << r.T << "," << r.periods << "," << FormatNumber(r.expected) << ","
        << FormatNumber(r.strict) << "," << FormatNumber(r.gap) << "\n";
  }
  return out.str();
}

std::string TraceCsv(const std::vector<TraceRow>& rows) {
  std::ostringstream out;
  out << "slot,su_id,role,bid,weight,won,payment\n";
  for (const auto& r : rows) {
    out << r.slot << "," << r.su_id << "," << (r.contract ? "contract" : "spot")
        << "," << FormatNumber(r.bid) << "," << FormatNumber(r.weight) << ","
        << (r.won ? 1 : 0) << "," << FormatNumber(r.payment) << "\n";
  }
  return out.str();
}

std::string LedgerCsv(const MarketInstance& inst, const PeriodResult& period) {
  const WelfareLedger& l = period.ledger;
  std::ostringstream out;
  out << "su_id,role,spot_welfare,delivered,penalty,personal,utilization,"
         "payments\n";
  const int m = inst.M();
  for (int v = 0; v < inst.graph.num_vertices(); ++v) {
    out << v + 1 << ",";
    if (v < m) {
      out << "spot," << FormatNumber(l.spot_welfare[v]) << ",,,,,";
    } else {
      int n = v - m;
      out << "contract,," << FormatNumber(l.delivered[n]) << ","
          << FormatNumber(l.penalties[n]) << ","
          << FormatNumber(l.contract_personal[n]) << ","
          << FormatNumber(l.contract_utilization[n]) << ",";
    }
    out << FormatNumber(period.payments[v]) << "\n";
  }
  return out.str();
}

std::string FiggenSpec(const std::vector<std::string>& kinds) {
  std::ostringstream out;
  out << "plots:\n";
  for (const auto& kind : kinds) {
    std::string input = kind == "welfare_vs_irc" ? "welfare_vs_irc.csv"
                        : kind == "wr_vs_epsbar" ? "lossbound.csv"
                                                 : "gap.csv";
    out << "  - kind: " << kind << "\n"
        << "    inputs: [" << input << "]\n"
        << "    output: " << kind << ".png\n";
  }
  return out.str();
}

namespace {

std::string Manifest(const Config& config, const std::string& command,
                     const std::vector<std::string>& extra,
                     const std::vector<std::string>& outputs) {
  std::ostringstream out;
  out << "command: " << command << "\n";
  for (const auto& line : extra) out << line << "\n";
  out << "outputs: [";
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    out << (i ? ", " : "") << outputs[i];
  }
  out << "]\n";
  out << "config:\n";
  std::istringstream cfg(DumpConfig(config));
  for (std::string line; std::getline(cfg, line);) out << "  " << line << "\n";
  return out.str();
}

}  // namespace

void Simulate(const Config& config, std::uint64_t seed,
              const std::string& out_dir) {
  EnsureDir(out_dir);
  SeedContext ctx = PrepareSeed(config, seed);
  const ExperimentSettings& e = config.experiment;
  SavePolicy(ctx.policy, JoinPath(out_dir, "policy.yaml"));
  std::vector<StrategyRow> rows = CompareStrategies(ctx, e, seed);
  const double irc = config.generator.IRc;
  WriteFile(JoinPath(out_dir, "strategies.csv"),
            StrategyCsv(rows, ctx.inst.N(), "irc", irc));
  WriteFile(JoinPath(out_dir, "welfare_vs_irc.csv"),
            WelfareSweepCsv("irc", {SweepPoint{irc, rows}}));
  WriteFile(JoinPath(out_dir, "lossbound.csv"),
            LossboundCsv(LossSweep(ctx.inst, ctx.table, ctx.policy, e, seed,
                                   e.e0_grid),
                         ctx.inst.N()));
  WriteFile(JoinPath(out_dir, "gap.csv"), GapCsv(GapSweep(config, ctx.inst, seed)));
  Rng availability = Rng::Stream(seed, "period-availability");
  Rng utilities = Rng::Stream(seed, "period-utilities");
  PeriodResult period =
      RunPeriod(ctx.inst, ctx.policy, e.solver, availability, utilities);
  WriteFile(JoinPath(out_dir, "trace.csv"), TraceCsv(period.trace));
  WriteFile(JoinPath(out_dir, "ledger.csv"), LedgerCsv(ctx.inst, period));
  WriteFile(JoinPath(out_dir, "figgen.yaml"),
            FiggenSpec({"welfare_vs_irc", "wr_vs_epsbar", "gap_vs_T"}));
  std::vector<std::string> extra = {
      "seed: " + std::to_string(seed),
      "period_welfare: " + FormatNumber(period.ledger.total),
      "period_welfare_expected_demand: " +
          FormatNumber(period.ledger.total_expected_demand.value_or(0.0))};
  WriteFile(JoinPath(out_dir, "manifest.yaml"),
            Manifest(config, "simulate", extra,
                     {"policy.yaml", "strategies.csv", "welfare_vs_irc.csv",
                      "lossbound.csv", "gap.csv", "trace.csv", "ledger.csv",
                      "figgen.yaml"}));
}

void Sweep(const Config& config, const std::string& param,
           const std::vector<double>& values, std::uint64_t first_seed,
           int seeds, const std::string& out_dir) {
  Require(param == "irc" || param == "irs" || param == "rho",
          "sweep parameter must be irc, irs or rho");
  Require(!values.empty(), "sweep needs values");
  Require(seeds >= 1, "sweep needs at least one seed");
  EnsureDir(out_dir);
  std::vector<SweepPoint> points;
  std::string per_seed;
  for (double value : values) {
    Config c = config;
    if (param == "irc") c.generator.IRc = value;
    if (param == "irs") c.generator.IRs = value;
    if (param == "rho") c.rho = value;
    SweepPoint point;
    point.value = value;
    int num_contract = 0;
    for (int k = 0; k < seeds; ++k) {
      std::uint64_t seed = first_seed + k;
      SeedContext ctx = PrepareSeed(c, seed);
      num_contract = ctx.inst.N();
      auto rows = CompareStrategies(ctx, c.experiment, seed);
      point.rows.insert(point.rows.end(), rows.begin(), rows.end());
    }
    std::string block = StrategyCsv(point.rows, num_contract, param, value);
    if (!per_seed.empty()) block = block.substr(block.find('\n') + 1);
    per_seed += block;
    points.push_back(point);
  }
  const std::string sweep_name = "welfare_vs_" + param + ".csv";
  WriteFile(JoinPath(out_dir, sweep_name), WelfareSweepCsv(param, points));
  WriteFile(JoinPath(out_dir, "strategies.csv"), per_seed);
  if (param == "irc") {
    WriteFile(JoinPath(out_dir, "figgen.yaml"), FiggenSpec({"welfare_vs_irc"}));
  }
  std::ostringstream list;
  for (std::size_t i = 0; i < values.size(); ++i) {
    list << (i ? ", " : "") << FormatNumber(values[i]);
  }
  WriteFile(JoinPath(out_dir, "manifest.yaml"),
            Manifest(config, "sweep",
                     {"param: " + param, "values: [" + list.str() + "]",
                      "first_seed: " + std::to_string(first_seed),
                      "seeds: " + std::to_string(seeds)},
                     {sweep_name, "strategies.csv"}));
}

}  // namespace hsm
