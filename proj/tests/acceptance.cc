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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "config.h"
#include "experiment.h"
#include "lossbound.h"
#include "mechanism.h"
#include "mwis.h"
#include "oracles.h"
#include "policy.h"
#include "simlab.h"

namespace hsm {
namespace {

namespace fs = std::filesystem;

int failures = 0;

void Report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s  %-34s %s\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// Runs `body`, turning an exception into a failed line.
void Criterion(const std::string& name,
               const std::function<bool(std::string*)>& body) {
  auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = false;
  try {
    pass = body(&detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
  char timing[32];
  std::snprintf(timing, sizeof timing, " [%.1fs]", secs);
  Report(name, pass, detail + timing);
}

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe Summarize(const std::vector<double>& xs) {
  MeanSe r;
  const double n = static_cast<double>(xs.size());
  for (double x : xs) r.mean += x / n;
  if (xs.size() < 2) return r;
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(ss / (n - 1) / n);
  return r;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// Default market with a penalty large enough that every shadow price binds.
Config BindingConfig() {
  Config c = DefaultConfig();
  for (Contract& k : c.contracts) k.unit_penalty = 3.0;
  return c;
}

Contract Soft(double d, double p, double tau, double b) {
  Contract c;
  c.payment = b;
  c.demand = d;
  c.unit_penalty = p;
  c.tau = tau;
  return c;
}

bool MwisOracle(std::string* detail) {
  auto start = std::chrono::steady_clock::now();
  Rng rng(101);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    int n = 1 + static_cast<int>(rng.Below(16));
    ConflictGraph g = oracle::RandomGraph(n, 0, rng.Uniform(0.05, 0.7), rng);
    VertexWeights w(n);
    for (double& x : w) x = rng.Uniform(-1.0, 1.0);
    MwisResult got = MwisExact(g, w, g.all());
    MwisResult want = oracle::BruteMwis(g, w, g.all());
    if (got.set != want.set || got.weight != want.weight) ++mismatches;
  }
  double secs = Seconds(start);
  *detail = Fmt("1000 graphs, %.0f mismatches, %.2fs (limit 30s)", mismatches,
                secs);
  return mismatches == 0 && secs < 30.0;
}

bool ScheduleRegression(std::string* detail) {
  ConflictGraph ring = oracle::Ring(5);
  bool half = !CheckSchedulable(ring, FractionalAllocation(5, 0.5));
  auto s = CheckSchedulable(ring, FractionalAllocation(5, 0.4));
  bool exact = s.has_value();
  if (s) {
    std::vector<double> marginal(5, 0.0);
    for (const ScheduleEntry& e : *s) {
      for (int v : Members(e.set)) marginal[v] += e.fraction;
    }
    for (double m : marginal) exact = exact && std::fabs(m - 0.4) <= 1e-12;
  }
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= 5; ++i) {
    edges.emplace_back(i, i % 5 + 1);
    edges.emplace_back(i, 6);
  }
  ConflictGraph wheel = ConflictGraph::Create(6, 0, edges);
  bool third = !CheckSchedulable(wheel, FractionalAllocation(6, 1.0 / 3.0));
  *detail = std::string("ring@0.5 ") + (half ? "infeasible" : "FEASIBLE") +
            ", ring@0.4 " + (exact ? "exact" : "NOT EXACT") + ", wheel@1/3 " +
            (third ? "infeasible" : "FEASIBLE");
  return half && exact && third;
}

bool ClosedFormPrice(std::string* detail) {
  MarketInstance inst;
  inst.graph = ConflictGraph::Create(0, 1, {});
  inst.contracts = {Soft(50, 1.0, 0.0, 1.0)};
  inst.rho = 1.0;
  inst.K = 1;
  inst.T = 100;
  Policy p = SolveShadowPrices(inst, MonteCarloSpec{20000, 1}, 1e-4, 200);
  *detail = Fmt("lambda = %.4f (want 0.5 +- 0.02)", p.lambdas[0]);
  return p.converged && std::fabs(p.lambdas[0] - 0.5) <= 0.02;
}

// Complementary slackness and the dual check on fresh samples per seed.
bool DualChecks(const Config& config, int seeds, std::string* detail) {
  double worst_slack = 0.0;
  double worst_excess = 0.0;
  int kkt_failures = 0;
  double max_lambda = 0.0;
  for (int seed = 1; seed <= seeds; ++seed) {
    MarketInstance inst = BuildInstance(config, seed);
    ContractSetTable table = BuildContractSets(inst.graph);
    Rng rng(1000 + seed);
    SampleSet samples = DrawSamples(inst, table, 20000, rng);
    Evaluator eval(inst, table, samples, DefaultActiveMask(inst));
    Policy p = SolveShadowPrices(eval, 1e-4, 500);
    DualCertificate cert = VerifyKkt(inst, p, table, samples, 0.01);
    if (!cert.pass) ++kkt_failures;
    for (int n = 0; n < inst.N(); ++n) {
      double slack = std::fabs(p.lambdas[n] * (inst.contracts[n].demand -
                                               p.expected_demand[n]));
      worst_slack = std::max(worst_slack, slack / inst.RhoS());
      worst_excess = std::max(worst_excess, cert.primal_excess[n]);
      max_lambda = std::max(max_lambda, p.lambdas[n]);
    }
  }
  *detail = Fmt("max |lambda(D-E[d])|/rhoS = %.2e, max excess %.2e, ",
                worst_slack, worst_excess) +
            Fmt("max lambda %.3f, kkt failures %.0f", max_lambda,
                kkt_failures);
  return worst_slack <= 0.01 && kkt_failures == 0;
}

bool MicroOptimality(std::string* detail) {
  auto start = std::chrono::steady_clock::now();
  Rng rng(303);
  double worst = 0.0;
  int count = 0;
  for (int m = 1; m <= 3; ++m) {
    for (int trial = 0; trial < 40; ++trial) {
      MarketInstance inst;
      inst.graph = oracle::RandomGraph(m, 1, rng.Uniform(0.3, 1.0), rng);
      Marginal g;
      g.kind = MarginalKind::kDiscrete;
      g.values = {rng.Uniform(0.0, 0.2), rng.Uniform(0.3, 0.6),
                  rng.Uniform(0.7, 1.0)};
      g.probs = {1.0 / 3, 1.0 / 3, 1.0 / 3};
      inst.utilities.marginals = {g};
      inst.contracts = {Soft(1.0, rng.Uniform(0, 2), rng.Uniform(),
                             rng.Uniform(0, 3))};
      inst.rho = rng.Uniform(0.3, 1.0);
      inst.K = 1;
      inst.T = 10;
      std::vector<double> levels = oracle::MicroDemandLevels(inst);
      inst.contracts[0].demand = levels[rng.Below(levels.size())] + 1e-9;
      ContractSetTable table = BuildContractSets(inst.graph);
      SampleSet grid = EnumerateGrid(inst, table);
      Policy p = SolveShadowPrices(Evaluator(inst, table, grid, 1), 1e-10, 200);
      double best = oracle::MicroOptimum(inst);
      if (m == 1) best = std::max(best, oracle::MicroOptimumBySubsets(inst));
      worst = std::max(worst, std::fabs(p.expected_welfare - best));
      ++count;
    }
  }
  double secs = Seconds(start);
  *detail = Fmt("%.0f instances, max |W - W*| = %.2e, %.2fs (limit 60s)",
                count, worst, secs);
  return worst <= 1e-6 && secs < 60.0;
}

bool ClassifierEquivalence(std::string* detail) {
  Rng rng(404);
  int draws = 0;
  int ties = 0;
  int mismatches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    MarketInstance inst;
    int spot = 2 + static_cast<int>(rng.Below(8));
    int contract = 1 + static_cast<int>(rng.Below(4));
    inst.graph = oracle::RandomGraph(spot, contract, rng.Uniform(0.2, 0.6), rng);
    for (int n = 0; n < contract; ++n) {
      inst.contracts.push_back(Soft(rng.Uniform(1, 6), rng.Uniform(0, 2),
                                    rng.Uniform(), rng.Uniform(0, 4)));
    }
    inst.rho = rng.Uniform(0.3, 1.0);
    inst.K = 2;
    inst.T = 5;
    ContractSetTable table = BuildContractSets(inst.graph);
    std::vector<double> lambdas(contract);
    for (double& x : lambdas) x = rng.Uniform(0.0, 0.8);
    for (int k = 0; k < 100; ++k) {
      SpectrumDraw d = SampleSpectrum(inst, rng);
      d.xi = true;
      ++draws;
      VertexSet full = MwisExact(inst.graph, AuctionWeights(inst, lambdas, d),
                                 inst.graph.all())
                           .set &
                       inst.graph.contract_mask();
      int label = ClassifyTheta(inst, table, lambdas, d);
      if (table.sets[label] == full) continue;
      int other = static_cast<int>(
          std::find(table.sets.begin(), table.sets.end(), full) -
          table.sets.begin());
      double a = CoreMarginalWelfare(inst, table, lambdas, d, label);
      double b = other == table.size()
                     ? -1e300
                     : CoreMarginalWelfare(inst, table, lambdas, d, other);
      if (std::fabs(a - b) <= 1e-12 * (1.0 + std::fabs(a))) {
        ++ties;
      } else {
        ++mismatches;
      }
    }
  }
  *detail = Fmt("%.0f draws, %.0f mismatches, %.0f ties", draws, mismatches,
                ties);
  return draws == 10000 && mismatches == 0;
}

bool Truthfulness(std::string* detail) {
  Rng rng(505);
  double max_gain = 0.0;
  int loser_payments = 0;
  int negative_payments = 0;
  int probes = 0;
  for (int trial = 0; trial < 200; ++trial) {
    MarketInstance inst;
    int spot = 2 + static_cast<int>(rng.Below(7));
    int contract = 1 + static_cast<int>(rng.Below(4));
    inst.graph = oracle::RandomGraph(spot, contract, rng.Uniform(0.2, 0.6), rng);
    for (int n = 0; n < contract; ++n) {
      inst.contracts.push_back(
          Soft(5, rng.Uniform(0, 1.5), rng.Uniform(), 1.0));
    }
    std::vector<double> lambdas(contract);
    for (double& x : lambdas) x = rng.Uniform(0.0, 0.8);
    SpectrumDraw d = SampleSpectrum(inst, rng);
    d.xi = true;
    std::vector<double> lies(50);
    for (double& x : lies) x = rng.Uniform(0.0, 2.0);
    for (SolverKind s : {SolverKind::kExact, SolverKind::kGreedy}) {
      AuctionOutcome out = RunVcg(inst, lambdas, d, s);
      for (int v = 0; v < inst.graph.num_vertices(); ++v) {
        if (!(out.winners & Bit(v)) && out.payments[v] != 0.0) ++loser_payments;
        if (s == SolverKind::kExact && out.payments[v] < 0.0) ++negative_payments;
        max_gain = std::max(max_gain,
                            TruthfulnessProbe(inst, lambdas, d, v, lies, s));
        ++probes;
      }
    }
  }
  *detail = Fmt("%.0f probes, max gain %.2e, loser payments %.0f, ", probes,
                max_gain, loser_payments) +
            Fmt("negative exact payments %.0f", negative_payments);
  return max_gain <= 1e-9 && loser_payments == 0 && negative_payments == 0;
}

double Welfare(const StrategyRow& row) { return row.welfare.expected; }

bool StrategyComparison(const Config& base, int seeds, std::string* detail) {
  const int kinds = static_cast<int>(AllStrategies().size());
  std::vector<double> mean(kinds, 0.0);
  Config config = base;
  config.generator.IRc = 100;
  for (int seed = 1; seed <= seeds; ++seed) {
    SeedContext ctx = PrepareSeed(config, seed);
    for (const StrategyRow& row :
         CompareStrategies(ctx, config.experiment, seed)) {
      mean[static_cast<int>(row.strategy)] += Welfare(row) / seeds;
    }
  }
  const double opt = mean[static_cast<int>(Strategy::kOptimal)];
  bool dominates = true;
  for (int k = 0; k < kinds; ++k) dominates = dominates && opt >= mean[k];
  const double rdn = mean[static_cast<int>(Strategy::kContractRandomDn)];
  const double lift = (opt - rdn) / rdn;
  *detail = Fmt("Optimal %.2f, RandomDn %.2f, lift %.3f (want 0.10..0.30)",
                opt, rdn, lift) +
            (dominates ? ", dominates all" : ", NOT DOMINANT");
  return dominates && lift >= 0.10 && lift <= 0.30;
}

bool SpotOnlyFlat(const Config& base, int seeds, std::string* detail) {
  int changed = 0;
  for (int seed = 1; seed <= seeds; ++seed) {
    double ref = 0.0;
    for (double irc : base.experiment.irc_values) {
      Config config = base;
      config.generator.IRc = irc;
      SeedContext ctx = PrepareSeed(config, seed);
      for (const StrategyRow& row :
           CompareStrategies(ctx, config.experiment, seed)) {
        if (row.strategy != Strategy::kSpotOnly) continue;
        if (irc == base.experiment.irc_values.front()) {
          ref = Welfare(row);
        } else if (Welfare(row) != ref) {
          ++changed;
        }
      }
    }
  }
  *detail = Fmt("%.0f seeds x %.0f IRc values, %.0f differences", seeds,
                base.experiment.irc_values.size(), changed);
  return changed == 0;
}

struct LossGrid {
  std::vector<std::vector<LossBoundReport>> cells;  // [seed][e0]
};

LossGrid LossCells(const Config& config, int seeds) {
  LossGrid g;
  for (int seed = 1; seed <= seeds; ++seed) {
    SeedContext ctx = PrepareSeed(config, seed);
    g.cells.push_back(LossSweep(ctx.inst, ctx.table, ctx.policy,
                                config.experiment, seed,
                                config.experiment.e0_grid));
  }
  return g;
}

bool WelfareRatio(const LossGrid& g, double floor, std::string* detail) {
  std::vector<double> wr0;
  int below_bound = 0;
  double worst_one = 0.0;
  for (const auto& row : g.cells) {
    for (const LossBoundReport& r : row) {
      if (r.achieved_wr < r.bound_wr - 2.0 * r.achieved_wr_stderr) ++below_bound;
      if (r.e0 == 0.0) wr0.push_back(r.achieved_wr);
      if (r.e0 == 1.0) {
        double dev = std::fabs(r.achieved_wr - 1.0);
        if (dev > 2.0 * r.achieved_wr_stderr + 1e-12) {
          worst_one = std::max(worst_one, dev);
        }
      }
    }
  }
  MeanSe s = Summarize(wr0);
  *detail = Fmt("mean WR(e0=0) %.3f +- %.3f (want >= %.2f), ", s.mean, s.se,
                floor) +
            Fmt("cells below bound %.0f, WR(e0=1) excess %.1e", below_bound,
                worst_one);
  return !wr0.empty() && s.mean >= floor && below_bound == 0 &&
         worst_one == 0.0;
}

bool TSign(const LossGrid& g, std::string* detail) {
  int violations = 0;
  double worst = -1e300;
  int cells = 0;
  for (const auto& row : g.cells) {
    for (const LossBoundReport& r : row) {
      for (std::size_t n = 0; n < r.t.size(); ++n) {
        ++cells;
        worst = std::max(worst, r.t[n] - 2.0 * r.t_stderr[n]);
        if (r.t[n] > 2.0 * r.t_stderr[n]) ++violations;
      }
    }
  }
  *detail = Fmt("%.0f cells, %.0f violations, max t - 2se = %.2e", cells,
                violations, worst);
  return cells > 0 && violations == 0;
}

// Mean gap per T over seeds; non-increasing up to twice the standard error
// of the paired differences.
bool Gap(const Config& config, int seeds, std::string* detail) {
  const std::vector<int>& Ts = config.experiment.T_values;
  std::vector<std::vector<double>> gaps(Ts.size());
  for (int seed = 1; seed <= seeds; ++seed) {
    MarketInstance inst = BuildInstance(config, seed);
    std::vector<GapRow> rows = GapSweep(config, inst, seed);
    for (std::size_t i = 0; i < rows.size(); ++i) gaps[i].push_back(rows[i].gap);
  }
  std::string text;
  bool monotone = true;
  double at100 = -1.0;
  for (std::size_t i = 0; i < Ts.size(); ++i) {
    MeanSe s = Summarize(gaps[i]);
    if (Ts[i] == 100) at100 = s.mean;
    text += Fmt("T=%.0f %.4f  ", Ts[i], s.mean);
    if (i == 0) continue;
    std::vector<double> diff(seeds);
    for (int k = 0; k < seeds; ++k) diff[k] = gaps[i][k] - gaps[i - 1][k];
    MeanSe d = Summarize(diff);
    if (d.mean > 2.0 * d.se + 1e-12) monotone = false;
  }
  *detail = text + (monotone ? "non-increasing" : "INCREASING");
  return at100 >= 0.0 && at100 < 0.03 && monotone;
}

// Keeps run "a" under `keep` when it is nonempty.
bool Determinism(const std::string& keep, std::string* detail) {
  Config config = DefaultConfig();
  fs::path root = fs::temp_directory_path() / "hsm_acceptance_determinism";
  fs::remove_all(root);
  Simulate(config, 7, (root / "a").string());
  Simulate(config, 7, (root / "b").string());
  int files = 0;
  int differ = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    ++files;
    fs::path other = root / "b" / entry.path().filename();
    if (!fs::exists(other) ||
        ReadFile(entry.path().string()) != ReadFile(other.string())) {
      ++differ;
    }
  }
  if (!keep.empty()) {
    fs::remove_all(keep);
    fs::create_directories(fs::path(keep).parent_path());
    fs::rename(root / "a", keep);
  }
  fs::remove_all(root);
  *detail = Fmt("%.0f files, %.0f differ", files, differ);
  return files > 0 && differ == 0;
}

}  // namespace
}  // namespace hsm

// Optional argument: directory that receives the CSVs of one simulate run
// and a 20-seed IRc sweep.
int main(int argc, char** argv) {
  using namespace hsm;
  const std::string out = argc > 1 ? argv[1] : "";
  const Config defaults = DefaultConfig();
  const Config binding = BindingConfig();

  Criterion("mwis-oracle", MwisOracle);
  Criterion("schedule-regression", ScheduleRegression);
  Criterion("shadow-price-closed-form", ClosedFormPrice);
  Criterion("shadow-price-dual (default)",
            [&](std::string* d) { return DualChecks(defaults, 5, d); });
  Criterion("shadow-price-dual (binding)",
            [&](std::string* d) { return DualChecks(binding, 5, d); });
  Criterion("micro-optimality", MicroOptimality);
  Criterion("classifier-equivalence", ClassifierEquivalence);
  Criterion("truthfulness", Truthfulness);
  Criterion("optimal-vs-baselines",
            [&](std::string* d) { return StrategyComparison(defaults, 200, d); });
  Criterion("spot-only-flat",
            [&](std::string* d) { return SpotOnlyFlat(defaults, 200, d); });

  LossGrid loss_default;
  LossGrid loss_binding;
  Criterion("welfare-ratio (default)", [&](std::string* d) {
    loss_default = LossCells(defaults, 100);
    return WelfareRatio(loss_default, 0.70, d);
  });
  Criterion("welfare-ratio-bound (binding)", [&](std::string* d) {
    loss_binding = LossCells(binding, 20);
    return WelfareRatio(loss_binding, 0.0, d);
  });
  Criterion("gap (default)",
            [&](std::string* d) { return Gap(defaults, 20, d); });
  Criterion("gap (binding)",
            [&](std::string* d) { return Gap(binding, 20, d); });
  Criterion("t-sign (default)",
            [&](std::string* d) { return TSign(loss_default, d); });
  Criterion("t-sign (binding)",
            [&](std::string* d) { return TSign(loss_binding, d); });
  Criterion("determinism", [&](std::string* d) {
    return Determinism(out.empty() ? "" : out + "/simulate", d);
  });
  if (!out.empty()) {
    Sweep(defaults, "irc", defaults.experiment.irc_values, 1, 20,
          out + "/sweep");
    std::printf("CSVs written to %s\n", out.c_str());
  }

  std::printf("%d failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
