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

#include "policy.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "mwis.h"

namespace hsm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double MaxUtility(const MarketInstance& inst, const SampleSet& samples,
                  int v) {
  double bound = inst.utilities.For(v).UpperBound();
  if (inst.utilities.common_quality) bound *= inst.utilities.q_hi;
  double seen = 0.0;
  for (int s = 0; s < samples.count(); ++s) {
    seen = std::max(seen, samples.Theta(s)[v]);
  }
  return std::isfinite(bound) ? std::max(bound, seen) : seen;
}

std::string FormatVector(const std::vector<double>& v) {
  std::ostringstream out;
  out.precision(6);
  out << "[";
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << "]";
  return out.str();
}

}  // namespace

int ContractSetTable::IndexOf(std::uint32_t member_mask) const {
  for (int i = 0; i < size(); ++i) {
    if (members[i] == member_mask) return i;
  }
  return -1;
}

ContractSetTable BuildContractSets(const ConflictGraph& g) {
  Require(g.num_contract() <= 30, "at most 30 contract users supported");
  std::vector<VertexSet> sets = EnumerateIndependentSets(g, g.contract_mask());
  std::sort(sets.begin(), sets.end(), [](VertexSet a, VertexSet b) {
    if (Count(a) != Count(b)) return Count(a) < Count(b);
    return LexLess(a, b);
  });
  ContractSetTable t;
  t.sets = sets;
  for (VertexSet s : sets) {
    t.side.push_back(SideMarketUnchecked(g, s));
    t.members.push_back(static_cast<std::uint32_t>(s >> g.num_spot()));
  }
  return t;
}

void ComputeSideValues(const ConflictGraph& g, const ContractSetTable& table,
                       const double* theta, double* z) {
  thread_local std::vector<VertexSet> solution;
  solution.resize(table.size());
  const VertexSet* adj = g.adjacency().data();
  for (int i = 0; i < table.size(); ++i) {
    const VertexSet side = table.side[i];
    bool reused = false;
    for (int j = 0; j < i; ++j) {
      if ((side & ~table.side[j]) == 0 && (solution[j] & ~side) == 0) {
        z[i] = z[j];
        solution[i] = solution[j];
        reused = true;
        break;
      }
    }
    if (reused) continue;
    MwisResult r = internal::ExactSearch(adj, theta, side);
    z[i] = r.weight;
    solution[i] = r.set;
  }
}

namespace {

void CheckSpotSize(const MarketInstance& inst) {
  if (inst.M() > kEnumerationLimit) {
    Fail(ErrorCode::kTooLarge, "spot market too large for exact side welfare");
  }
}

}  // namespace

SampleSet DrawSamples(const MarketInstance& inst, const ContractSetTable& t,
                      int count, Rng& rng) {
  Require(count >= 1, "at least one Monte Carlo sample required");
  CheckSpotSize(inst);
  SampleSet out;
  out.num_vertices = inst.graph.num_vertices();
  out.num_sets = t.size();
  out.theta.resize(static_cast<std::size_t>(count) * out.num_vertices);
  out.z.resize(static_cast<std::size_t>(count) * out.num_sets);
  out.prob.assign(count, 1.0 / count);
  for (int s = 0; s < count; ++s) {
    double* theta = &out.theta[static_cast<std::size_t>(s) * out.num_vertices];
    SampleTheta(inst, rng, theta);
    ComputeSideValues(inst.graph, t, theta,
                      &out.z[static_cast<std::size_t>(s) * out.num_sets]);
  }
  return out;
}

SampleSet EnumerateGrid(const MarketInstance& inst, const ContractSetTable& t,
                        std::int64_t max_points) {
  Require(inst.utilities.IsDiscrete(),
          "grid enumeration needs discrete utilities without common quality");
  CheckSpotSize(inst);
  const int v_count = inst.graph.num_vertices();
  std::int64_t points = 1;
  for (int v = 0; v < v_count; ++v) {
    points *= static_cast<std::int64_t>(inst.utilities.For(v).values.size());
    if (points > max_points) Fail(ErrorCode::kTooLarge, "utility grid too large");
  }
  SampleSet out;
  out.exact = true;
  out.num_vertices = v_count;
  out.num_sets = t.size();
  std::vector<std::size_t> digit(v_count, 0);
  std::vector<double> theta(v_count);
  std::vector<double> z(t.size());
  for (std::int64_t p = 0; p < points; ++p) {
    double prob = 1.0;
    for (int v = 0; v < v_count; ++v) {
      const Marginal& m = inst.utilities.For(v);
      theta[v] = m.values[digit[v]];
      prob *= m.probs[digit[v]];
    }
    ComputeSideValues(inst.graph, t, theta.data(), z.data());
    out.theta.insert(out.theta.end(), theta.begin(), theta.end());
    out.z.insert(out.z.end(), z.begin(), z.end());
    out.prob.push_back(prob);
    for (int v = 0; v < v_count; ++v) {
      if (++digit[v] < inst.utilities.For(v).values.size()) break;
      digit[v] = 0;
    }
  }
  return out;
}

Evaluator::Evaluator(const MarketInstance& inst, const ContractSetTable& table,
                     const SampleSet& samples, std::uint32_t active)
    : inst_(inst),
      table_(table),
      samples_(samples),
      active_(active),
      num_sets_(table.size()) {
  Require(samples.num_sets == table.size(), "sample set / table mismatch");
  for (int i = 0; i < num_sets_; ++i) {
    if ((table.members[i] & ~active) == 0) allowed_.push_back(i);
  }
  const int m = inst.M();
  std::vector<double> unit(inst.N());
  for (int n = 0; n < inst.N(); ++n) {
    unit[n] = inst.contracts[n].tau * inst.contracts[n].UnitValue();
  }
  h_.resize(static_cast<std::size_t>(samples.count()) * num_sets_);
  for (int s = 0; s < samples.count(); ++s) {
    const double* theta = samples.Theta(s);
    const double* z = samples.Z(s);
    for (int i = 0; i < num_sets_; ++i) {
      double h = z[i] - z[0];
      for (std::uint32_t rest = table.members[i]; rest; rest &= rest - 1) {
        int n = std::countr_zero(rest);
        h += unit[n] + (1.0 - inst.contracts[n].tau) * theta[m + n];
      }
      h_[static_cast<std::size_t>(s) * num_sets_ + i] = h;
    }
  }
}

double Evaluator::Cmw(int s, int i, const std::vector<double>& lambdas) const {
  double c = H(s, i);
  for (std::uint32_t rest = table_.members[i]; rest; rest &= rest - 1) {
    c -= lambdas[std::countr_zero(rest)];
  }
  return c;
}

int Evaluator::Classify(int s, const std::vector<double>& lambdas) const {
  int best = 0;
  double best_value = 0.0;
  for (int i : allowed_) {
    if (i == 0) continue;
    double c = Cmw(s, i, lambdas);
    if (c > best_value) {
      best_value = c;
      best = i;
    }
  }
  return best;
}

std::vector<int> Evaluator::ClassifyAll(
    const std::vector<double>& lambdas) const {
  std::vector<int> labels(samples_.count());
  for (int s = 0; s < samples_.count(); ++s) labels[s] = Classify(s, lambdas);
  return labels;
}

std::vector<double> Evaluator::DemandFromLabels(
    const std::vector<int>& labels) const {
  std::vector<double> d(inst_.N(), 0.0);
  for (int s = 0; s < samples_.count(); ++s) {
    for (std::uint32_t rest = table_.members[labels[s]]; rest;
         rest &= rest - 1) {
      d[std::countr_zero(rest)] += samples_.prob[s];
    }
  }
  for (double& x : d) x *= inst_.RhoS();
  return d;
}

std::pair<double, double> Evaluator::ExpectedDemand(
    const std::vector<double>& lambdas, int n) const {
  double p = 0.0;
  for (int s = 0; s < samples_.count(); ++s) {
    if (table_.Has(Classify(s, lambdas), n)) p += samples_.prob[s];
  }
  double se = samples_.exact
                  ? 0.0
                  : inst_.RhoS() *
                        std::sqrt(std::max(0.0, p * (1.0 - p)) /
                                  samples_.count());
  return {inst_.RhoS() * p, se};
}

WelfareDecomposition Evaluator::Welfare(const std::vector<int>& labels) const {
  const int m = inst_.M();
  const int n_count = inst_.N();
  const double rho_s = inst_.RhoS();
  WelfareDecomposition w;
  w.side_by_set.assign(num_sets_, 0.0);
  w.utilization.assign(n_count, 0.0);
  w.expected_demand.assign(n_count, 0.0);
  for (int s = 0; s < samples_.count(); ++s) {
    const int i = labels[s];
    const double p = samples_.prob[s];
    w.side_by_set[i] += p * samples_.Z(s)[i];
    for (std::uint32_t rest = table_.members[i]; rest; rest &= rest - 1) {
      int n = std::countr_zero(rest);
      w.expected_demand[n] += p;
      w.utilization[n] += p * samples_.Theta(s)[m + n];
    }
  }
  for (double& x : w.side_by_set) {
    x *= rho_s;
    w.spot += x;
  }
  w.personal.resize(n_count);
  w.contract_welfare.resize(n_count);
  w.total = w.spot;
  for (int n = 0; n < n_count; ++n) {
    const Contract& c = inst_.contracts[n];
    w.expected_demand[n] *= rho_s;
    w.utilization[n] *= rho_s;
    w.personal[n] = c.payment - Penalty(c, w.expected_demand[n]);
    w.contract_welfare[n] =
        c.tau * w.personal[n] + (1.0 - c.tau) * w.utilization[n];
    w.total += w.contract_welfare[n];
  }
  return w;
}

void Evaluator::Thresholds(const std::vector<double>& lambdas, int n,
                           std::vector<double>* thresholds,
                           std::vector<char>* tie_wins) const {
  thresholds->assign(samples_.count(), -kInf);
  tie_wins->assign(samples_.count(), 0);
  for (int s = 0; s < samples_.count(); ++s) {
    double with_n = -kInf;
    int with_idx = -1;
    double without_n = 0.0;
    int without_idx = 0;
    for (int i : allowed_) {
      if (i == 0) continue;
      if (table_.Has(i, n)) {
        double c = H(s, i);
        for (std::uint32_t rest = table_.members[i] & ~(1u << n); rest;
             rest &= rest - 1) {
          c -= lambdas[std::countr_zero(rest)];
        }
        if (c > with_n) {
          with_n = c;
          with_idx = i;
        }
      } else {
        double c = Cmw(s, i, lambdas);
        if (c > without_n) {
          without_n = c;
          without_idx = i;
        }
      }
    }
    if (with_idx < 0) continue;
    (*thresholds)[s] = with_n - without_n;
    (*tie_wins)[s] = with_idx < without_idx;
  }
}

std::uint32_t DefaultActiveMask(const MarketInstance& inst) {
  std::uint32_t mask = 0;
  for (int n = 0; n < inst.N(); ++n) {
    if (inst.contracts[n].demand > 0.0) mask |= 1u << n;
  }
  return mask;
}

double CoreMarginalWelfare(const MarketInstance& inst,
                           const ContractSetTable& table,
                           const std::vector<double>& lambdas,
                           const SpectrumDraw& draw, int set_index) {
  Require(set_index >= 0 && set_index < table.size(), "set index out of range");
  if (set_index == 0) return 0.0;
  const int m = inst.M();
  VertexWeights spot(draw.theta.begin(), draw.theta.end());
  double z0 = MwisExact(inst.graph, spot, table.side[0]).weight;
  double zi = MwisExact(inst.graph, spot, table.side[set_index]).weight;
  double value = zi - z0;
  for (std::uint32_t rest = table.members[set_index]; rest; rest &= rest - 1) {
    int n = std::countr_zero(rest);
    const Contract& c = inst.contracts[n];
    value += c.tau * c.UnitValue() + (1.0 - c.tau) * draw.theta[m + n];
  }
  for (std::uint32_t rest = table.members[set_index]; rest; rest &= rest - 1) {
    value -= lambdas[std::countr_zero(rest)];
  }
  return inst.RhoS() * value;
}

int ClassifyTheta(const MarketInstance& inst, const ContractSetTable& table,
                  const std::vector<double>& lambdas,
                  const SpectrumDraw& draw) {
  if (!draw.xi) Fail(ErrorCode::kBusySlot, "busy spectrum has no label");
  SampleSet one;
  one.num_vertices = inst.graph.num_vertices();
  one.num_sets = table.size();
  one.theta = draw.theta;
  one.z.resize(table.size());
  one.prob = {1.0};
  one.exact = true;
  ComputeSideValues(inst.graph, table, one.theta.data(), one.z.data());
  Evaluator eval(inst, table, one, DefaultActiveMask(inst));
  return eval.Classify(0, lambdas);
}

namespace {

// Probability mass allocated to n when its price is x.
double DemandAt(const std::vector<double>& thr, const std::vector<char>& tie,
                const std::vector<double>& prob, double x) {
  double p = 0.0;
  for (std::size_t s = 0; s < thr.size(); ++s) {
    if (x < thr[s] || (x == thr[s] && tie[s])) p += prob[s];
  }
  return p;
}

// Smallest price in [lo, hi] whose demand does not exceed `target`, found by
// bisection. Returns lo when demand(lo) already fits.
double BisectPrice(const std::vector<double>& thr, const std::vector<char>& tie,
                   const std::vector<double>& prob, double rho_s,
                   double target, double lo, double hi, double tol) {
  if (rho_s * DemandAt(thr, tie, prob, lo) <= target) return lo;
  const double width_floor = 1e-13 * (1.0 + std::fabs(hi) + std::fabs(lo));
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double d = rho_s * DemandAt(thr, tie, prob, mid);
    if (d > target) {
      lo = mid;
    } else {
      hi = mid;
      if (target - d <= tol * target) break;
    }
    if (hi - lo <= width_floor) break;
  }
  return hi;
}

// Demand tolerance for matching D: relative tolerance or the mass of one
// sample, whichever is larger.
double DemandSlack(const SampleSet& samples, double rho_s, double demand,
                   double tol) {
  double p_max = 0.0;
  for (double p : samples.prob) p_max = std::max(p_max, p);
  return std::max(tol * demand, rho_s * p_max);
}

}  // namespace

void AttachDiagnostics(const Evaluator& eval, Policy* policy) {
  const MarketInstance& inst = eval.instance();
  std::vector<int> labels = eval.ClassifyAll(policy->lambdas);
  WelfareDecomposition w = eval.Welfare(labels);
  policy->expected_demand = w.expected_demand;
  policy->expected_demand_stderr.assign(inst.N(), 0.0);
  const SampleSet& samples = eval.samples();
  if (!samples.exact) {
    for (int n = 0; n < inst.N(); ++n) {
      double p = w.expected_demand[n] / inst.RhoS();
      policy->expected_demand_stderr[n] =
          inst.RhoS() * std::sqrt(std::max(0.0, p * (1.0 - p)) /
                                  samples.count());
    }
  }
  double total = w.total;
  for (int n : policy->satisfied_set) {
    // A satisfied hard contract meets its demand up to solver tolerance.
    const Contract& c = inst.contracts[n];
    total += c.tau * (c.payment - w.personal[n]);
  }
  policy->expected_welfare = total;
}

Policy SolveShadowPrices(const Evaluator& eval, double tol, int max_iter) {
  const MarketInstance& inst = eval.instance();
  const SampleSet& samples = eval.samples();
  Require(tol > 0.0, "tolerance must be positive");
  Require(max_iter >= 1, "max_iter must be positive");
  for (const auto& c : inst.contracts) {
    Require(c.penalty_kind == PenaltyKind::kSoft,
            "shadow-price solver takes soft contracts only");
  }
  const int n_count = inst.N();
  const double rho_s = inst.RhoS();
  double lambda_max = 0.0;
  for (int n = 0; n < n_count; ++n) {
    const Contract& c = inst.contracts[n];
    double u_max = MaxUtility(inst, samples, inst.M() + n);
    lambda_max =
        std::max(lambda_max, c.tau * c.UnitValue() + (1.0 - c.tau) * u_max);
  }

  Policy policy;
  policy.kind = PenaltyKind::kSoft;
  policy.active = eval.active();
  policy.lambdas.assign(n_count, 0.0);
  policy.samples = samples.count();
  std::vector<double> thr;
  std::vector<char> tie;
  for (int sweep = 1; sweep <= max_iter; ++sweep) {
    double change = 0.0;
    for (int n = 0; n < n_count; ++n) {
      if (!((eval.active() >> n) & 1u)) continue;
      eval.Thresholds(policy.lambdas, n, &thr, &tie);
      double target = BisectPrice(thr, tie, samples.prob, rho_s,
                                  inst.contracts[n].demand, 0.0, lambda_max,
                                  tol);
      double old = policy.lambdas[n];
      double next = sweep > 20 ? 0.5 * old + 0.5 * target : target;
      policy.lambdas[n] = next;
      change = std::max(change, std::fabs(next - old));
    }
    policy.trace.push_back(policy.lambdas);
    policy.sweeps = sweep;
    if (change <= tol) {
      policy.converged = true;
      break;
    }
  }
  if (!policy.converged) {
    throw SolveError("shadow prices did not converge after " +
                         std::to_string(max_iter) + " sweeps; last " +
                         FormatVector(policy.lambdas),
                     policy.trace);
  }
  AttachDiagnostics(eval, &policy);
  policy.atom.assign(n_count, false);
  for (int n = 0; n < n_count; ++n) {
    const double d = inst.contracts[n].demand;
    if (policy.lambdas[n] > 0.0 &&
        std::fabs(policy.expected_demand[n] - d) >
            DemandSlack(samples, rho_s, d, tol)) {
      policy.atom[n] = true;
      policy.notes.push_back("user " + std::to_string(n + 1) +
                             ": demand level not reachable exactly (atom)");
    }
  }
  return policy;
}

Policy SolveShadowPrices(const MarketInstance& inst, const MonteCarloSpec& mc,
                         double tol, int max_iter) {
  inst.Validate();
  ContractSetTable table = BuildContractSets(inst.graph);
  Rng rng = Rng::Stream(mc.seed, "mc");
  SampleSet samples = DrawSamples(inst, table, mc.samples, rng);
  Evaluator eval(inst, table, samples, DefaultActiveMask(inst));
  Policy policy = SolveShadowPrices(eval, tol, max_iter);
  policy.seed = mc.seed;
  return policy;
}

Policy SolveHardContracts(const MarketInstance& inst,
                          const ContractSetTable& table,
                          const SampleSet& samples, double tol,
                          int max_iter) {
  for (const auto& c : inst.contracts) {
    Require(c.penalty_kind == PenaltyKind::kHard,
            "hard-contract solver takes hard contracts only");
  }
  std::vector<int> candidates;
  for (int n = 0; n < inst.N(); ++n) {
    if (inst.contracts[n].demand > 0.0) candidates.push_back(n);
  }
  if (candidates.size() > 12) {
    Fail(ErrorCode::kTooLarge, "hard-contract enumeration limited to 12 users");
  }
  const int n_count = inst.N();
  const double rho_s = inst.RhoS();
  double z0_max = 0.0;
  for (int s = 0; s < samples.count(); ++s) {
    z0_max = std::max(z0_max, samples.Z(s)[0]);
  }
  double lambda_hi = 0.0;
  double lambda_span = z0_max + 1.0;
  for (int n = 0; n < n_count; ++n) {
    const Contract& c = inst.contracts[n];
    double top = c.tau * c.UnitValue() +
                 (1.0 - c.tau) * MaxUtility(inst, samples, inst.M() + n);
    lambda_hi = std::max(lambda_hi, top);
    lambda_span += std::fabs(top);
  }
  const double lambda_lo = -lambda_span;

  Policy best;
  bool have_best = false;
  std::vector<std::string> notes;
  std::vector<double> thr;
  std::vector<char> tie;
  const std::uint32_t subsets = 1u << candidates.size();
  for (std::uint32_t pick = 0; pick < subsets; ++pick) {
    std::uint32_t active = 0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if ((pick >> k) & 1u) active |= 1u << candidates[k];
    }
    Evaluator eval(inst, table, samples, active);
    Policy p;
    p.kind = PenaltyKind::kHard;
    p.active = active;
    p.lambdas.assign(n_count, 0.0);
    p.samples = samples.count();
    bool feasible = true;
    for (int sweep = 1; sweep <= max_iter && feasible; ++sweep) {
      double change = 0.0;
      for (int n = 0; n < n_count; ++n) {
        if (!((active >> n) & 1u)) continue;
        eval.Thresholds(p.lambdas, n, &thr, &tie);
        const double d = inst.contracts[n].demand;
        if (rho_s * DemandAt(thr, tie, samples.prob, lambda_lo) <
            d - DemandSlack(samples, rho_s, d, tol)) {
          feasible = false;
          break;
        }
        double target = BisectPrice(thr, tie, samples.prob, rho_s, d,
                                    lambda_lo, lambda_hi, tol);
        double old = p.lambdas[n];
        double next = sweep > 20 ? 0.5 * old + 0.5 * target : target;
        p.lambdas[n] = next;
        change = std::max(change, std::fabs(next - old));
      }
      p.trace.push_back(p.lambdas);
      p.sweeps = sweep;
      if (change <= tol) {
        p.converged = true;
        break;
      }
    }
    std::ostringstream label;
    label << "satisfied subset mask " << active;
    if (!feasible) {
      notes.push_back(label.str() + " discarded: demand unreachable");
      continue;
    }
    if (!p.converged) {
      notes.push_back(label.str() + " discarded: no convergence");
      continue;
    }
    std::vector<double> demand = eval.DemandFromLabels(eval.ClassifyAll(p.lambdas));
    bool met = true;
    for (int n = 0; n < n_count; ++n) {
      const double d = inst.contracts[n].demand;
      if (((active >> n) & 1u) &&
          std::fabs(demand[n] - d) > DemandSlack(samples, rho_s, d, tol)) {
        met = false;
      }
    }
    if (!met) {
      notes.push_back(label.str() + " discarded: equality not attained");
      continue;
    }
    for (int n = 0; n < n_count; ++n) {
      if ((active >> n) & 1u) p.satisfied_set.push_back(n);
    }
    AttachDiagnostics(eval, &p);
    if (!have_best || p.expected_welfare > best.expected_welfare) {
      best = p;
      have_best = true;
    }
  }
  if (!have_best) Fail(ErrorCode::kInfeasible, "no hard-contract outcome found");
  best.notes.insert(best.notes.end(), notes.begin(), notes.end());
  best.atom.assign(n_count, false);
  return best;
}

Policy SolveHardContracts(const MarketInstance& inst, const MonteCarloSpec& mc,
                          double tol) {
  inst.Validate();
  ContractSetTable table = BuildContractSets(inst.graph);
  Rng rng = Rng::Stream(mc.seed, "mc");
  SampleSet samples = DrawSamples(inst, table, mc.samples, rng);
  Policy policy = SolveHardContracts(inst, table, samples, tol);
  policy.seed = mc.seed;
  return policy;
}

DualCertificate VerifyKkt(const MarketInstance& inst, const Policy& policy,
                          const ContractSetTable& table,
                          const SampleSet& samples, double tol) {
  Evaluator eval(inst, table, samples, policy.active);
  DualCertificate cert;
  const auto& lambdas = policy.lambdas;
  std::vector<int> labels(samples.count());
  std::vector<double> cmw(table.size());
  double eta_sum = 0.0;
  for (int s = 0; s < samples.count(); ++s) {
    double w1 = -kInf;
    double w2 = -kInf;
    int i1 = 0;
    for (int i : eval.allowed()) {
      if (i == 0) continue;
      cmw[i] = eval.Cmw(s, i, lambdas);
      if (cmw[i] > w1) {
        w2 = w1;
        w1 = cmw[i];
        i1 = i;
      } else if (cmw[i] > w2) {
        w2 = cmw[i];
      }
    }
    const double eta = std::max(0.0, w1);
    eta_sum += samples.prob[s] * eta;
    double v4 = 0.0;
    if (w1 > 0.0) {
      double lo = std::max(0.0, w2);
      v4 = std::max({0.0, lo - eta, eta - w1});
    } else {
      v4 = std::fabs(eta);
    }
    cert.eta_range_violation = std::max(cert.eta_range_violation, v4);
    const int label = eval.Classify(s, lambdas);
    labels[s] = label;
    int positive_inner = 0;
    for (int i : eval.allowed()) {
      if (i == 0) continue;
      const double imw = cmw[i] - eta;
      const double mu = std::max(0.0, -imw);
      double v3 = imw >= 0.0 ? mu : std::max({0.0, mu - std::fabs(imw), -mu});
      cert.mu_range_violation = std::max(cert.mu_range_violation, v3);
      if (imw > 0.0) ++positive_inner;
      if (i == label) {
        cert.complementarity_violation =
            std::max(cert.complementarity_violation, mu);
      }
    }
    if (positive_inner > 1) {
      cert.eta_range_violation = std::max(cert.eta_range_violation, 1.0);
    }
    if (label == 0) {
      cert.complementarity_violation =
          std::max(cert.complementarity_violation, eta);
    }
    const int expected = w1 > 0.0 ? i1 : 0;
    if (label != expected) ++cert.sign_rule_mismatches;
  }
  cert.mean_eta = eta_sum;
  std::vector<double> demand = eval.DemandFromLabels(labels);
  const double rho_s = inst.RhoS();
  cert.slackness.assign(inst.N(), 0.0);
  cert.primal_excess.assign(inst.N(), 0.0);
  for (int n = 0; n < inst.N(); ++n) {
    if (!((policy.active >> n) & 1u)) continue;
    const double d = inst.contracts[n].demand;
    cert.slackness[n] = std::fabs(lambdas[n] * (d - demand[n])) / rho_s;
    if (policy.kind == PenaltyKind::kSoft) {
      cert.primal_excess[n] = std::max(0.0, demand[n] - d) / rho_s;
      cert.dual_sign_violation =
          std::max(cert.dual_sign_violation, std::max(0.0, -lambdas[n]));
    } else {
      cert.primal_excess[n] = std::fabs(demand[n] - d) / rho_s;
    }
  }
  cert.pass = cert.mu_range_violation <= tol && cert.eta_range_violation <= tol &&
              cert.complementarity_violation <= tol &&
              cert.sign_rule_mismatches == 0 &&
              cert.dual_sign_violation <= tol;
  for (int n = 0; n < inst.N(); ++n) {
    if (cert.slackness[n] > tol || cert.primal_excess[n] > tol) {
      cert.pass = false;
    }
  }
  return cert;
}

SemSolution SemOracleDeterministic(const MarketInstance& inst,
                                   const std::vector<SpectrumDraw>& draws) {
  const ConflictGraph& g = inst.graph;
  if (g.num_vertices() > 10) {
    Fail(ErrorCode::kTooLarge, "deterministic oracle limited to 10 users");
  }
  std::vector<int> idle;
  for (std::size_t t = 0; t < draws.size(); ++t) {
    Require(static_cast<int>(draws[t].theta.size()) == g.num_vertices(),
            "draw size mismatch");
    if (draws[t].xi) idle.push_back(static_cast<int>(t));
  }
  if (idle.size() > 12) {
    Fail(ErrorCode::kTooLarge, "deterministic oracle limited to 12 idle slots");
  }
  const int m = inst.M();
  const int n_count = inst.N();
  std::vector<VertexSet> sets = EnumerateIndependentSets(g, g.all());

  struct Option {
    VertexSet set;
    double value;
    std::uint32_t members;
    double bound;
  };
  std::vector<std::vector<Option>> options(idle.size());
  std::vector<double> slot_bound(idle.size() + 1, 0.0);
  for (std::size_t k = 0; k < idle.size(); ++k) {
    const auto& theta = draws[idle[k]].theta;
    for (VertexSet s : sets) {
      Option o{s, 0.0, 0, 0.0};
      for (int v : Members(s)) {
        if (v < m) {
          o.value += theta[v];
        } else {
          const Contract& c = inst.contracts[v - m];
          o.value += (1.0 - c.tau) * theta[v];
          o.members |= 1u << (v - m);
          if (c.penalty_kind == PenaltyKind::kSoft) {
            o.bound += c.tau * c.unit_penalty;
          }
        }
      }
      o.bound += o.value;
      options[k].push_back(o);
    }
    std::sort(options[k].begin(), options[k].end(),
              [](const Option& a, const Option& b) { return a.bound > b.bound; });
  }
  for (int k = static_cast<int>(idle.size()) - 1; k >= 0; --k) {
    slot_bound[k] = slot_bound[k + 1] + options[k].front().bound;
  }
  double hard_relief = 0.0;
  for (const auto& c : inst.contracts) {
    if (c.penalty_kind == PenaltyKind::kHard) hard_relief += c.tau * c.total_penalty;
  }

  auto personal_total = [&](const std::vector<int>& d) {
    double total = 0.0;
    for (int n = 0; n < n_count; ++n) {
      const Contract& c = inst.contracts[n];
      total += c.tau * (c.payment - Penalty(c, d[n]));
    }
    return total;
  };

  std::vector<int> delivered(n_count, 0);
  std::vector<VertexSet> choice(idle.size(), 0);
  std::vector<VertexSet> best_choice(idle.size(), 0);
  double best = -kInf;
  std::function<void(std::size_t, double)> dfs = [&](std::size_t k,
                                                     double value) {
    double base = value + personal_total(delivered);
    if (k == idle.size()) {
      if (base > best + 1e-12) {
        best = base;
        best_choice = choice;
      }
      return;
    }
    if (base + slot_bound[k] + hard_relief <= best + 1e-12) return;
    for (const Option& o : options[k]) {
      bool ok = true;
      for (std::uint32_t rest = o.members; rest; rest &= rest - 1) {
        int n = std::countr_zero(rest);
        if (delivered[n] + 1 > inst.contracts[n].demand) ok = false;
      }
      if (!ok) continue;
      for (std::uint32_t rest = o.members; rest; rest &= rest - 1) {
        ++delivered[std::countr_zero(rest)];
      }
      choice[k] = o.set;
      dfs(k + 1, value + o.value);
      for (std::uint32_t rest = o.members; rest; rest &= rest - 1) {
        --delivered[std::countr_zero(rest)];
      }
    }
  };
  dfs(0, 0.0);

  SemSolution out;
  out.allocation.assign(draws.size(), 0);
  for (std::size_t k = 0; k < idle.size(); ++k) {
    out.allocation[idle[k]] = best_choice[k];
  }
  out.ledger = RealizedWelfare(inst, out.allocation, draws);
  out.welfare = out.ledger.total;
  return out;
}

}  // namespace hsm
