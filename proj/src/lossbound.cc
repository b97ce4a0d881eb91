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

#include "lossbound.h"

#include <algorithm>
#include <cmath>

namespace hsm {

std::vector<double> ApproximateCmw(const MarketInstance& inst,
                                   const ContractSetTable& table,
                                   const std::vector<double>& lambdas,
                                   const SpectrumDraw& draw,
                                   const std::vector<double>& eps) {
  Require(static_cast<int>(eps.size()) == table.size(),
          "one ratio per contract set");
  for (double e : eps) Require(e >= 0.0 && e <= 1.0, "ratios must lie in [0,1]");
  VertexWeights spot(draw.theta.begin(), draw.theta.end());
  const double z0 = MwisExact(inst.graph, spot, table.side[0]).weight;
  std::vector<double> out(table.size(), 0.0);
  for (int i = 1; i < table.size(); ++i) {
    double zi = MwisExact(inst.graph, spot, table.side[i]).weight;
    double precise = CoreMarginalWelfare(inst, table, lambdas, draw, i);
    out[i] = precise +
             inst.RhoS() * ((eps[i] - 1.0) * zi - (eps[0] - 1.0) * z0);
  }
  return out;
}

double AnalyticalWrBound(double eps_bar, const std::vector<double>& t,
                         double rho_s, double optimal_welfare,
                         const std::vector<double>& contract_welfare) {
  if (!(optimal_welfare > 0.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "welfare ratio bound needs positive optimal welfare");
  }
  Require(t.size() == contract_welfare.size(), "component size mismatch");
  double bound = eps_bar;
  for (std::size_t n = 0; n < t.size(); ++n) {
    bound += ((1.0 - eps_bar) * contract_welfare[n] + rho_s * t[n]) /
             optimal_welfare;
  }
  return bound;
}

namespace {

struct RangeStats {
  std::vector<double> p_precise;
  std::vector<double> p_degraded;
  std::vector<std::vector<double>> beta;
  std::vector<double> phi;
  std::vector<double> gamma;
  std::vector<double> t;
  std::vector<double> degraded_demand;
  std::vector<double> contract_welfare;
  double optimal = 0.0;
  double achieved = 0.0;
  double achieved_wr = 0.0;
  double bound_wr = 0.0;
};

class LossAccumulator {
 public:
  LossAccumulator(const Evaluator& eval, const std::vector<double>& lambdas,
                  const std::vector<double>& eps, double eps_bar)
      : eval_(eval), lambdas_(lambdas), eps_(eps), eps_bar_(eps_bar) {
    const int count = eval.samples().count();
    precise_ = eval.ClassifyAll(lambdas);
    degraded_.resize(count);
    const int sets = eval.table().size();
    for (int s = 0; s < count; ++s) {
      const double* z = eval.samples().Z(s);
      const double* e = &eps[static_cast<std::size_t>(s) * sets];
      int best = 0;
      double best_value = 0.0;
      for (int i : eval.allowed()) {
        if (i == 0) continue;
        double c = eval.Cmw(s, i, lambdas) + (e[i] - 1.0) * z[i] -
                   (e[0] - 1.0) * z[0];
        if (c > best_value) {
          best_value = c;
          best = i;
        }
      }
      degraded_[s] = best;
    }
  }

  RangeStats Compute(int begin, int end) const {
    const MarketInstance& inst = eval_.instance();
    const ContractSetTable& table = eval_.table();
    const SampleSet& samples = eval_.samples();
    const int sets = table.size();
    const int n_count = inst.N();
    const int m = inst.M();
    const double rho_s = inst.RhoS();
    RangeStats r;
    r.p_precise.assign(sets, 0.0);
    r.p_degraded.assign(sets, 0.0);
    r.beta.assign(sets, std::vector<double>(sets, 0.0));
    r.phi.assign(sets, 0.0);
    std::vector<double> d_opt(n_count, 0.0), u_opt(n_count, 0.0);
    std::vector<double> d_deg(n_count, 0.0), u_deg(n_count, 0.0);
    double spot_opt = 0.0;
    double spot_deg = 0.0;
    double mass = 0.0;
    for (int s = begin; s < end; ++s) mass += samples.prob[s];
    for (int s = begin; s < end; ++s) {
      const double p = samples.prob[s] / mass;
      const double* z = samples.Z(s);
      const double* theta = samples.Theta(s);
      const double* e = &eps_[static_cast<std::size_t>(s) * sets];
      const int a = precise_[s];
      const int b = degraded_[s];
      r.p_precise[a] += p;
      r.p_degraded[b] += p;
      r.beta[a][b] += p;
      r.phi[a] += p * (1.0 - e[a]) * z[a];
      spot_opt += p * z[a];
      spot_deg += p * e[b] * z[b];
      for (std::uint32_t rest = table.members[a]; rest; rest &= rest - 1) {
        int n = std::countr_zero(rest);
        d_opt[n] += p;
        u_opt[n] += p * theta[m + n];
      }
      for (std::uint32_t rest = table.members[b]; rest; rest &= rest - 1) {
        int n = std::countr_zero(rest);
        d_deg[n] += p;
        u_deg[n] += p * theta[m + n];
      }
    }
    for (double& x : r.phi) x *= rho_s;
    r.optimal = rho_s * spot_opt;
    r.achieved = rho_s * spot_deg;
    r.contract_welfare.resize(n_count);
    r.degraded_demand.resize(n_count);
    for (int n = 0; n < n_count; ++n) {
      const Contract& c = inst.contracts[n];
      r.contract_welfare[n] =
          c.tau * (c.payment - Penalty(c, rho_s * d_opt[n])) +
          (1.0 - c.tau) * rho_s * u_opt[n];
      r.degraded_demand[n] = rho_s * d_deg[n];
      r.optimal += r.contract_welfare[n];
      r.achieved += c.tau * (c.payment - Penalty(c, rho_s * d_deg[n])) +
                    (1.0 - c.tau) * rho_s * u_deg[n];
    }
    r.gamma.assign(n_count, 0.0);
    for (int i = 0; i < sets; ++i) {
      const double delta = r.p_precise[i] - r.p_degraded[i];
      for (std::uint32_t rest = table.members[i]; rest; rest &= rest - 1) {
        r.gamma[std::countr_zero(rest)] += delta;
      }
    }
    r.t.resize(n_count);
    for (int n = 0; n < n_count; ++n) {
      const double unit = inst.contracts[n].UnitValue();
      r.t[n] = (unit - lambdas_[n]) * r.gamma[n] -
               unit * std::max(0.0, r.gamma[n]);
    }
    r.achieved_wr = r.achieved / r.optimal;
    r.bound_wr = AnalyticalWrBound(eps_bar_, r.t, rho_s, r.optimal,
                                   r.contract_welfare);
    return r;
  }

 private:
  const Evaluator& eval_;
  const std::vector<double>& lambdas_;
  const std::vector<double>& eps_;
  double eps_bar_;
  std::vector<int> precise_;
  std::vector<int> degraded_;
};

double BatchStderr(const std::vector<double>& values) {
  const double k = static_cast<double>(values.size());
  if (values.size() < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= k;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (k - 1.0) / k);
}

}  // namespace

LossBoundReport AnalyzeLoss(const Evaluator& eval,
                            const std::vector<double>& lambdas, double e0,
                            Rng& eps_rng, int batches) {
  Require(e0 >= 0.0 && e0 <= 1.0, "e0 must lie in [0,1]");
  Require(batches >= 1, "at least one batch");
  const MarketInstance& inst = eval.instance();
  const SampleSet& samples = eval.samples();
  const int sets = eval.table().size();
  const int count = samples.count();
  std::vector<double> eps(static_cast<std::size_t>(count) * sets);
  for (double& e : eps) e = eps_rng.Uniform(e0, 1.0);

  LossBoundReport rep;
  rep.e0 = e0;
  rep.eps_bar = 0.5 * (1.0 + e0);
  rep.eps_bar_by_set.assign(sets, rep.eps_bar);
  LossAccumulator acc(eval, lambdas, eps, rep.eps_bar);
  RangeStats all = acc.Compute(0, count);
  rep.phi = all.phi;
  rep.beta = all.beta;
  rep.delta.resize(sets);
  for (int i = 0; i < sets; ++i) rep.delta[i] = all.p_precise[i] - all.p_degraded[i];
  rep.gamma = all.gamma;
  rep.t = all.t;
  rep.degraded_demand = all.degraded_demand;
  rep.x.resize(inst.N());
  for (int n = 0; n < inst.N(); ++n) {
    rep.x[n] = inst.contracts[n].UnitValue() - lambdas[n];
  }
  rep.y.assign(sets, 0.0);
  for (int i = 0; i < sets; ++i) {
    for (std::uint32_t rest = eval.table().members[i]; rest; rest &= rest - 1) {
      rep.y[i] += rep.x[std::countr_zero(rest)];
    }
  }
  rep.optimal_welfare = all.optimal;
  rep.optimal_contract_welfare = all.contract_welfare;
  rep.achieved_welfare = all.achieved;
  rep.achieved_wr = all.achieved_wr;
  rep.bound_wr = all.bound_wr;
  rep.gamma_stderr.assign(inst.N(), 0.0);
  rep.t_stderr.assign(inst.N(), 0.0);
  if (samples.exact || batches < 2 || count < 2 * batches) return rep;

  std::vector<double> wr, bound;
  std::vector<std::vector<double>> gamma(inst.N()), t(inst.N());
  for (int b = 0; b < batches; ++b) {
    int begin = static_cast<int>(static_cast<std::int64_t>(count) * b / batches);
    int end = static_cast<int>(static_cast<std::int64_t>(count) * (b + 1) / batches);
    RangeStats r = acc.Compute(begin, end);
    wr.push_back(r.achieved_wr);
    bound.push_back(r.bound_wr);
    for (int n = 0; n < inst.N(); ++n) {
      gamma[n].push_back(r.gamma[n]);
      t[n].push_back(r.t[n]);
    }
  }
  rep.achieved_wr_stderr = BatchStderr(wr);
  rep.bound_wr_stderr = BatchStderr(bound);
  for (int n = 0; n < inst.N(); ++n) {
    rep.gamma_stderr[n] = BatchStderr(gamma[n]);
    rep.t_stderr[n] = BatchStderr(t[n]);
  }
  return rep;
}

LossBoundReport MeasureAchievedWr(const MarketInstance& inst,
                                  const Policy& policy, double e0,
                                  const MonteCarloSpec& mc) {
  ContractSetTable table = BuildContractSets(inst.graph);
  Rng sample_rng = Rng::Stream(mc.seed, "lossbound");
  SampleSet samples = DrawSamples(inst, table, mc.samples, sample_rng);
  Evaluator eval(inst, table, samples, policy.active);
  Rng eps_rng = Rng::Stream(mc.seed, "epsilon");
  return AnalyzeLoss(eval, policy.lambdas, e0, eps_rng);
}

}  // namespace hsm
