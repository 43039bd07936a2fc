//
// Copyright 2026 The htdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "htdp/bench.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "htdp/status_macros.h"

namespace htdp {
namespace {

constexpr uint64_t kSolverSeedSalt = 0x9e3779b97f4a7c15ULL;

uint64_t MixSeed(uint64_t a, uint64_t b) {
  uint64_t z = a + kSolverSeedSalt * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double EvaluateExcessRisk(const InstanceSpec& spec, const Vector& w) {
  const double excess = spec.PopulationRisk(w) - spec.population_optimum;
  if (excess < 0.0 && excess > kExcessRiskFloor) return 0.0;
  return excess;
}

MonteCarloEstimate MonteCarloRisk(const InstanceSpec& spec, const Vector& w,
                                  int draws, Rng& rng) {
  const LossModel model = spec.loss();
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    const double v = model.Value(w, DrawSample(spec, rng));
    sum += v;
    sum_sq += v * v;
  }
  MonteCarloEstimate est;
  if (draws <= 0) return est;
  est.mean = sum / draws;
  const double var = std::max(0.0, sum_sq / draws - est.mean * est.mean);
  est.standard_error = std::sqrt(var / draws);
  return est;
}

Vector MeanFromSco(const Vector& w, double m) {
  const double norm = w.norm();
  if (norm == 0.0) {
    Vector e = Vector::Zero(w.size());
    if (e.size() > 0) e[0] = m;
    return e;
  }
  return (-m / norm) * w;
}

double TheoryRate(const MomentSpec& moment, double D, int d, int n,
                  double epsilon, double delta) {
  const double log_term = std::log(1.0 / delta);
  return moment.G_k * D *
             std::pow(d * log_term / (n * epsilon), 1.0 - 1.0 / moment.k) +
         moment.G_2 * D * std::sqrt(log_term / n);
}

void WriteResultHeader(std::ostream& out) {
  out << "instance_id,n,d,epsilon,delta,seed,solver,excess_risk,theory_rate,"
         "runtime_ms,certified\n";
}

void WriteResultRow(const ResultRow& r, std::ostream& out) {
  out << absl::StrFormat("%s,%d,%d,%.17g,%.17g,%d,%s,%.17g,%.17g,%.3f,%d\n",
                         r.instance_id, r.n, r.d, r.epsilon, r.delta, r.seed,
                         r.solver, r.excess_risk, r.theory_rate, r.runtime_ms,
                         r.certified ? 1 : 0);
  out.flush();
}

absl::StatusOr<GeneratedInstance> GenerateInstance(const ExperimentConfig& cfg,
                                                   int n, int d, double epsilon,
                                                   uint64_t seed) {
  switch (cfg.instance_kind) {
    case GeneratorKind::kParetoLinear: {
      ParetoLinearParams p;
      p.d = d;
      p.n = n;
      p.k = cfg.k;
      p.G_k = cfg.G_k;
      p.seed = seed;
      p.radius = cfg.radius;
      p.shape_offset = cfg.shape_offset;
      p.direction_bias = cfg.direction_bias;
      return GenParetoLinear(p);
    }
    case GeneratorKind::kPackingHard: {
      PackingHardParams p;
      p.d = d;
      p.n = n;
      p.epsilon = epsilon;
      p.zeta = cfg.zeta;
      p.G_k = cfg.G_k;
      p.k = cfg.k;
      p.seed = seed;
      p.radius = cfg.radius;
      return GenPackingHard(p);
    }
    case GeneratorKind::kTwoPoint: {
      TwoPointParams p;
      p.n = n;
      p.d = d;
      p.zeta = cfg.zeta;
      p.G_2 = cfg.G_2;
      p.sign = cfg.sign;
      p.seed = seed;
      p.radius = cfg.radius;
      return GenTwoPoint(p);
    }
  }
  return absl::InvalidArgumentError("unknown generator");
}

absl::StatusOr<std::vector<ResultRow>> RunExperiment(
    const ExperimentConfig& cfg, std::ostream* out, const LogFn& log,
    std::ostream* run_log) {
  auto emit_log = [&](const std::string& msg) {
    if (log) log(msg);
  };
  std::vector<ResultRow> rows;
  if (out != nullptr) WriteResultHeader(*out);
  if (run_log != nullptr) {
    *run_log << "instance_id,seed,";
    WriteRunLogCsv({}, *run_log);
  }
  const std::string solver_name(ErmSolverKindName(cfg.solver));
  for (int n : cfg.n) {
    for (int d : cfg.d) {
      for (double eps : cfg.epsilon) {
        for (double delta : cfg.delta) {
          ScoConfig sco;
          sco.n = n;
          sco.d = d;
          sco.epsilon = eps;
          sco.delta = delta;
          sco.lambda1 = cfg.lambda1;
          sco.J_override = cfg.J;
          sco.C_override = cfg.C;
          sco.solver = cfg.solver;
          sco.erm_options.max_solver_iterations = cfg.max_iterations;
          sco.erm_options.smoothness = cfg.smoothness;
          const double D = 2.0 * cfg.radius;
          if (absl::StatusOr<PhaseSchedule> sched = BuildSchedule(sco, D);
              !sched.ok()) {
            emit_log(absl::StrCat("skipping cell n=", n, " d=", d,
                                  " epsilon=", eps, " delta=", delta, ": ",
                                  sched.status().message()));
            continue;
          }
          for (int s = 0; s < cfg.seeds; ++s) {
            const uint64_t seed = cfg.seed_base + static_cast<uint64_t>(s);
            ResultRow row;
            row.instance_id = absl::StrFormat(
                "%s-n%d-d%d-e%g-q%g", std::string(GeneratorKindName(cfg.instance_kind)), n,
                d, eps, delta);
            row.n = n;
            row.d = d;
            row.epsilon = eps;
            row.delta = delta;
            row.seed = seed;
            row.solver = solver_name;
            const auto start = std::chrono::steady_clock::now();
            absl::StatusOr<GeneratedInstance> inst =
                GenerateInstance(cfg, n, d, eps, seed);
            absl::StatusOr<ScoResult> result;
            if (inst.ok()) {
              sco.moment = inst->spec.moment;
              row.theory_rate =
                  TheoryRate(inst->spec.moment, D, d, n, eps, delta);
              Rng rng(MixSeed(seed, static_cast<uint64_t>(n) * 1000003ULL +
                                        static_cast<uint64_t>(d)));
              result = PopLocalize(inst->data, inst->spec.loss(),
                                   inst->spec.domain(), sco, rng);
            } else {
              result = inst.status();
            }
            if (result.ok()) {
              row.excess_risk = EvaluateExcessRisk(inst->spec, result->output);
              row.certified = result->certified;
              if (run_log != nullptr) {
                for (const RunLogRow& lr : result->log) {
                  *run_log << absl::StrFormat(
                      "%s,%d,%d,%d,%d,%.17g,%.17g,%016x,%d\n", row.instance_id,
                      seed, lr.phase, lr.repetition, lr.m_t, lr.lambda_t, lr.C,
                      lr.output_hash, lr.certified ? 1 : 0);
                }
              }
            } else {
              row.excess_risk = std::numeric_limits<double>::quiet_NaN();
              row.certified = false;
              emit_log(absl::StrCat("cell n=", n, " d=", d, " seed=", seed,
                                    " failed: ", result.status().ToString()));
            }
            row.runtime_ms =
                cfg.record_runtime
                    ? std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - start)
                          .count()
                    : 0.0;
            if (out != nullptr) WriteResultRow(row, *out);
            rows.push_back(std::move(row));
          }
        }
      }
    }
  }
  return rows;
}

absl::StatusOr<std::vector<ResultRow>> RunExperimentToFiles(
    const ExperimentConfig& cfg, const LogFn& log) {
  std::ofstream out;
  std::ofstream run_log;
  if (!cfg.output_path.empty()) {
    out.open(cfg.output_path);
    if (!out) {
      return absl::UnavailableError(
          absl::StrCat("cannot open ", cfg.output_path));
    }
  }
  if (!cfg.run_log_path.empty()) {
    run_log.open(cfg.run_log_path);
    if (!run_log) {
      return absl::UnavailableError(
          absl::StrCat("cannot open ", cfg.run_log_path));
    }
  }
  return RunExperiment(cfg, cfg.output_path.empty() ? nullptr : &out, log,
                       cfg.run_log_path.empty() ? nullptr : &run_log);
}

ProbeConfig ProbeConfigFrom(const ExperimentConfig& cfg) {
  ProbeConfig p;
  p.pairs = cfg.probe_pairs;
  p.loss = cfg.probe_loss;
  p.m = cfg.probe_m;
  p.d = cfg.probe_d;
  p.lambda = cfg.probe_lambda;
  p.epsilon = cfg.probe_epsilon;
  p.C = cfg.probe_C;
  p.radius = cfg.probe_radius;
  p.route = cfg.solver == ErmSolverKind::kDirectExtension
                ? ErmSolverKind::kDirectExtension
                : ErmSolverKind::kDoubleOutputPert;
  p.max_iterations = cfg.max_iterations;
  p.seed = cfg.seed_base;
  return p;
}

Sample ProbeSample(int d, double C, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Sample z;
  z.a = (2.0 * C * unif(rng)) * UniformOnSphere(d, rng);
  z.b = 2.0 * unif(rng) - 1.0;
  return z;
}

Dataset ProbeDataset(int m, int d, double C, Rng& rng) {
  Dataset data;
  data.dim = d;
  for (int i = 0; i < m; ++i) data.samples.push_back(ProbeSample(d, C, rng));
  return data;
}

absl::StatusOr<ProbePairResult> ProbePair(const ProbeConfig& cfg,
                                          const Dataset& Z, const Dataset& Zp,
                                          const Vector& w0) {
  HTDP_ASSIGN_OR_RETURN(ConvexDomain W,
                        ConvexDomain::Ball(Vector::Zero(cfg.d), cfg.radius));
  HTDP_ASSIGN_OR_RETURN(MomentSpec moment, MomentSpec::Create(2.0, 1.0, 1.0));
  const LossModel model(cfg.loss);
  HTDP_ASSIGN_OR_RETURN(ErmInstance inst,
                        ErmInstance::Create(Z, model, W, moment, cfg.epsilon,
                                            cfg.lambda, w0, cfg.C));
  HTDP_ASSIGN_OR_RETURN(ErmInstance inst_p,
                        ErmInstance::Create(Zp, model, W, moment, cfg.epsilon,
                                            cfg.lambda, w0, cfg.C));
  ErmOptions options;
  options.max_solver_iterations = cfg.max_iterations;

  ProbePairResult r;
  HTDP_ASSIGN_OR_RETURN(SolveResult s1,
                        SolveLocalizationStage(inst, cfg.route, options));
  HTDP_ASSIGN_OR_RETURN(SolveResult s1p,
                        SolveLocalizationStage(inst_p, cfg.route, options));
  r.stage1_distance = (s1.point - s1p.point).norm();
  r.stage1_bound = LocalizationSensitivity(inst);

  HTDP_ASSIGN_OR_RETURN(
      LocalizedDomain w0_set,
      LocalizedDomain::Create(
          W, W.Project(s1.point),
          LocalizationRadius(inst, inst.budget.epsilon / 2.0,
                             kLocalizationZeta)));
  HTDP_ASSIGN_OR_RETURN(SolveResult s2,
                        SolveLocalizedStage(inst, w0_set, cfg.route, options));
  HTDP_ASSIGN_OR_RETURN(
      SolveResult s2p, SolveLocalizedStage(inst_p, w0_set, cfg.route, options));
  r.stage2_distance = (s2.point - s2p.point).norm();
  r.stage2_bound = LocalizedSensitivity(inst);
  r.certified = s1.certificate.certified() && s1p.certificate.certified() &&
                s2.certificate.certified() && s2p.certificate.certified();
  return r;
}

absl::StatusOr<ProbeReport> SensitivityProbe(const ProbeConfig& cfg) {
  if (cfg.pairs < 0 || cfg.m < 1 || cfg.d < 1) {
    return absl::InvalidArgumentError("invalid probe configuration");
  }
  Rng rng(cfg.seed);
  ProbeReport report;
  for (int p = 0; p < cfg.pairs; ++p) {
    Dataset Z = ProbeDataset(cfg.m, cfg.d, cfg.C, rng);
    Dataset Zp = Z;
    std::uniform_int_distribution<int> pick(0, cfg.m - 1);
    const int idx = pick(rng);
    Zp.samples[idx] = ProbeSample(cfg.d, cfg.C, rng);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const Vector w0 = (cfg.radius * unif(rng)) * UniformOnSphere(cfg.d, rng);
    HTDP_ASSIGN_OR_RETURN(ProbePairResult r, ProbePair(cfg, Z, Zp, w0));
    r.pair = p;
    r.replaced_index = idx;
    report.max_stage1_ratio = std::max(report.max_stage1_ratio, r.stage1_ratio());
    report.max_stage2_ratio = std::max(report.max_stage2_ratio, r.stage2_ratio());
    if (r.stage1_ratio() > 1.0 || r.stage2_ratio() > 1.0) ++report.violations;
    if (!r.certified) ++report.uncertified;
    report.pairs.push_back(r);
  }
  return report;
}

void WriteProbeCsv(const ProbeReport& report, std::ostream& out) {
  out << "pair,replaced_index,stage1_distance,stage1_bound,stage1_ratio,"
         "stage2_distance,stage2_bound,stage2_ratio,certified\n";
  for (const ProbePairResult& r : report.pairs) {
    out << absl::StrFormat("%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                           r.pair, r.replaced_index, r.stage1_distance,
                           r.stage1_bound, r.stage1_ratio(), r.stage2_distance,
                           r.stage2_bound, r.stage2_ratio(),
                           r.certified ? 1 : 0);
  }
}

}  // namespace htdp
