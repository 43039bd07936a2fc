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

#include "htdp/verify.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "absl/strings/match.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "htdp/dp.h"
#include "htdp/erm.h"
#include "htdp/extension.h"
#include "htdp/generators.h"
#include "htdp/geometry.h"
#include "htdp/losses.h"
#include "htdp/sco.h"
#include "htdp/subgrad.h"

namespace htdp {
namespace {

constexpr LossKind kAllLosses[] = {LossKind::kLinear, LossKind::kHinge,
                                   LossKind::kAbsolute};

struct Outcome {
  bool passed = true;
  std::string detail;
};

Outcome Fail(std::string detail) { return {false, std::move(detail)}; }

double Uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vector RandomInBall(int d, double radius, Rng& rng) {
  const double r = radius * std::pow(Uniform(rng, 0.0, 1.0), 1.0 / d);
  return r * UniformOnSphere(d, rng);
}

Sample RandomSample(int d, double scale, Rng& rng) {
  Sample z;
  z.a = Uniform(rng, 0.0, scale) * UniformOnSphere(d, rng);
  z.b = Uniform(rng, -1.0, 1.0);
  return z;
}

ConvexDomain RandomBase(int d, Rng& rng) {
  if (Uniform(rng, 0.0, 1.0) < 0.5) {
    return *ConvexDomain::Ball(RandomInBall(d, 0.5, rng),
                               Uniform(rng, 0.5, 2.0));
  }
  Vector lo(d), hi(d);
  for (int i = 0; i < d; ++i) {
    lo[i] = Uniform(rng, -2.0, -0.2);
    hi[i] = Uniform(rng, 0.2, 2.0);
  }
  return *ConvexDomain::Box(lo, hi);
}

// Exact projection onto base ∩ ball by long bisection on the multiplier.
Vector ReferenceLocalizedProjection(const LocalizedDomain& dom,
                                    const Vector& y) {
  const ConvexDomain& base = dom.base();
  const Vector& c = dom.center();
  const double r2 = dom.radius() * dom.radius();
  Vector x = base.Project(y);
  if ((x - c).squaredNorm() <= r2) return x;
  double lo = 0.0;
  double hi = 1.0;
  while ((base.Project((y + hi * c) / (1.0 + hi)) - c).squaredNorm() > r2) {
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((base.Project((y + mid * c) / (1.0 + mid)) - c).squaredNorm() > r2) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return base.Project((y + hi * c) / (1.0 + hi));
}

Outcome InexactProjectionSuite(Rng& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 1 + trial % 3;
    ConvexDomain base = RandomBase(d, rng);
    const Vector center = base.Project(RandomInBall(d, 2.0, rng));
    const double radius = Uniform(rng, 0.05, 1.0);
    absl::StatusOr<LocalizedDomain> dom =
        LocalizedDomain::Create(base, center, radius);
    if (!dom.ok()) return Fail(dom.status().ToString());
    const Vector y = RandomInBall(d, 6.0, rng);
    const double xi = std::pow(10.0, Uniform(rng, -6.0, -1.0));
    LocalizedDomain::ProjectionStats stats;
    const Vector out = dom->InexactProject(y, xi, &stats);
    const Vector ref = ReferenceLocalizedProjection(*dom, y);
    const double err = (out - ref).norm();
    worst = std::max(worst, err / xi);
    if (err > xi) {
      return Fail(absl::StrFormat("trial %d: error %.3g exceeds xi %.3g", trial,
                                  err, xi));
    }
    if (!base.Contains(out) || !dom->Contains(out)) {
      return Fail(absl::StrFormat("trial %d: infeasible output", trial));
    }
    const int bound = static_cast<int>(
        std::ceil(std::log2(1.0 + (y - center).squaredNorm() / (radius * xi))));
    if (stats.bisection_steps > bound) {
      return Fail(absl::StrFormat("trial %d: %d bisection steps, bound %d",
                                  trial, stats.bisection_steps, bound));
    }
    if (stats.base_projections > stats.bisection_steps + 2) {
      return Fail(absl::StrFormat("trial %d: %d base projections", trial,
                                  stats.base_projections));
    }
  }
  return {true, absl::StrFormat("200 domains, max error/xi %.3g", worst)};
}

Outcome SubgradientValiditySuite(Rng& rng) {
  int checks = 0;
  for (LossKind kind : kAllLosses) {
    const LossModel model(kind);
    for (int trial = 0; trial < 1000; ++trial) {
      const int d = 1 + trial % 3;
      const Sample z = RandomSample(d, 3.0, rng);
      const Vector w = RandomInBall(d, 2.0, rng);
      const Vector u = RandomInBall(d, 2.0, rng);
      const Vector g = model.Subgradient(w, z);
      const double lhs = model.Value(u, z);
      const double rhs = model.Value(w, z) + g.dot(u - w);
      if (lhs < rhs - 1e-12) {
        return Fail(absl::StrCat(std::string(LossKindName(kind)), " trial ",
                                 trial, ": subgradient inequality fails"));
      }
      ++checks;
    }
  }
  return {true, absl::StrCat(checks, " triples")};
}

bool SameData(const Dataset& a, const Dataset& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    if (a.samples[i].a != b.samples[i].a || a.samples[i].b != b.samples[i].b) {
      return false;
    }
  }
  return true;
}

Outcome GeneratorDeterminismSuite(uint64_t seed) {
  ParetoLinearParams pareto;
  pareto.d = 3;
  pareto.n = 200;
  PackingHardParams packing;
  packing.d = 2;
  packing.n = 200;
  TwoPointParams two_point;
  two_point.d = 2;
  two_point.n = 200;
  for (uint64_t s : {seed, seed + 1}) {
    pareto.seed = packing.seed = two_point.seed = s;
    auto p1 = GenParetoLinear(pareto), p2 = GenParetoLinear(pareto);
    auto k1 = GenPackingHard(packing), k2 = GenPackingHard(packing);
    auto t1 = GenTwoPoint(two_point), t2 = GenTwoPoint(two_point);
    for (const auto* st : {&p1, &p2, &k1, &k2, &t1, &t2}) {
      if (!st->ok()) return Fail(st->status().ToString());
    }
    if (!SameData(p1->data, p2->data) || !SameData(k1->data, k2->data) ||
        !SameData(t1->data, t2->data)) {
      return Fail(absl::StrCat("seed ", s, ": generator not deterministic"));
    }
  }
  pareto.seed = seed;
  auto a = GenParetoLinear(pareto);
  pareto.seed = seed + 1;
  auto b = GenParetoLinear(pareto);
  if (SameData(a->data, b->data)) {
    return Fail("distinct seeds produced identical pareto data");
  }
  return {true, "3 generators, 2 seeds"};
}

Outcome ExtensionPropertySuite(Rng& rng) {
  constexpr double kAlphaIn = 0.05;
  int checks = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + trial % 2;
    const LossModel model(kAllLosses[trial % 3]);
    absl::StatusOr<ConvexDomain> W = ConvexDomain::Ball(Vector::Zero(d), 1.0);
    const double C = Uniform(rng, 0.2, 2.0);
    absl::StatusOr<ExtensionParams> params = ExtensionParams::Create(C);
    const Sample z = RandomSample(d, 4.0, rng);
    const Vector w = RandomInBall(d, 1.0, rng);
    const Vector wp = RandomInBall(d, 1.0, rng);
    const Vector mid = 0.5 * (w + wp);
    auto fw = ExtensionValueApprox(model, z, w, *W, *params, kAlphaIn);
    auto fwp = ExtensionValueApprox(model, z, wp, *W, *params, kAlphaIn);
    auto fmid = ExtensionValueApprox(model, z, mid, *W, *params, kAlphaIn);
    for (const auto* v : {&fw, &fwp, &fmid}) {
      if (!v->ok()) return Fail(v->status().ToString());
    }
    if (fw->value > model.Value(w, z) + kAlphaIn) {
      return Fail(absl::StrCat("trial ", trial, ": dominance fails"));
    }
    if (std::abs(fw->value - fwp->value) >
        C * (w - wp).norm() + 2.0 * kAlphaIn) {
      return Fail(absl::StrCat("trial ", trial, ": Lipschitz bound fails"));
    }
    if (fmid->value > 0.5 * (fw->value + fwp->value) + 2.0 * kAlphaIn) {
      return Fail(absl::StrCat("trial ", trial, ": midpoint convexity fails"));
    }
    ++checks;
  }
  return {true, absl::StrCat(checks, " (w, w', z) triples")};
}

Outcome CertificateSuite(Rng& rng) {
  int certified = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + trial % 2;
    const int pieces = 2 + trial % 4;
    std::vector<Vector> slopes;
    std::vector<double> offsets;
    for (int i = 0; i < pieces; ++i) {
      slopes.push_back(RandomInBall(d, 2.0, rng));
      offsets.push_back(Uniform(rng, -1.0, 1.0));
    }
    absl::StatusOr<ConvexDomain> W = ConvexDomain::Ball(Vector::Zero(d), 1.0);
    FirstOrderOracle oracle;
    oracle.eval = [&](const Vector& x, Vector& grad, double* value) {
      int best = 0;
      for (int i = 1; i < pieces; ++i) {
        if (slopes[i].dot(x) + offsets[i] >
            slopes[best].dot(x) + offsets[best]) {
          best = i;
        }
      }
      grad = slopes[best];
      if (value != nullptr) *value = slopes[best].dot(x) + offsets[best];
      return absl::OkStatus();
    };
    std::vector<TraceRow> trace;
    SolverOptions opts;
    opts.trace = &trace;
    const double alpha = Uniform(rng, 0.05, 0.3);
    const double D = W->diameter_bound();
    absl::StatusOr<SolveResult> res = AdaptiveProjSubgrad(
        *W, oracle, RandomInBall(d, 1.0, rng), alpha, D, opts);
    if (!res.ok()) return Fail(res.status().ToString());
    if (res->certificate.stop_reason != StopReason::kCertified) continue;
    ++certified;
    double S = 0.0;
    for (const TraceRow& row : trace) S += row.grad_norm * row.grad_norm;
    const double T = static_cast<double>(trace.size());
    if (trace.empty() || 3.0 * D * std::sqrt(S) > alpha * T * (1.0 + 1e-12)) {
      return Fail(absl::StrCat("trial ", trial,
                               ": certified stop not supported by trace"));
    }
    const double cap = std::ceil(
        std::pow(3.0 * D * res->certificate.max_grad_norm / alpha, 2.0));
    if (T > cap) {
      return Fail(
          absl::StrCat("trial ", trial, ": ", T, " iterations exceed ", cap));
    }
  }
  return {true, absl::StrCat(certified, " certified solves re-verified")};
}

Outcome LaplaceRadialSuite(Rng& rng) {
  std::string detail;
  for (int d : {1, 2, 5, 10}) {
    const double beta = Uniform(rng, 0.1, 3.0);
    absl::StatusOr<NoiseSpec> spec = NoiseSpec::Create(d, beta);
    if (!spec.ok()) return Fail(spec.status().ToString());
    std::vector<double> radii(100000);
    for (double& r : radii) r = SampleIsotropicLaplace(*spec, rng).norm();
    const double stat = KsStatistic(std::move(radii), [&](double x) {
      return GammaCdfIntegerShape(d, beta, x);
    });
    const double p = KsPValue(stat, 100000);
    absl::StrAppend(&detail, detail.empty() ? "" : ", ",
                    absl::StrFormat("d=%d p=%.3g", d, p));
    if (p <= 0.001) return Fail(detail);
  }
  return {true, detail};
}

Outcome ExponentialMechanismSuite(Rng& rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const int K = 2 + trial * 2;
    std::vector<double> scores(K);
    for (double& s : scores) s = Uniform(rng, 0.0, 2.0);
    const double eps = Uniform(rng, 0.5, 4.0);
    const double sens = Uniform(rng, 0.2, 1.0);
    auto probs = ExponentialMechanismProbabilities(scores, sens, eps);
    if (!probs.ok()) return Fail(probs.status().ToString());
    std::vector<double> counts(K, 0.0);
    constexpr int kDraws = 100000;
    for (int i = 0; i < kDraws; ++i) {
      auto idx = ExponentialMechanism(scores, sens, eps, rng);
      if (!idx.ok()) return Fail(idx.status().ToString());
      counts[*idx] += 1.0;
    }
    double tv = 0.0;
    for (int i = 0; i < K; ++i) {
      // Independent softmax of −ε·s/(2Δ).
      double z = 0.0;
      for (double s : scores)
        z += std::exp(-eps * (s - scores[i]) / (2 * sens));
      tv += std::abs(counts[i] / kDraws - 1.0 / z);
    }
    tv *= 0.5;
    worst = std::max(worst, tv);
    if (tv >= 0.02) {
      return Fail(absl::StrFormat("K=%d: total variation %.4f", K, tv));
    }
  }
  return {true, absl::StrFormat("max total variation %.4f", worst)};
}

Outcome BudgetSuite(Rng& rng) {
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + trial % 3;
    Dataset data;
    data.dim = 1;
    for (int i = 0; i < m; ++i)
      data.samples.push_back(RandomSample(1, 1.0, rng));
    const double eps = Uniform(rng, 0.2, 4.0);
    absl::StatusOr<ConvexDomain> W = ConvexDomain::Ball(Vector::Zero(1), 1.0);
    absl::StatusOr<MomentSpec> moment = MomentSpec::Create(2.0, 1.0, 1.0);
    auto inst = ErmInstance::Create(data, LossModel(kAllLosses[trial % 3]), *W,
                                    *moment, eps, 1.0, Vector::Zero(1), 1.0);
    if (!inst.ok()) return Fail(inst.status().ToString());
    auto report = DoubleOutputPert(*inst, rng, ErmOptions{});
    if (!report.ok()) return Fail(report.status().ToString());
    double total = 0.0;
    for (double b : report->budget_split) total += b;
    if (std::abs(total - eps) > 1e-12 * eps) {
      return Fail(
          absl::StrFormat("budget split sums to %.17g, not %.17g", total, eps));
    }
  }
  return {true, "10 reports"};
}

Outcome SensitivitySuite(const VerifyOptions& options) {
  std::string detail;
  for (LossKind kind : kAllLosses) {
    ProbeConfig cfg = options.probe;
    cfg.loss = kind;
    cfg.pairs = options.probe_pairs;
    cfg.seed = options.seed + static_cast<uint64_t>(kind);
    absl::StatusOr<ProbeReport> report = SensitivityProbe(cfg);
    if (!report.ok()) return Fail(report.status().ToString());
    absl::StrAppend(&detail, absl::StrFormat("%s%s: max ratios %.3f/%.3f",
                                             detail.empty() ? "" : "; ",
                                             std::string(LossKindName(kind)),
                                             report->max_stage1_ratio,
                                             report->max_stage2_ratio));
    if (report->violations > 0 || report->uncertified > 0) {
      absl::StrAppend(&detail, "; ", report->violations, " violations, ",
                      report->uncertified, " uncertified");
      return Fail(detail);
    }
  }
  return {true, detail};
}

Outcome BatchPartitionSuite() {
  absl::StatusOr<MomentSpec> moment = MomentSpec::Create(2.0, 1.0, 1.0);
  int schedules = 0;
  for (int n : {512, 1000, 4096, 10007}) {
    for (double delta : {0.05, 0.1, 0.4}) {
      ScoConfig cfg;
      cfg.n = n;
      cfg.delta = delta;
      cfg.moment = *moment;
      absl::StatusOr<PhaseSchedule> sched = BuildSchedule(cfg, 2.0);
      if (!sched.ok()) continue;
      ++schedules;
      std::vector<bool> used(n, false);
      for (const PhaseInfo& phase : sched->phases) {
        for (int j = 0; j < sched->J; ++j) {
          auto [begin, end] = BatchRange(phase, j);
          if (end - begin != phase.m_t || begin < 0 || end > n) {
            return Fail(absl::StrCat("n=", n, ": batch size or range wrong"));
          }
          for (int i = begin; i < end; ++i) {
            if (used[i]) {
              return Fail(absl::StrCat("n=", n, ": sample ", i, " reused"));
            }
            used[i] = true;
          }
        }
      }
    }
  }
  if (schedules == 0) return Fail("no feasible schedule");
  return {true, absl::StrCat(schedules, " schedules")};
}

Outcome AggregationSuite(Rng& rng) {
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 1 + trial % 3;
    const int J = 3 + trial % 12;
    const int cluster = J / 2 + 1;
    const double r = Uniform(rng, 0.01, 1.0);
    const Vector x = RandomInBall(d, 5.0, rng);
    std::vector<Vector> points;
    for (int i = 0; i < cluster; ++i) {
      points.push_back(x + RandomInBall(d, r, rng));
    }
    for (int i = cluster; i < J; ++i) {
      points.push_back(RandomInBall(d, 50.0, rng));
    }
    std::shuffle(points.begin(), points.end(), rng);
    absl::StatusOr<Vector> out = AggregateGeometric(points);
    if (!out.ok()) return Fail(out.status().ToString());
    if ((*out - x).norm() > 3.0 * r * (1.0 + 1e-12)) {
      return Fail(absl::StrCat("trial ", trial, ": output outside 3r"));
    }
  }
  return {true, "1000 configurations"};
}

Outcome BenchSuite(uint64_t seed) {
  ParetoLinearParams p;
  p.d = 2;
  p.n = 100;
  p.seed = seed;
  absl::StatusOr<GeneratedInstance> inst = GenParetoLinear(p);
  if (!inst.ok()) return Fail(inst.status().ToString());
  if (EvaluateExcessRisk(inst->spec, inst->spec.population_minimizer) != 0.0) {
    return Fail("excess risk at the population minimizer is not 0");
  }
  ExperimentConfig cfg;
  cfg.n = {2048};
  cfg.seeds = 2;
  cfg.seed_base = seed;
  cfg.record_runtime = false;
  cfg.lambda1 = 0.3;
  cfg.max_iterations = 200;
  std::ostringstream first, second;
  auto a = RunExperiment(cfg, &first);
  auto b = RunExperiment(cfg, &second);
  if (!a.ok() || !b.ok()) return Fail("experiment failed");
  if (first.str() != second.str()) return Fail("re-run CSV differs");
  if (a->size() != 2) return Fail("expected 2 rows");
  for (const ResultRow& row : *a) {
    if (!(row.excess_risk >= kExcessRiskFloor)) {
      return Fail("excess risk below the numerical floor");
    }
  }
  return {true, absl::StrCat(a->size(), " rows reproduced byte-identically")};
}

struct Suite {
  const char* name;
  std::function<Outcome(const VerifyOptions&, Rng&)> run;
};

const std::vector<Suite>& Suites() {
  static const auto* suites = new std::vector<Suite>{
      {"geometry.inexact_projection",
       [](const VerifyOptions&, Rng& rng) {
         return InexactProjectionSuite(rng);
       }},
      {"losses.subgradient_validity",
       [](const VerifyOptions&, Rng& rng) {
         return SubgradientValiditySuite(rng);
       }},
      {"generators.determinism",
       [](const VerifyOptions& o, Rng&) {
         return GeneratorDeterminismSuite(o.seed);
       }},
      {"extension.properties",
       [](const VerifyOptions&, Rng& rng) {
         return ExtensionPropertySuite(rng);
       }},
      {"subgrad.certificate_soundness",
       [](const VerifyOptions&, Rng& rng) { return CertificateSuite(rng); }},
      {"dp.laplace_radial",
       [](const VerifyOptions&, Rng& rng) { return LaplaceRadialSuite(rng); }},
      {"dp.exponential_mechanism",
       [](const VerifyOptions&, Rng& rng) {
         return ExponentialMechanismSuite(rng);
       }},
      {"erm.budget_accounting",
       [](const VerifyOptions&, Rng& rng) { return BudgetSuite(rng); }},
      {"erm.sensitivity",
       [](const VerifyOptions& o, Rng&) { return SensitivitySuite(o); }},
      {"sco.batch_partition",
       [](const VerifyOptions&, Rng&) { return BatchPartitionSuite(); }},
      {"sco.aggregation",
       [](const VerifyOptions&, Rng& rng) { return AggregationSuite(rng); }},
      {"bench.determinism",
       [](const VerifyOptions& o, Rng&) { return BenchSuite(o.seed); }},
  };
  return *suites;
}

bool Selected(const VerifyOptions& options, const std::string& name) {
  if (options.only.empty()) return true;
  for (const std::string& prefix : options.only) {
    if (absl::StartsWith(name, prefix)) return true;
  }
  return false;
}

}  // namespace

std::vector<std::string> VerifySuiteNames() {
  std::vector<std::string> names;
  for (const Suite& s : Suites()) names.push_back(s.name);
  return names;
}

std::vector<SuiteResult> RunVerifySuites(
    const VerifyOptions& options,
    const std::function<void(const SuiteResult&)>& progress) {
  std::vector<SuiteResult> results;
  uint64_t index = 0;
  for (const Suite& s : Suites()) {
    ++index;
    if (!Selected(options, s.name)) continue;
    Rng rng(options.seed * 1000003ULL + index);
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome = s.run(options, rng);
    SuiteResult r;
    r.name = s.name;
    r.passed = outcome.passed;
    r.detail = std::move(outcome.detail);
    r.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (progress) progress(r);
    results.push_back(std::move(r));
  }
  return results;
}

double KsStatistic(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double stat = 0.0;
  for (size_t i = 0; i < samples.size(); ++i) {
    const double F = cdf(samples[i]);
    stat = std::max({stat, (i + 1) / n - F, F - i / n});
  }
  return stat;
}

double KsPValue(double statistic, int n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double GammaCdfIntegerShape(int shape, double scale, double x) {
  if (x <= 0.0) return 0.0;
  const double y = x / scale;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < shape; ++k) {
    term *= y / k;
    sum += term;
  }
  return 1.0 - std::exp(-y) * sum;
}

}  // namespace htdp
