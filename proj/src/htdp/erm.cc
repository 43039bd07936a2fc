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

#include "htdp/erm.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <utility>
#include <variant>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "htdp/status_macros.h"

namespace htdp {
namespace {

double ElapsedMs(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<double> ToStd(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

nlohmann::json CertificateToJson(const SolveCertificate& c) {
  return {{"iterations", c.iterations},
          {"cumulative_sq_grad", c.cumulative_sq_grad},
          {"target_alpha", c.target_alpha},
          {"diameter", c.diameter},
          {"max_grad_norm", c.max_grad_norm},
          {"stop_reason", std::string(StopReasonName(c.stop_reason))}};
}

Vector DrawNoise(int d, double beta, bool zero_noise, Rng& rng) {
  if (zero_noise) return Vector::Zero(d);
  return SampleIsotropicLaplace(NoiseSpec{d, beta}, rng);
}

SolverOptions StageSolverOptions(const ErmOptions& options) {
  SolverOptions s;
  s.max_iterations = options.max_solver_iterations;
  return s;
}

}  // namespace

absl::StatusOr<ErmSolverKind> ParseErmSolverKind(std::string_view name) {
  if (name == "double_outputpert") return ErmSolverKind::kDoubleOutputPert;
  if (name == "direct_extension") return ErmSolverKind::kDirectExtension;
  if (name == "em_pgm") return ErmSolverKind::kEmPgm;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown solver: ", std::string(name)));
}

std::string_view ErmSolverKindName(ErmSolverKind kind) {
  switch (kind) {
    case ErmSolverKind::kDoubleOutputPert:
      return "double_outputpert";
    case ErmSolverKind::kDirectExtension:
      return "direct_extension";
    case ErmSolverKind::kEmPgm:
      return "em_pgm";
  }
  return "unknown";
}

double DefaultExtensionParameter(const MomentSpec& moment, int m,
                                 double epsilon, int d) {
  return moment.G_k * std::pow(m * epsilon / d, 1.0 / moment.k);
}

absl::StatusOr<ErmInstance> ErmInstance::Create(
    Dataset data, LossModel model, ConvexDomain domain, MomentSpec moment,
    double epsilon, double lambda, Vector w0, std::optional<double> C) {
  HTDP_ASSIGN_OR_RETURN(PrivacyBudget budget, PrivacyBudget::Create(epsilon));
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    return absl::InvalidArgumentError(
        absl::StrCat("lambda must be positive, got ", lambda));
  }
  if (data.size() < 1) {
    return absl::InvalidArgumentError("ERM instance needs at least one sample");
  }
  if (data.dim != domain.dimension() || w0.size() != domain.dimension()) {
    return absl::InvalidArgumentError("ERM instance dimension mismatch");
  }
  if (!domain.Contains(w0)) {
    return absl::InvalidArgumentError("center w0 must lie in the domain");
  }
  const double c_value = C.has_value()
                             ? *C
                             : DefaultExtensionParameter(
                                   moment, data.size(), epsilon,
                                   domain.dimension());
  HTDP_ASSIGN_OR_RETURN(ExtensionParams ext, ExtensionParams::Create(c_value));
  return ErmInstance{std::move(data), model,  std::move(domain), moment,
                     budget,          lambda, std::move(w0),     ext};
}

double LocalizationAccuracy(const ErmInstance& inst) {
  const double m = inst.m();
  return inst.C() * inst.C() / (2.0 * inst.lambda * m * m);
}

double LocalizedAccuracy(const ErmInstance& inst) {
  const double m = inst.m();
  return inst.C() * inst.C() / (72.0 * inst.lambda * m * m);
}

double OutputProjectionAccuracy(const ErmInstance& inst) {
  return inst.C() / (6.0 * inst.lambda * inst.m());
}

double LocalizationSensitivity(const ErmInstance& inst) {
  return 4.0 * inst.C() / (inst.lambda * inst.m());
}

double LocalizedSensitivity(const ErmInstance& inst) {
  return 3.0 * inst.C() / (inst.lambda * inst.m());
}

double LocalizationRadius(const ErmInstance& inst, double eps_stage,
                          double zeta) {
  return 100.0 * zeta * inst.C() * inst.d() /
         (inst.lambda * inst.m() * eps_stage);
}

nlohmann::json ErmReportToJson(const ErmReport& report, bool include_runtime) {
  nlohmann::json j;
  j["solver"] = std::string(ErmSolverKindName(report.solver));
  j["output"] = ToStd(report.output);
  j["radius"] = report.radius;
  j["center"] = ToStd(report.localization_center);
  j["budget_split"] = report.budget_split;
  j["stage1_iters"] = report.stage1 ? report.stage1->iterations : 0;
  j["stage2_iters"] = report.stage2 ? report.stage2->iterations : 0;
  j["noise_norms"] = report.noise_norms;
  j["noise_scales"] = report.noise_scales;
  j["stage1_certified"] = report.stage1_certified();
  j["stage2_certified"] = report.stage2_certified();
  j["certified"] = report.certified();
  if (report.stage1) j["stage1"] = CertificateToJson(*report.stage1);
  if (report.stage2) j["stage2"] = CertificateToJson(*report.stage2);
  if (report.solver == ErmSolverKind::kEmPgm) {
    j["net_size"] = report.net_size;
    j["selected_score"] = report.selected_score;
    j["min_score"] = report.min_score;
  }
  if (include_runtime) j["runtime_ms"] = report.runtime_ms;
  return j;
}

// head × (sW)^m with the tail blocks stored as s·y_i. Solving Φ(w, u/s) over
// this set is equivalent to solving Φ over head × W^m.
class ScaledJointSet final : public FeasibleSet {
 public:
  ScaledJointSet(const ReplicatedProductSet& base, int head_dim,
                 double head_diameter, double tail_diameter, double scale)
      : base_(base), head_dim_(head_dim), scale_(scale) {
    const double tail = scale * tail_diameter;
    diameter_ = std::sqrt(head_diameter * head_diameter +
                          base.copies() * tail * tail);
  }

  int dimension() const override { return base_.dimension(); }
  double diameter_bound() const override { return diameter_; }
  Vector Project(const Vector& v, double xi) const override {
    Vector x = v;
    const int tail = dimension() - head_dim_;
    x.tail(tail) /= scale_;
    x = base_.Project(x, xi);
    x.tail(tail) *= scale_;
    return x;
  }
  void ProjectInPlace(Vector& x, double xi) const override {
    if (scale_ == 1.0) {
      base_.ProjectInPlace(x, xi);
      return;
    }
    const int tail = dimension() - head_dim_;
    x.tail(tail) /= scale_;
    base_.ProjectInPlace(x, xi);
    x.tail(tail) *= scale_;
  }

 private:
  const ReplicatedProductSet& base_;
  int head_dim_;
  double scale_;
  double diameter_;
};

absl::StatusOr<SolveResult> SolveJointStage(
    const ErmInstance& inst, const ReplicatedProductSet::Head& head,
    double alpha, const ErmOptions& options) {
  HTDP_ASSIGN_OR_RETURN(
      JointProblem problem,
      JointProblem::Create(inst.model, &inst.data, inst.extension,
                           inst.lambda, inst.w0));
  const ReplicatedProductSet joint(head, inst.domain, inst.m());
  const int d = inst.d();
  const double head_diameter = std::visit(
      [](const auto& h) { return h.diameter_bound(); }, head);
  const double tail_diameter = inst.domain.diameter_bound();
  const double scale =
      options.balance_joint_blocks
          ? head_diameter / (tail_diameter * std::sqrt(double(inst.m())))
          : 1.0;
  const ScaledJointSet set(joint, d, head_diameter, tail_diameter, scale);
  const int tail = joint.dimension() - d;
  FirstOrderOracle oracle = problem.Oracle();
  Vector x;
  if (scale != 1.0) {
    oracle.eval = [&](const Vector& v, Vector& grad, double* value) {
      x = v;
      x.tail(tail) /= scale;
      problem.Subgradient(x, grad);
      grad.tail(tail) /= scale;
      if (value != nullptr) *value = problem.Value(x);
      return absl::OkStatus();
    };
  }
  Vector start = problem.InitialPoint();
  if (options.warm_start) {
    const Vector w_init = std::visit(
        [&](const auto& h) { return WarmStart(inst, h); }, head);
    start = w_init.replicate(inst.m() + 1, 1);
  }
  start.tail(tail) *= scale;
  HTDP_ASSIGN_OR_RETURN(
      SolveResult solved,
      AdaptiveProjSubgrad(set, oracle, start, alpha, set.diameter_bound(),
                          StageSolverOptions(options)));
  solved.point = Vector(solved.point.head(d));
  return solved;
}

absl::StatusOr<SolveResult> SolveDirectStage(const ErmInstance& inst,
                                             const FeasibleSet& head,
                                             double alpha,
                                             const ErmOptions& options) {
  const double B = alpha / 4.0;
  const double L = inst.C() + inst.lambda * inst.domain.diameter_bound();
  SolverOptions inner;
  inner.max_iterations = options.max_inner_iterations;
  FirstOrderOracle oracle;
  oracle.declared_bias = B;
  oracle.declared_norm_bound = L;
  oracle.eval = [&](const Vector& w, Vector& grad, double* value) {
    grad = inst.lambda * (w - inst.w0);
    const double inv_m = 1.0 / inst.m();
    double total = 0.0;
    for (const Sample& z : inst.data.samples) {
      HTDP_ASSIGN_OR_RETURN(
          Vector g, ExtensionSubgradientApprox(inst.model, z, w, inst.domain,
                                               inst.extension, B, inner));
      grad += inv_m * g;
      if (value != nullptr) {
        HTDP_ASSIGN_OR_RETURN(
            ExtensionValue v,
            ExtensionValueApprox(inst.model, z, w, inst.domain, inst.extension,
                                 B, inner));
        total += v.value;
      }
    }
    if (value != nullptr) {
      *value = total * inv_m + 0.5 * inst.lambda * (w - inst.w0).squaredNorm();
    }
    return absl::OkStatus();
  };
  const Vector start = options.warm_start ? WarmStart(inst, head) : inst.w0;
  return BiasedPsg(head, oracle, start, alpha, head.diameter_bound(),
                   StageSolverOptions(options));
}

absl::StatusOr<SolveResult> SolveLocalizationStage(const ErmInstance& inst,
                                                   ErmSolverKind route,
                                                   const ErmOptions& options) {
  const double alpha = LocalizationAccuracy(inst);
  if (route == ErmSolverKind::kDirectExtension) {
    return SolveDirectStage(inst, inst.domain, alpha, options);
  }
  return SolveJointStage(inst, inst.domain, alpha, options);
}

absl::StatusOr<SolveResult> SolveLocalizedStage(const ErmInstance& inst,
                                                const LocalizedDomain& w0_set,
                                                ErmSolverKind route,
                                                const ErmOptions& options) {
  if (w0_set.dimension() != inst.d()) {
    return absl::InvalidArgumentError("localized domain dimension mismatch");
  }
  const double alpha = LocalizedAccuracy(inst);
  if (route == ErmSolverKind::kDirectExtension) {
    return SolveDirectStage(inst, w0_set, alpha, options);
  }
  return SolveJointStage(inst, w0_set, alpha, options);
}

namespace {

absl::Status CheckLocalizationArgs(double eps_stage, double zeta) {
  if (!(eps_stage > 0.0)) {
    return absl::InvalidArgumentError("stage budget must be positive");
  }
  if (!(zeta >= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("zeta must be >= 1, got ", zeta));
  }
  return absl::OkStatus();
}

absl::StatusOr<LocalizationResult> Localize(const ErmInstance& inst,
                                            SolveResult stage,
                                            double eps_stage, double zeta,
                                            bool zero_noise, Rng& rng) {
  if (stage.point.size() != inst.d()) {
    return absl::InvalidArgumentError("stage-1 point dimension mismatch");
  }
  const double beta =
      6.0 * inst.C() / (inst.lambda * inst.m() * eps_stage);
  const Vector b = DrawNoise(inst.d(), beta, zero_noise, rng);
  const Vector w_loc = inst.domain.Project(stage.point + b);
  HTDP_ASSIGN_OR_RETURN(
      LocalizedDomain w0_set,
      LocalizedDomain::Create(inst.domain, w_loc,
                              LocalizationRadius(inst, eps_stage, zeta)));
  return LocalizationResult{std::move(w0_set), std::move(stage.point), b.norm(),
                            beta, stage.certificate};
}

}  // namespace

absl::StatusOr<LocalizationResult> LocalizeFromStage(const ErmInstance& inst,
                                                     const SolveResult& stage,
                                                     double eps_stage,
                                                     double zeta, Rng& rng) {
  HTDP_RETURN_IF_ERROR(CheckLocalizationArgs(eps_stage, zeta));
  return Localize(inst, stage, eps_stage, zeta, false, rng);
}

namespace internal {

absl::StatusOr<LocalizationResult> OutputPertLocalizeImpl(
    const ErmInstance& inst, double eps_stage, double zeta,
    ErmSolverKind route, Rng& rng, const ErmOptions& options,
    const ErmHooks& hooks) {
  HTDP_RETURN_IF_ERROR(CheckLocalizationArgs(eps_stage, zeta));
  HTDP_ASSIGN_OR_RETURN(SolveResult stage,
                        SolveLocalizationStage(inst, route, options));
  return Localize(inst, std::move(stage), eps_stage, zeta, hooks.zero_noise,
                  rng);
}

absl::StatusOr<ErmReport> TwoStageImpl(const ErmInstance& inst,
                                       ErmSolverKind route, Rng& rng,
                                       const ErmOptions& options,
                                       const ErmHooks& hooks) {
  if (route == ErmSolverKind::kEmPgm) {
    return absl::InvalidArgumentError("EM-PGM is not a two-stage solver");
  }
  const auto start = std::chrono::steady_clock::now();
  const auto [eps1, eps2] = inst.budget.SplitHalves();
  ErmReport report;
  report.solver = route;
  report.budget_split = {eps1, eps2};

  HTDP_ASSIGN_OR_RETURN(
      LocalizationResult loc,
      OutputPertLocalizeImpl(inst, eps1, kLocalizationZeta, route, rng, options,
                             hooks));
  report.stage1 = loc.certificate;
  report.noise_norms.push_back(loc.noise_norm);
  report.noise_scales.push_back(loc.noise_scale);
  const LocalizedDomain& w0_set = hooks.pinned_localized_domain.has_value()
                                      ? *hooks.pinned_localized_domain
                                      : loc.domain;
  report.localization_center = w0_set.center();
  report.radius = w0_set.radius();
  report.localized_domain = w0_set;

  HTDP_ASSIGN_OR_RETURN(SolveResult stage2,
                        SolveLocalizedStage(inst, w0_set, route, options));
  report.stage2 = stage2.certificate;
  const double beta2 = 12.0 * inst.C() / (inst.budget.epsilon * inst.lambda *
                                          inst.m());
  const Vector b = DrawNoise(inst.d(), beta2, hooks.zero_noise, rng);
  report.noise_norms.push_back(b.norm());
  report.noise_scales.push_back(beta2);
  report.output =
      w0_set.InexactProject(stage2.point + b, OutputProjectionAccuracy(inst));
  report.runtime_ms = ElapsedMs(start);
  return report;
}

}  // namespace internal

absl::StatusOr<LocalizationResult> OutputPertLocalize(
    const ErmInstance& inst, double eps_stage, double zeta, Rng& rng,
    const ErmOptions& options) {
  return internal::OutputPertLocalizeImpl(inst, eps_stage, zeta,
                                          ErmSolverKind::kDoubleOutputPert, rng,
                                          options, {});
}

absl::StatusOr<ErmReport> DoubleOutputPert(const ErmInstance& inst, Rng& rng,
                                           const ErmOptions& options) {
  return internal::TwoStageImpl(inst, ErmSolverKind::kDoubleOutputPert, rng,
                                options, {});
}

absl::StatusOr<ErmReport> DirectExtensionErm(const ErmInstance& inst, Rng& rng,
                                             const ErmOptions& options) {
  return internal::TwoStageImpl(inst, ErmSolverKind::kDirectExtension, rng,
                                options, {});
}

Vector ClippedMeanGradient(const ErmInstance& inst, const Vector& w) {
  const double C = inst.C();
  Vector g = Vector::Zero(inst.d());
  for (const Sample& z : inst.data.samples) {
    const double t = inst.model.SubgradientCoefficient(w, z);
    const double norm = std::abs(t) * z.a.norm();
    const double scale = norm > C ? C / norm : 1.0;
    g += (t * scale) * z.a;
  }
  return g / inst.m();
}

Vector WarmStart(const ErmInstance& inst, const FeasibleSet& head) {
  const Vector step =
      inst.w0 - ClippedMeanGradient(inst, inst.w0) / inst.lambda;
  return head.Project(inst.domain.Project(step), 0.0);
}

double ClippedPgmScore(const ErmInstance& inst, const Vector& w,
                       double gamma) {
  Vector g = ClippedMeanGradient(inst, w);
  g += inst.lambda * (w - inst.w0);
  const Vector target = inst.domain.Project(Vector(w - gamma * g));
  return (w - target).norm() / gamma;
}

absl::StatusOr<std::vector<Vector>> BuildNet(const ConvexDomain& domain,
                                             double eta, int64_t max_points) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    return absl::InvalidArgumentError(
        absl::StrCat("net spacing must be positive, got ", eta));
  }
  const int d = domain.dimension();
  const auto [lower, upper] = domain.BoundingBox();
  const double h = eta / std::sqrt(static_cast<double>(d));
  std::vector<int64_t> counts(d);
  double total = 1.0;
  for (int j = 0; j < d; ++j) {
    counts[j] =
        static_cast<int64_t>(std::ceil((upper[j] - lower[j]) / h)) + 1;
    total *= static_cast<double>(counts[j]);
  }
  if (total > static_cast<double>(max_points)) {
    return absl::ResourceExhaustedError(
        absl::StrCat("net would need ", total, " points, limit is ",
                     max_points));
  }
  std::vector<Vector> points;
  points.reserve(static_cast<size_t>(total));
  std::vector<int64_t> idx(d, 0);
  Vector p(d);
  for (;;) {
    for (int j = 0; j < d; ++j) {
      p[j] = std::min(upper[j], lower[j] + h * static_cast<double>(idx[j]));
    }
    points.push_back(domain.Project(p));
    int j = 0;
    while (j < d && ++idx[j] == counts[j]) idx[j++] = 0;
    if (j == d) break;
  }
  auto less = [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(),
                                        b.data(), b.data() + b.size());
  };
  std::sort(points.begin(), points.end(), less);
  points.erase(std::unique(points.begin(), points.end(),
                           [](const Vector& a, const Vector& b) {
                             return (a - b).lpNorm<Eigen::Infinity>() <= 1e-12;
                           }),
               points.end());
  return points;
}

absl::StatusOr<ErmReport> EmPgm(const ErmInstance& inst, Rng& rng,
                                const ErmOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  if (inst.d() > 3) {
    return absl::InvalidArgumentError(
        absl::StrCat("EM-PGM is limited to d <= 3, got d=", inst.d()));
  }
  if (!(options.smoothness >= 0.0)) {
    return absl::InvalidArgumentError("smoothness must be nonnegative");
  }
  const double lh = inst.lambda + options.smoothness;
  const double gamma = options.em_gamma > 0.0 ? options.em_gamma : 1.0 / lh;
  const double eps = inst.budget.epsilon;
  double eta = options.em_net_eta > 0.0
                   ? options.em_net_eta
                   : inst.C() * inst.d() / (eps * inst.m() * lh);
  eta = std::max(eta, options.em_net_eta_floor);
  HTDP_ASSIGN_OR_RETURN(std::vector<Vector> net,
                        BuildNet(inst.domain, eta, options.em_max_net_points));
  std::vector<double> scores(net.size());
  for (size_t i = 0; i < net.size(); ++i) {
    scores[i] = ClippedPgmScore(inst, net[i], gamma);
  }
  const double sensitivity = 2.0 * inst.C() / inst.m();
  HTDP_ASSIGN_OR_RETURN(int pick,
                        ExponentialMechanism(scores, sensitivity, eps, rng));
  ErmReport report;
  report.solver = ErmSolverKind::kEmPgm;
  report.output = net[pick];
  report.budget_split = {eps};
  report.net_size = static_cast<int64_t>(net.size());
  report.selected_score = scores[pick];
  report.min_score = *std::min_element(scores.begin(), scores.end());
  report.runtime_ms = ElapsedMs(start);
  return report;
}

absl::StatusOr<ErmReport> RunErm(ErmSolverKind kind, const ErmInstance& inst,
                                 Rng& rng, const ErmOptions& options) {
  switch (kind) {
    case ErmSolverKind::kDoubleOutputPert:
      return DoubleOutputPert(inst, rng, options);
    case ErmSolverKind::kDirectExtension:
      return DirectExtensionErm(inst, rng, options);
    case ErmSolverKind::kEmPgm:
      return EmPgm(inst, rng, options);
  }
  return absl::InvalidArgumentError("unknown solver");
}

}  // namespace htdp
