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

// Private regularized ERM solvers for
//   F(w) = (1/m) Σ_i f_C(w, z_i) + (λ/2)‖w − w0‖²  over W.
//
// DoubleOutputPert: ε/2 localization by output perturbation of a
// C²/(2λm²)-minimizer (noise scale 6C/(λm·ε/2)), then an
// α = C²/(72λm²)-minimizer over W0 × W^m, perturbed with scale 12C/(ελm)
// and ξ-inexactly projected onto W0 with ξ = C/(6λm).
// DirectExtensionErm: the same two stages solved by BiasedPsg with
// approximate extension subgradients.
// EmPgm: exponential mechanism over an η-net scored by the clipped projected
// gradient mapping.

#ifndef HTDP_ERM_H_
#define HTDP_ERM_H_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "htdp/dp.h"
#include "htdp/extension.h"
#include "htdp/generators.h"
#include "htdp/geometry.h"
#include "htdp/losses.h"
#include "htdp/subgrad.h"
#include "htdp/types.h"
#include "json.hpp"

namespace htdp {

enum class ErmSolverKind { kDoubleOutputPert, kDirectExtension, kEmPgm };

absl::StatusOr<ErmSolverKind> ParseErmSolverKind(std::string_view name);
std::string_view ErmSolverKindName(ErmSolverKind kind);

inline constexpr double kLocalizationZeta = 3.0;

// G_k (mε/d)^{1/k}.
double DefaultExtensionParameter(const MomentSpec& moment, int m,
                                 double epsilon, int d);

struct ErmInstance {
  Dataset data;
  LossModel model{LossKind::kLinear};
  ConvexDomain domain;
  MomentSpec moment;
  PrivacyBudget budget;
  double lambda = 1.0;
  Vector w0;
  ExtensionParams extension;

  // C defaults to DefaultExtensionParameter(moment, m, ε, d).
  static absl::StatusOr<ErmInstance> Create(
      Dataset data, LossModel model, ConvexDomain domain, MomentSpec moment,
      double epsilon, double lambda, Vector w0,
      std::optional<double> C = std::nullopt);

  int m() const { return data.size(); }
  int d() const { return domain.dimension(); }
  double C() const { return extension.C; }
};

struct ErmOptions {
  // Iteration limit for every certified solve; 0 keeps the solvers' own caps.
  // Adaptive solves that reach it are reported as uncertified.
  int64_t max_solver_iterations = 0;
  // Iteration limit for inner extension solves (direct route only).
  int64_t max_inner_iterations = 0;
  // Solve the joint problem in coordinates (w, s·y_1, ..., s·y_m) with
  // s = diam(head)/(diam(W)√m), so that the replicated blocks together span
  // the same diameter as the w-block. Off gives the unscaled W0 × W^m.
  bool balance_joint_blocks = true;
  // Start both stages at Π(w0 − ḡ_C(w0)/λ), with ḡ_C the mean of the loss
  // subgradients clipped to norm C, instead of at w0.
  bool warm_start = true;
  // EM–PGM smoothness surrogate H, step size γ (0 → 1/(λ+H)), net spacing η
  // (0 → Cd/(εm(λ+H))), lower bound on η, and net size limit.
  double smoothness = 0.0;
  double em_gamma = 0.0;
  double em_net_eta = 0.0;
  double em_net_eta_floor = 0.0;
  int64_t em_max_net_points = 10'000'000;
};

struct ErmReport {
  ErmSolverKind solver = ErmSolverKind::kDoubleOutputPert;
  Vector output;
  Vector localization_center;  // w_loc
  double radius = 0.0;         // r of W0
  std::optional<LocalizedDomain> localized_domain;
  std::optional<SolveCertificate> stage1;
  std::optional<SolveCertificate> stage2;
  std::vector<double> noise_norms;
  std::vector<double> noise_scales;
  std::vector<double> budget_split;
  double runtime_ms = 0.0;
  // EM–PGM only.
  int64_t net_size = 0;
  double selected_score = 0.0;
  double min_score = 0.0;

  bool stage1_certified() const { return !stage1 || stage1->certified(); }
  bool stage2_certified() const { return !stage2 || stage2->certified(); }
  bool certified() const { return stage1_certified() && stage2_certified(); }
};

nlohmann::json ErmReportToJson(const ErmReport& report,
                               bool include_runtime = true);

// Deterministic stage cores.
//
// Stage 1: C²/(2λm²)-minimizer over W, returned as the w-block of the joint
// solve (adaptive) or directly (biased).
absl::StatusOr<SolveResult> SolveLocalizationStage(
    const ErmInstance& inst, ErmSolverKind route, const ErmOptions& options = {});
// Stage 2: C²/(72λm²)-minimizer over W0.
absl::StatusOr<SolveResult> SolveLocalizedStage(const ErmInstance& inst,
                                                const LocalizedDomain& w0_set,
                                                ErmSolverKind route,
                                                const ErmOptions& options = {});

// Joint solve over head × W^m; returns the w-block.
absl::StatusOr<SolveResult> SolveJointStage(
    const ErmInstance& inst, const ReplicatedProductSet::Head& head,
    double alpha, const ErmOptions& options = {});
// BiasedPsg with the averaged extension oracle plus λ(w − w0).
absl::StatusOr<SolveResult> SolveDirectStage(const ErmInstance& inst,
                                             const FeasibleSet& head,
                                             double alpha,
                                             const ErmOptions& options = {});

double LocalizationAccuracy(const ErmInstance& inst);  // C²/(2λm²)
double LocalizedAccuracy(const ErmInstance& inst);     // C²/(72λm²)
double OutputProjectionAccuracy(const ErmInstance& inst);  // C/(6λm)
double LocalizationSensitivity(const ErmInstance& inst);   // 4C/(λm)
double LocalizedSensitivity(const ErmInstance& inst);      // 3C/(λm)
// 100ζCd/(λmε_stage).
double LocalizationRadius(const ErmInstance& inst, double eps_stage,
                          double zeta);

struct LocalizationResult {
  LocalizedDomain domain;
  Vector approx_minimizer;  // w̃
  double noise_norm = 0.0;
  double noise_scale = 0.0;
  SolveCertificate certificate;
};

// Noise, projection and W0 construction around a given stage-1 result;
// OutputPertLocalize is SolveLocalizationStage followed by this.
absl::StatusOr<LocalizationResult> LocalizeFromStage(const ErmInstance& inst,
                                                     const SolveResult& stage,
                                                     double eps_stage,
                                                     double zeta, Rng& rng);

absl::StatusOr<LocalizationResult> OutputPertLocalize(
    const ErmInstance& inst, double eps_stage, double zeta, Rng& rng,
    const ErmOptions& options = {});

absl::StatusOr<ErmReport> DoubleOutputPert(const ErmInstance& inst, Rng& rng,
                                           const ErmOptions& options = {});
absl::StatusOr<ErmReport> DirectExtensionErm(const ErmInstance& inst, Rng& rng,
                                             const ErmOptions& options = {});
absl::StatusOr<ErmReport> EmPgm(const ErmInstance& inst, Rng& rng,
                                const ErmOptions& options = {});

absl::StatusOr<ErmReport> RunErm(ErmSolverKind kind, const ErmInstance& inst,
                                 Rng& rng, const ErmOptions& options = {});

// (1/m) Σ_i clip_C(∇f(w, z_i)).
Vector ClippedMeanGradient(const ErmInstance& inst, const Vector& w);

// Π_head(Π_W(w0 − ClippedMeanGradient(w0)/λ)).
Vector WarmStart(const ErmInstance& inst, const FeasibleSet& head);

// Clipped projected-gradient-mapping score used by EmPgm.
double ClippedPgmScore(const ErmInstance& inst, const Vector& w, double gamma);

// Axis grid with spacing η/√d over the bounding box of W, projected onto W
// and deduplicated.
absl::StatusOr<std::vector<Vector>> BuildNet(const ConvexDomain& domain,
                                             double eta, int64_t max_points);

namespace internal {

// Test-only controls for isolating the deterministic cores.
struct ErmHooks {
  bool zero_noise = false;
  std::optional<LocalizedDomain> pinned_localized_domain;
};

absl::StatusOr<LocalizationResult> OutputPertLocalizeImpl(
    const ErmInstance& inst, double eps_stage, double zeta,
    ErmSolverKind route, Rng& rng, const ErmOptions& options,
    const ErmHooks& hooks);

absl::StatusOr<ErmReport> TwoStageImpl(const ErmInstance& inst,
                                       ErmSolverKind route, Rng& rng,
                                       const ErmOptions& options,
                                       const ErmHooks& hooks);

}  // namespace internal
}  // namespace htdp

#endif  // HTDP_ERM_H_
