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

// Lipschitz extension of a per-sample loss,
//   f_C(w, z) = inf_{y ∈ W} f(y, z) + C‖w − y‖,
// and the jointly convex objective over (w, y_1, ..., y_m)
//   Φ(w, y) = (1/m) Σ_i [f(y_i, z_i) + C‖w − y_i‖] + (λ/2)‖w − w0‖²
// whose minimum over w equals the regularized empirical extension risk.

#ifndef HTDP_EXTENSION_H_
#define HTDP_EXTENSION_H_

#include <vector>

#include "absl/status/statusor.h"
#include "htdp/geometry.h"
#include "htdp/losses.h"
#include "htdp/subgrad.h"
#include "htdp/types.h"

namespace htdp {

struct ExtensionParams {
  double C = 1.0;

  static absl::StatusOr<ExtensionParams> Create(double C);
};

struct JointPoint {
  Vector w;
  std::vector<Vector> ys;
};

absl::StatusOr<double> JointObjective(const LossModel& model,
                                      const Dataset& data,
                                      const ExtensionParams& params,
                                      double lambda, const Vector& w0,
                                      const JointPoint& p);

// Block subgradient with s_i = (w − y_i)/‖w − y_i‖ (0 when w = y_i):
//   g_w = (C/m) Σ s_i + λ(w − w0),  g_{y_i} = (1/m)(∇f(y_i, z_i) − C s_i).
absl::StatusOr<JointPoint> JointSubgradient(const LossModel& model,
                                            const Dataset& data,
                                            const ExtensionParams& params,
                                            double lambda, const Vector& w0,
                                            const JointPoint& p);

// Flat layout [w, y_1, ..., y_m], matching ReplicatedProductSet.
Vector FlattenJoint(const JointPoint& p);
JointPoint UnflattenJoint(const Vector& flat, int d, int m);

// Φ over flat vectors. Holds a pointer to the dataset, which must outlive it.
class JointProblem {
 public:
  static absl::StatusOr<JointProblem> Create(const LossModel& model,
                                             const Dataset* data,
                                             const ExtensionParams& params,
                                             double lambda, Vector w0);

  int dim() const { return dim_; }
  int samples() const { return static_cast<int>(data_->samples.size()); }
  int flat_dimension() const { return dim_ * (samples() + 1); }

  double Value(const Vector& flat) const;
  void Subgradient(const Vector& flat, Vector& grad) const;
  FirstOrderOracle Oracle() const;

  // Every block set to w0.
  Vector InitialPoint() const;

 private:
  JointProblem(const LossModel& model, const Dataset* data, double C,
               double lambda, Vector w0)
      : model_(model), data_(data), C_(C), lambda_(lambda),
        w0_(std::move(w0)), dim_(static_cast<int>(w0_.size())) {}

  LossModel model_;
  const Dataset* data_;
  double C_;
  double lambda_;
  Vector w0_;
  int dim_;
};

// φ_{w,z}(y) = f(y, z) + C‖w − y‖ and its minimum-norm subgradient.
double ExtensionInnerValue(const LossModel& model, const Sample& z,
                           const Vector& w, double C, const Vector& y);
Vector ExtensionInnerSubgradient(const LossModel& model, const Sample& z,
                                 const Vector& w, double C, const Vector& y);

struct ExtensionValue {
  double value = 0.0;   // f_C(w, z) ≤ value ≤ f_C(w, z) + alpha_in
  Vector minimizer;     // inner point ŷ attaining value
  SolveCertificate certificate;
};

// Minimizes φ_{w,z} over W with the adaptive solver started at Π_W(w). An
// uncertified inner solve is reported as ResourceExhausted.
absl::StatusOr<ExtensionValue> ExtensionValueApprox(
    const LossModel& model, const Sample& z, const Vector& w,
    const ConvexDomain& domain, const ExtensionParams& params,
    double alpha_in, const SolverOptions& options = {});

// B-approximate subgradient of f_C(·, z) at w with norm at most C: the inner
// problem is solved to accuracy B/2; if ‖w − ŷ‖ > B/(2C) the result is
// C(w − ŷ)/‖w − ŷ‖, otherwise the loss subgradient at w clipped to norm C.
absl::StatusOr<Vector> ExtensionSubgradientApprox(
    const LossModel& model, const Sample& z, const Vector& w,
    const ConvexDomain& domain, const ExtensionParams& params, double B,
    const SolverOptions& options = {});

// diameter · (1/n) Σ_i (A(z_i) − C)₊, an upper bound on the gap between the
// empirical risk and its extension.
double ExtensionBiasDiag(const Dataset& data, const LossModel& model,
                         double diameter, const ExtensionParams& params);

}  // namespace htdp

#endif  // HTDP_EXTENSION_H_
