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

#include "htdp/extension.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace htdp {
namespace {

absl::Status CheckJointInputs(const Dataset& data, double lambda,
                              const Vector& w0, const JointPoint& p) {
  if (!(lambda >= 0.0)) {
    return absl::InvalidArgumentError("lambda must be nonnegative");
  }
  if (static_cast<int>(p.ys.size()) != data.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("joint point has ", p.ys.size(), " y-blocks for ",
                     data.size(), " samples"));
  }
  const int d = static_cast<int>(w0.size());
  if (p.w.size() != d || data.dim != d) {
    return absl::InvalidArgumentError("joint point dimension mismatch");
  }
  for (const Vector& y : p.ys) {
    if (y.size() != d) {
      return absl::InvalidArgumentError("y-block dimension mismatch");
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<ExtensionParams> ExtensionParams::Create(double C) {
  if (!(C > 0.0) || !std::isfinite(C)) {
    return absl::InvalidArgumentError(
        absl::StrCat("extension parameter C must be positive, got ", C));
  }
  return ExtensionParams{C};
}

absl::StatusOr<double> JointObjective(const LossModel& model,
                                      const Dataset& data,
                                      const ExtensionParams& params,
                                      double lambda, const Vector& w0,
                                      const JointPoint& p) {
  if (absl::Status s = CheckJointInputs(data, lambda, w0, p); !s.ok()) {
    return s;
  }
  double total = 0.0;
  for (int i = 0; i < data.size(); ++i) {
    total += model.Value(p.ys[i], data.samples[i]) +
             params.C * (p.w - p.ys[i]).norm();
  }
  const double m = data.size();
  return (m > 0 ? total / m : 0.0) + 0.5 * lambda * (p.w - w0).squaredNorm();
}

absl::StatusOr<JointPoint> JointSubgradient(const LossModel& model,
                                            const Dataset& data,
                                            const ExtensionParams& params,
                                            double lambda, const Vector& w0,
                                            const JointPoint& p) {
  if (absl::Status s = CheckJointInputs(data, lambda, w0, p); !s.ok()) {
    return s;
  }
  const int m = data.size();
  JointPoint g;
  g.w = lambda * (p.w - w0);
  g.ys.reserve(m);
  for (int i = 0; i < m; ++i) {
    Vector s = p.w - p.ys[i];
    const double norm = s.norm();
    if (norm > 0.0) {
      s /= norm;
    } else {
      s.setZero();
    }
    g.w += (params.C / m) * s;
    g.ys.push_back((model.Subgradient(p.ys[i], data.samples[i]) -
                    params.C * s) /
                   m);
  }
  return g;
}

Vector FlattenJoint(const JointPoint& p) {
  const int d = static_cast<int>(p.w.size());
  Vector flat(d * (p.ys.size() + 1));
  flat.head(d) = p.w;
  for (size_t i = 0; i < p.ys.size(); ++i) {
    flat.segment(d * (i + 1), d) = p.ys[i];
  }
  return flat;
}

JointPoint UnflattenJoint(const Vector& flat, int d, int m) {
  JointPoint p;
  p.w = flat.head(d);
  p.ys.reserve(m);
  for (int i = 0; i < m; ++i) p.ys.push_back(flat.segment(d * (i + 1), d));
  return p;
}

absl::StatusOr<JointProblem> JointProblem::Create(const LossModel& model,
                                                  const Dataset* data,
                                                  const ExtensionParams& params,
                                                  double lambda, Vector w0) {
  if (data == nullptr) return absl::InvalidArgumentError("null dataset");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    return absl::InvalidArgumentError("lambda must be nonnegative");
  }
  if (!(params.C > 0.0)) {
    return absl::InvalidArgumentError("extension parameter C must be positive");
  }
  if (w0.size() != data->dim || !AllFinite(w0)) {
    return absl::InvalidArgumentError("center dimension mismatch");
  }
  for (const Sample& z : data->samples) {
    if (z.a.size() != data->dim) {
      return absl::InvalidArgumentError("sample dimension mismatch");
    }
  }
  return JointProblem(model, data, params.C, lambda, std::move(w0));
}

double JointProblem::Value(const Vector& flat) const {
  const int m = samples();
  const auto w = flat.head(dim_);
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto y = flat.segment(dim_ * (i + 1), dim_);
    total += model_.Value(y, data_->samples[i]) + C_ * (w - y).norm();
  }
  return (m > 0 ? total / m : 0.0) + 0.5 * lambda_ * (w - w0_).squaredNorm();
}

void JointProblem::Subgradient(const Vector& flat, Vector& grad) const {
  const int m = samples();
  grad.resize(flat.size());
  const auto w = flat.head(dim_);
  auto gw = grad.head(dim_);
  gw = lambda_ * (w - w0_);
  const double inv_m = 1.0 / m;
  for (int i = 0; i < m; ++i) {
    const auto y = flat.segment(dim_ * (i + 1), dim_);
    auto gy = grad.segment(dim_ * (i + 1), dim_);
    const Sample& z = data_->samples[i];
    const double coef = model_.SubgradientCoefficient(y, z) * inv_m;
    const double dist = (w - y).norm();
    if (dist > 0.0) {
      const double scale = C_ * inv_m / dist;
      gw += scale * (w - y);
      gy = coef * z.a - scale * (w - y);
    } else {
      gy = coef * z.a;
    }
  }
}

FirstOrderOracle JointProblem::Oracle() const {
  FirstOrderOracle oracle;
  oracle.eval = [this](const Vector& x, Vector& grad, double* value) {
    Subgradient(x, grad);
    if (value != nullptr) *value = Value(x);
    return absl::OkStatus();
  };
  return oracle;
}

Vector JointProblem::InitialPoint() const {
  return w0_.replicate(samples() + 1, 1);
}

double ExtensionInnerValue(const LossModel& model, const Sample& z,
                           const Vector& w, double C, const Vector& y) {
  return model.Value(y, z) + C * (w - y).norm();
}

Vector ExtensionInnerSubgradient(const LossModel& model, const Sample& z,
                                 const Vector& w, double C, const Vector& y) {
  const auto [lo, hi] = model.SubdifferentialCoefficients(y, z);
  const double a_norm = z.a.norm();
  const Vector diff = y - w;
  const double dist = diff.norm();
  if (dist == 0.0) {
    // ∂f(w) + C·B(0, 1): shrink the smallest loss subgradient by C.
    const double t = std::clamp(0.0, lo, hi);
    const double g_norm = std::abs(t) * a_norm;
    if (g_norm <= C) return Vector::Zero(w.size());
    return (t * (1.0 - C / g_norm)) * z.a;
  }
  const Vector u = diff / dist;
  double t = 0.0;
  if (a_norm > 0.0) t = -C * z.a.dot(u) / (a_norm * a_norm);
  t = std::clamp(t, lo, hi);
  return t * z.a + C * u;
}

absl::StatusOr<ExtensionValue> ExtensionValueApprox(
    const LossModel& model, const Sample& z, const Vector& w,
    const ConvexDomain& domain, const ExtensionParams& params,
    double alpha_in, const SolverOptions& options) {
  if (!(alpha_in > 0.0)) {
    return absl::InvalidArgumentError("inner accuracy must be positive");
  }
  if (!(params.C > 0.0)) {
    return absl::InvalidArgumentError("extension parameter C must be positive");
  }
  if (w.size() != domain.dimension() || z.a.size() != domain.dimension()) {
    return absl::InvalidArgumentError("extension query dimension mismatch");
  }
  if (!AllFinite(w)) return absl::InvalidArgumentError("query is not finite");
  const double C = params.C;
  FirstOrderOracle oracle;
  oracle.eval = [&](const Vector& y, Vector& grad, double* value) {
    grad = ExtensionInnerSubgradient(model, z, w, C, y);
    if (value != nullptr) *value = ExtensionInnerValue(model, z, w, C, y);
    return absl::OkStatus();
  };
  const Vector start = domain.Project(w);
  absl::StatusOr<SolveResult> solved = AdaptiveProjSubgrad(
      domain, oracle, start, alpha_in, domain.diameter_bound(), options);
  if (!solved.ok()) return solved.status();
  const SolveCertificate& cert = solved->certificate;
  if (!cert.certified()) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "extension inner solve stopped at iteration cap after ",
        cert.iterations, " iterations (S_t=", cert.cumulative_sq_grad,
        ", alpha=", cert.target_alpha, ")"));
  }
  ExtensionValue out;
  out.certificate = cert;
  const double at_solution =
      ExtensionInnerValue(model, z, w, C, solved->point);
  const double at_start = ExtensionInnerValue(model, z, w, C, start);
  if (at_start < at_solution) {
    out.value = at_start;
    out.minimizer = start;
  } else {
    out.value = at_solution;
    out.minimizer = std::move(solved->point);
  }
  return out;
}

absl::StatusOr<Vector> ExtensionSubgradientApprox(
    const LossModel& model, const Sample& z, const Vector& w,
    const ConvexDomain& domain, const ExtensionParams& params, double B,
    const SolverOptions& options) {
  if (!(B > 0.0)) {
    return absl::InvalidArgumentError("oracle bias B must be positive");
  }
  absl::StatusOr<ExtensionValue> inner =
      ExtensionValueApprox(model, z, w, domain, params, B / 2.0, options);
  if (!inner.ok()) return inner.status();
  const double C = params.C;
  const Vector diff = w - inner->minimizer;
  const double dist = diff.norm();
  if (dist > B / (2.0 * C)) return Vector((C / dist) * diff);
  const double t = model.SubgradientCoefficient(w, z);
  const double g_norm = std::abs(t) * z.a.norm();
  const double scale = g_norm > C ? C / g_norm : 1.0;
  return Vector((t * scale) * z.a);
}

double ExtensionBiasDiag(const Dataset& data, const LossModel& model,
                         double diameter, const ExtensionParams& params) {
  if (data.samples.empty()) return 0.0;
  double total = 0.0;
  for (const Sample& z : data.samples) {
    total += std::max(0.0, model.PerSampleLipschitz(z) - params.C);
  }
  return diameter * total / data.size();
}

}  // namespace htdp
