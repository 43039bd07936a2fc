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

#include "htdp/subgrad.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"

namespace htdp {
namespace {

constexpr double kTightXi = 1e-12;
constexpr double kNormBoundSlack = 1e-9;

absl::Status CheckSolverInputs(const FeasibleSet& domain,
                               const FirstOrderOracle& oracle,
                               const Vector& start, double alpha, double D) {
  if (!oracle.eval) return absl::InvalidArgumentError("oracle is empty");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrCat("target accuracy must be positive, got ", alpha));
  }
  if (!(D > 0.0) || !std::isfinite(D)) {
    return absl::InvalidArgumentError(
        absl::StrCat("diameter bound must be positive, got ", D));
  }
  if (start.size() != domain.dimension()) {
    return absl::InvalidArgumentError(
        absl::StrCat("start has dimension ", start.size(), ", domain has ",
                     domain.dimension()));
  }
  if (!AllFinite(start)) {
    return absl::InvalidArgumentError("start point is not finite");
  }
  return absl::OkStatus();
}

absl::Status CheckGradient(const Vector& grad, int dim) {
  if (grad.size() != dim) {
    return absl::InternalError(absl::StrCat("oracle returned dimension ",
                                            grad.size(), ", expected ", dim));
  }
  if (!AllFinite(grad)) {
    return absl::InternalError("oracle returned a non-finite subgradient");
  }
  return absl::OkStatus();
}

int64_t CeilSquare(double x) {
  const double v = std::ceil(x * x);
  if (!(v < 9.0e18)) return std::numeric_limits<int64_t>::max();
  return static_cast<int64_t>(v);
}

}  // namespace

std::string_view StopReasonName(StopReason reason) {
  switch (reason) {
    case StopReason::kZeroGradient:
      return "zero_gradient";
    case StopReason::kCertified:
      return "certified";
    case StopReason::kIterationCap:
      return "iteration_cap";
    case StopReason::kFixedSchedule:
      return "fixed_schedule";
  }
  return "unknown";
}

void WriteTraceCsv(const std::vector<TraceRow>& rows, std::ostream& out) {
  out << "t,grad_norm,S_t,eta_t,xi_t,objective\n";
  for (const TraceRow& r : rows) {
    out << absl::StrFormat("%d,%.17g,%.17g,%.17g,%.17g,", r.t, r.grad_norm,
                           r.cumulative_sq_grad, r.eta, r.xi);
    if (r.objective.has_value()) out << absl::StrFormat("%.17g", *r.objective);
    out << "\n";
  }
}

absl::StatusOr<SolveResult> AdaptiveProjSubgrad(const FeasibleSet& domain,
                                                const FirstOrderOracle& oracle,
                                                const Vector& start,
                                                double alpha, double D,
                                                const SolverOptions& options) {
  if (absl::Status s = CheckSolverInputs(domain, oracle, start, alpha, D);
      !s.ok()) {
    return s;
  }
  const int dim = domain.dimension();
  Vector x = domain.Project(start, kTightXi);
  Vector sum = Vector::Zero(dim);
  Vector grad(dim);
  SolveCertificate cert;
  cert.target_alpha = alpha;
  cert.diameter = D;
  double S = 0.0;
  double objective = 0.0;
  Vector scratch(dim);
  std::optional<Vector> best_average;
  double best_value = 0.0;

  for (int64_t t = 1;; ++t) {
    double* value = options.trace != nullptr ? &objective : nullptr;
    if (absl::Status s = oracle.eval(x, grad, value); !s.ok()) return s;
    if (absl::Status s = CheckGradient(grad, dim); !s.ok()) return s;
    sum += x;
    const double g2 = grad.squaredNorm();
    cert.iterations = t;
    if (g2 == 0.0) {
      if (options.trace != nullptr) {
        options.trace->push_back({t, 0.0, S, 0.0, 0.0, objective});
      }
      cert.cumulative_sq_grad = S;
      cert.stop_reason = StopReason::kZeroGradient;
      cert.iteration_cap = std::max<int64_t>(cert.iteration_cap, t);
      return SolveResult{std::move(x), cert};
    }
    S += g2;
    cert.cumulative_sq_grad = S;
    cert.max_grad_norm = std::max(cert.max_grad_norm, std::sqrt(g2));
    const double eta = D / std::sqrt(S);
    const double xi = std::min(D, alpha * eta / (6.0 * D));
    if (options.trace != nullptr) {
      options.trace->push_back({t, std::sqrt(g2), S, eta, xi, objective});
    }
    cert.iteration_cap =
        options.max_iterations > 0
            ? options.max_iterations
            : 10 * CeilSquare(3.0 * D * cert.max_grad_norm / alpha);
    if (3.0 * D * std::sqrt(S) <= alpha * static_cast<double>(t)) {
      cert.stop_reason = StopReason::kCertified;
      return SolveResult{sum / static_cast<double>(t), cert};
    }
    const bool at_cap = t >= cert.iteration_cap;
    if (at_cap || (t & (t - 1)) == 0) {
      // Checkpoint the running average at powers of two and at the cap.
      Vector average = sum / static_cast<double>(t);
      double avg_value = 0.0;
      if (absl::Status s = oracle.eval(average, scratch, &avg_value);
          !s.ok()) {
        return s;
      }
      if (!best_average.has_value() || avg_value < best_value) {
        best_average = std::move(average);
        best_value = avg_value;
      }
    }
    if (at_cap) {
      cert.stop_reason = StopReason::kIterationCap;
      return SolveResult{*std::move(best_average), cert};
    }
    x.noalias() -= eta * grad;
    domain.ProjectInPlace(x, xi);
  }
}

int64_t BiasedPsgSteps(double alpha, double D, double L) {
  return std::max<int64_t>(1, CeilSquare(4.0 * D * L / alpha));
}

absl::StatusOr<SolveResult> BiasedPsg(const FeasibleSet& domain,
                                      const FirstOrderOracle& oracle,
                                      const Vector& start, double alpha,
                                      double D, const SolverOptions& options) {
  if (absl::Status s = CheckSolverInputs(domain, oracle, start, alpha, D);
      !s.ok()) {
    return s;
  }
  if (!oracle.declared_norm_bound.has_value() ||
      !(*oracle.declared_norm_bound > 0.0) ||
      !std::isfinite(*oracle.declared_norm_bound)) {
    return absl::InvalidArgumentError(
        "biased solver requires a finite declared subgradient norm bound");
  }
  if (!(oracle.declared_bias >= 0.0) ||
      oracle.declared_bias > alpha / 4.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("oracle bias ", oracle.declared_bias,
                     " exceeds alpha/4 = ", alpha / 4.0));
  }
  const double L = *oracle.declared_norm_bound;
  const int64_t T = BiasedPsgSteps(alpha, D, L);
  if (options.max_iterations > 0 && T > options.max_iterations) {
    return absl::ResourceExhaustedError(
        absl::StrCat("biased solver needs ", T, " steps, limit is ",
                     options.max_iterations));
  }
  const double eta = D / (L * std::sqrt(static_cast<double>(T)));
  const double xi = std::min(D, alpha * eta / (6.0 * D));

  const int dim = domain.dimension();
  Vector x = domain.Project(start, kTightXi);
  Vector sum = Vector::Zero(dim);
  Vector grad(dim);
  SolveCertificate cert;
  cert.target_alpha = alpha;
  cert.diameter = D;
  cert.iteration_cap = T;
  double objective = 0.0;
  for (int64_t t = 1; t <= T; ++t) {
    double* value = options.trace != nullptr ? &objective : nullptr;
    if (absl::Status s = oracle.eval(x, grad, value); !s.ok()) return s;
    if (absl::Status s = CheckGradient(grad, dim); !s.ok()) return s;
    const double gn = grad.norm();
    if (gn > L * (1.0 + kNormBoundSlack)) {
      return absl::InternalError(absl::StrCat(
          "oracle subgradient norm ", gn, " exceeds declared bound ", L));
    }
    sum += x;
    cert.cumulative_sq_grad += gn * gn;
    cert.max_grad_norm = std::max(cert.max_grad_norm, gn);
    if (options.trace != nullptr) {
      options.trace->push_back(
          {t, gn, cert.cumulative_sq_grad, eta, xi, objective});
    }
    if (t < T) {
      x.noalias() -= eta * grad;
      domain.ProjectInPlace(x, xi);
    }
  }
  cert.iterations = T;
  cert.stop_reason = StopReason::kFixedSchedule;
  return SolveResult{sum / static_cast<double>(T), cert};
}

}  // namespace htdp
