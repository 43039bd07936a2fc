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

// Certified first-order solvers over FeasibleSet domains.
//
// AdaptiveProjSubgrad: step η_t = D/√S_t with S_t = Σ_s ‖g_s‖², ξ_t-inexact
// projection with ξ_t = min{D, αη_t/(6D)}, stopping once 3D√S_t ≤ αt and
// returning the running average of x_1, ..., x_t.
//
// BiasedPsg: fixed schedule of T = ⌈(4DL/α)²⌉ steps with η = D/(L√T) for
// oracles whose subgradients are accurate up to an additive bias B ≤ α/4.

#ifndef HTDP_SUBGRAD_H_
#define HTDP_SUBGRAD_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "htdp/geometry.h"
#include "htdp/types.h"

namespace htdp {

// Writes a subgradient at x into grad (resized by the callee if needed).
// When value is non-null the objective value at x is stored there too.
using OracleFn =
    std::function<absl::Status(const Vector& x, Vector& grad, double* value)>;

struct FirstOrderOracle {
  OracleFn eval;
  double declared_bias = 0.0;
  std::optional<double> declared_norm_bound;
};

enum class StopReason {
  kZeroGradient,
  kCertified,
  kIterationCap,
  kFixedSchedule,
};

std::string_view StopReasonName(StopReason reason);

struct SolveCertificate {
  int64_t iterations = 0;
  double cumulative_sq_grad = 0.0;
  double target_alpha = 0.0;
  double diameter = 0.0;
  double max_grad_norm = 0.0;
  int64_t iteration_cap = 0;
  StopReason stop_reason = StopReason::kIterationCap;

  // True when the returned point carries the α guarantee.
  bool certified() const { return stop_reason != StopReason::kIterationCap; }
};

struct TraceRow {
  int64_t t = 0;
  double grad_norm = 0.0;
  double cumulative_sq_grad = 0.0;
  double eta = 0.0;
  double xi = 0.0;
  std::optional<double> objective;
};

void WriteTraceCsv(const std::vector<TraceRow>& rows, std::ostream& out);

struct SolverOptions {
  // Hard iteration limit. For the adaptive method 0 selects the default
  // 10·⌈(3·D·L_obs/α)²⌉ rule; for BiasedPsg 0 means unlimited.
  int64_t max_iterations = 0;
  // Optional per-iteration trace. Objective values are requested from the
  // oracle only when a trace is attached.
  std::vector<TraceRow>* trace = nullptr;
};

struct SolveResult {
  Vector point;
  SolveCertificate certificate;
};

// Runs the adaptive method from start (projected onto the domain first).
// Hitting the iteration cap is not an error: the result is the running
// average with the lowest objective among those at t = 1, 2, 4, ... and at
// the cap, with stop_reason == kIterationCap. The oracle must then report
// objective values.
absl::StatusOr<SolveResult> AdaptiveProjSubgrad(const FeasibleSet& domain,
                                                const FirstOrderOracle& oracle,
                                                const Vector& start,
                                                double alpha, double D,
                                                const SolverOptions& options = {});

// Number of steps used by BiasedPsg.
int64_t BiasedPsgSteps(double alpha, double D, double L);

absl::StatusOr<SolveResult> BiasedPsg(const FeasibleSet& domain,
                                      const FirstOrderOracle& oracle,
                                      const Vector& start, double alpha,
                                      double D,
                                      const SolverOptions& options = {});

}  // namespace htdp

#endif  // HTDP_SUBGRAD_H_
