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

// Synthetic linear-loss instances over the ball W = B(0, radius):
//
//  * pareto_linear: ‖a‖ is Pareto with shape k + shape_offset, scaled so that
//    E‖a‖^k = G_k^k exactly; the direction is a fixed unit vector u with
//    probability direction_bias and uniform on the sphere otherwise, giving
//    the population gradient μ = direction_bias · E‖a‖ · u.
//  * packing_hard: (1 − p) δ_0 + p δ_{aν} for ν drawn from a greedy
//    1/2-separated packing of the unit sphere, a = G_k p^{−1/k}.
//  * two_point: ±G₂ e₁ with P(+G₂ e₁) = (1 + sign·ρ)/2,
//    ρ = min{√(log(1/ζ)/n), 1} / 4.
//
// Every instance carries a closed-form population objective
// F(w) = ⟨μ, w⟩, minimized over the ball at −radius · μ/‖μ‖.

#ifndef HTDP_GENERATORS_H_
#define HTDP_GENERATORS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "htdp/geometry.h"
#include "htdp/losses.h"
#include "htdp/types.h"
#include "json.hpp"

namespace htdp {

struct MomentSpec {
  double k = 2.0;
  double G_k = 1.0;
  double G_2 = 1.0;

  static absl::StatusOr<MomentSpec> Create(double k, double G_k, double G_2);
};

enum class GeneratorKind { kParetoLinear, kPackingHard, kTwoPoint };

absl::StatusOr<GeneratorKind> ParseGeneratorKind(std::string_view name);
std::string_view GeneratorKindName(GeneratorKind kind);

struct InstanceSpec {
  GeneratorKind generator = GeneratorKind::kParetoLinear;
  int d = 1;
  int n = 0;
  uint64_t seed = 0;
  double radius = 1.0;  // W = B(0, radius), diameter D = 2 radius.
  MomentSpec moment;
  double G_1 = 0.0;     // E‖∇f‖.

  Vector population_mean;       // μ
  Vector population_minimizer;  // argmin over W of ⟨μ, w⟩
  double population_optimum = 0.0;

  // pareto_linear
  double pareto_shape = 0.0;
  double pareto_scale = 0.0;
  double direction_bias = 0.0;
  Vector mean_direction;

  // packing_hard
  double epsilon = 0.0;
  double zeta = 0.0;
  double packing_p = 0.0;
  double packing_a = 0.0;
  int packing_size = 0;
  Vector packing_nu;
  bool vacuous = false;

  // two_point
  double rho = 0.0;
  int sign = 0;

  double diameter() const { return 2.0 * radius; }
  ConvexDomain domain() const;
  LossModel loss() const { return LossModel(LossKind::kLinear); }
  double PopulationRisk(const Vector& w) const;
};

nlohmann::json InstanceSpecToJson(const InstanceSpec& spec);

struct GeneratedInstance {
  Dataset data;
  InstanceSpec spec;
};

struct ParetoLinearParams {
  int d = 1;
  int n = 1000;
  double k = 2.0;
  double G_k = 1.0;
  uint64_t seed = 0;
  double radius = 1.0;
  double shape_offset = 1.0;
  double direction_bias = 0.5;
};

struct PackingHardParams {
  int d = 1;
  int n = 1000;
  double epsilon = 1.0;
  double zeta = 0.25;
  double G_k = 1.0;
  double k = 2.0;
  uint64_t seed = 0;
  double radius = 1.0;
};

struct TwoPointParams {
  int n = 1000;
  double zeta = 0.25;
  double G_2 = 1.0;
  int sign = 1;  // +1, −1, or 0 for the symmetric (ρ = 0) law.
  uint64_t seed = 0;
  int d = 1;
  double radius = 1.0;
};

absl::StatusOr<GeneratedInstance> GenParetoLinear(const ParetoLinearParams& p);
absl::StatusOr<GeneratedInstance> GenPackingHard(const PackingHardParams& p);
absl::StatusOr<GeneratedInstance> GenTwoPoint(const TwoPointParams& p);

// One fresh draw from the instance's population law.
Sample DrawSample(const InstanceSpec& spec, Rng& rng);

// Uniform direction on the unit sphere in R^d.
Vector UniformOnSphere(int d, Rng& rng);

// Greedy rejection packing of the unit sphere with pairwise distance ≥ 1/2,
// targeting 2^min(d, 16) points.
absl::StatusOr<std::vector<Vector>> GreedySpherePacking(int d, Rng& rng);

}  // namespace htdp

#endif  // HTDP_GENERATORS_H_
