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

// Pure ε-DP mechanisms: isotropic Laplace noise with density ∝ exp(−‖b‖/β)
// and the finite-candidate exponential mechanism. Randomness is always drawn
// from the caller's generator.

#ifndef HTDP_DP_H_
#define HTDP_DP_H_

#include <array>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "htdp/types.h"

namespace htdp {

struct PrivacyBudget {
  double epsilon = 1.0;

  static absl::StatusOr<PrivacyBudget> Create(double epsilon);

  std::pair<double, double> SplitHalves() const {
    return {epsilon / 2.0, epsilon / 2.0};
  }
  std::array<double, 3> SplitHalfQuarterQuarter() const {
    return {epsilon / 2.0, epsilon / 4.0, epsilon / 4.0};
  }
};

// Radial law Gamma(d, β), direction uniform on the sphere.
struct NoiseSpec {
  int dimension = 1;
  double beta = 1.0;

  static absl::StatusOr<NoiseSpec> Create(int dimension, double beta);

  // Scale for an ε-DP release of a map with ℓ2 sensitivity Δ: β = Δ/ε.
  static absl::StatusOr<NoiseSpec> ForSensitivity(int dimension,
                                                  double sensitivity,
                                                  double epsilon);
};

Vector SampleIsotropicLaplace(const NoiseSpec& spec, Rng& rng);

// Selection probabilities ∝ exp(−ε·s_i/(2Δ)), shifted by the minimum score.
absl::StatusOr<std::vector<double>> ExponentialMechanismProbabilities(
    const std::vector<double>& scores, double sensitivity, double epsilon);

absl::StatusOr<int> ExponentialMechanism(const std::vector<double>& scores,
                                         double sensitivity, double epsilon,
                                         Rng& rng);

}  // namespace htdp

#endif  // HTDP_DP_H_
