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

#include "htdp/dp.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "htdp/generators.h"

namespace htdp {

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(double epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive and finite, got ", epsilon));
  }
  return PrivacyBudget{epsilon};
}

absl::StatusOr<NoiseSpec> NoiseSpec::Create(int dimension, double beta) {
  if (dimension < 1) {
    return absl::InvalidArgumentError("noise dimension must be >= 1");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    return absl::InvalidArgumentError(
        absl::StrCat("noise scale must be positive and finite, got ", beta));
  }
  return NoiseSpec{dimension, beta};
}

absl::StatusOr<NoiseSpec> NoiseSpec::ForSensitivity(int dimension,
                                                    double sensitivity,
                                                    double epsilon) {
  if (!(sensitivity > 0.0) || !(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        "sensitivity and epsilon must be positive");
  }
  return Create(dimension, sensitivity / epsilon);
}

Vector SampleIsotropicLaplace(const NoiseSpec& spec, Rng& rng) {
  std::gamma_distribution<double> radial(spec.dimension, spec.beta);
  const double r = radial(rng);
  return r * UniformOnSphere(spec.dimension, rng);
}

absl::StatusOr<std::vector<double>> ExponentialMechanismProbabilities(
    const std::vector<double>& scores, double sensitivity, double epsilon) {
  if (scores.empty()) {
    return absl::InvalidArgumentError("exponential mechanism needs candidates");
  }
  if (!(sensitivity > 0.0) || !(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        "sensitivity and epsilon must be positive");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) {
      return absl::InvalidArgumentError("scores must be finite");
    }
  }
  const double min_score = *std::min_element(scores.begin(), scores.end());
  std::vector<double> p(scores.size());
  double total = 0.0;
  for (size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(-epsilon * (scores[i] - min_score) / (2.0 * sensitivity));
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

absl::StatusOr<int> ExponentialMechanism(const std::vector<double>& scores,
                                         double sensitivity, double epsilon,
                                         Rng& rng) {
  absl::StatusOr<std::vector<double>> p =
      ExponentialMechanismProbabilities(scores, sensitivity, epsilon);
  if (!p.ok()) return p.status();
  if (p->size() == 1) return 0;
  std::discrete_distribution<int> pick(p->begin(), p->end());
  return pick(rng);
}

}  // namespace htdp
