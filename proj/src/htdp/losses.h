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

// Per-sample convex losses of the form f(w, z) = φ(⟨a, w⟩ + b) with
// φ ∈ {identity, hinge, absolute value}, and dataset CSV serialization.

#ifndef HTDP_LOSSES_H_
#define HTDP_LOSSES_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "htdp/types.h"

namespace htdp {

enum class LossKind { kLinear, kHinge, kAbsolute };

absl::StatusOr<LossKind> ParseLossKind(std::string_view name);
std::string_view LossKindName(LossKind kind);

struct Sample {
  Vector a;
  double b = 0.0;
};

struct Dataset {
  int dim = 0;
  std::vector<Sample> samples;

  int size() const { return static_cast<int>(samples.size()); }
};

class LossModel {
 public:
  explicit LossModel(LossKind kind) : kind_(kind) {}

  LossKind kind() const { return kind_; }

  double Value(const Eigen::Ref<const Vector>& w, const Sample& z) const;

  // Kinks resolve to the minimum-norm element: hinge and absolute value both
  // return 0 when ⟨a, w⟩ + b = 0.
  Vector Subgradient(const Eigen::Ref<const Vector>& w, const Sample& z) const;

  // Scalar t with Subgradient(w, z) = t·a.
  double SubgradientCoefficient(const Eigen::Ref<const Vector>& w,
                                const Sample& z) const;

  // The subdifferential at w is {t·a : t ∈ [first, second]}.
  std::pair<double, double> SubdifferentialCoefficients(
      const Eigen::Ref<const Vector>& w, const Sample& z) const;

  // Worst-case Lipschitz constant of f(·, z): ‖a‖ for every supported kind.
  double PerSampleLipschitz(const Sample& z) const { return z.a.norm(); }

 private:
  LossKind kind_;
};

// Dimension-checked evaluation.
absl::StatusOr<double> EvalLoss(const LossModel& model, const Vector& w,
                                const Sample& z);
absl::StatusOr<Vector> EvalSubgradient(const LossModel& model, const Vector& w,
                                       const Sample& z);

// Empirical risk (1/n) Σ f(w, z_i).
double EmpiricalRisk(const LossModel& model, const Dataset& data,
                     const Vector& w);

// CSV with header a_1,...,a_d,b and one sample per row. Values are written
// with 17 significant digits so that a write/read cycle is lossless.
void WriteDatasetCsv(const Dataset& data, std::ostream& out);
absl::Status WriteDatasetCsvFile(const Dataset& data, const std::string& path);
absl::StatusOr<Dataset> ReadDatasetCsv(std::istream& in);
absl::StatusOr<Dataset> ReadDatasetCsvFile(const std::string& path);

}  // namespace htdp

#endif  // HTDP_LOSSES_H_
