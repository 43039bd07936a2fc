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

#include "htdp/generators.h"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace htdp {
namespace {

constexpr double kTwoPointC0 = 0.25;
constexpr double kPackingMinDistance = 0.5;
constexpr double kMinPackingProbability = 1e-12;
constexpr int kMaxPackingLog2 = 16;

absl::Status CheckCommon(int d, int n, double radius) {
  if (d < 1) return absl::InvalidArgumentError("dimension must be >= 1");
  if (n < 0) return absl::InvalidArgumentError("sample count must be >= 0");
  if (!(radius > 0.0)) {
    return absl::InvalidArgumentError("domain radius must be positive");
  }
  return absl::OkStatus();
}

// Fills minimizer and optimum of ⟨μ, w⟩ over B(0, radius).
void SetLinearOptimum(InstanceSpec& spec) {
  const double norm = spec.population_mean.norm();
  if (norm > 0.0) {
    spec.population_minimizer = -spec.radius / norm * spec.population_mean;
  } else {
    spec.population_minimizer = Vector::Zero(spec.d);
  }
  spec.population_optimum = -spec.radius * norm;
}

Dataset DrawDataset(const InstanceSpec& spec, int n, Rng& rng) {
  Dataset data;
  data.dim = spec.d;
  data.samples.reserve(n);
  for (int i = 0; i < n; ++i) data.samples.push_back(DrawSample(spec, rng));
  return data;
}

}  // namespace

absl::StatusOr<MomentSpec> MomentSpec::Create(double k, double G_k,
                                              double G_2) {
  if (!(k >= 2.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("moment order k must be >= 2, got ", k));
  }
  if (!(G_k > 0.0) || !(G_2 > 0.0)) {
    return absl::InvalidArgumentError("moment bounds must be positive");
  }
  if (G_2 > G_k * (1.0 + 1e-12)) {
    return absl::InvalidArgumentError(
        absl::StrCat("moment bounds must satisfy G_2 <= G_k, got G_2=", G_2,
                     " G_k=", G_k));
  }
  return MomentSpec{k, G_k, G_2};
}

absl::StatusOr<GeneratorKind> ParseGeneratorKind(std::string_view name) {
  if (name == "pareto_linear") return GeneratorKind::kParetoLinear;
  if (name == "packing_hard") return GeneratorKind::kPackingHard;
  if (name == "two_point") return GeneratorKind::kTwoPoint;
  return absl::InvalidArgumentError(
      absl::StrCat("unknown instance generator: ", std::string(name)));
}

std::string_view GeneratorKindName(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kParetoLinear:
      return "pareto_linear";
    case GeneratorKind::kPackingHard:
      return "packing_hard";
    case GeneratorKind::kTwoPoint:
      return "two_point";
  }
  return "unknown";
}

ConvexDomain InstanceSpec::domain() const {
  return ConvexDomain::Ball(Vector::Zero(d), radius).value();
}

double InstanceSpec::PopulationRisk(const Vector& w) const {
  return population_mean.dot(w);
}

nlohmann::json InstanceSpecToJson(const InstanceSpec& spec) {
  auto vec = [](const Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  nlohmann::json j;
  j["generator"] = std::string(GeneratorKindName(spec.generator));
  j["d"] = spec.d;
  j["n"] = spec.n;
  j["seed"] = spec.seed;
  j["radius"] = spec.radius;
  j["k"] = spec.moment.k;
  j["G_k"] = spec.moment.G_k;
  j["G_2"] = spec.moment.G_2;
  j["G_1"] = spec.G_1;
  j["population_mean"] = vec(spec.population_mean);
  j["population_minimizer"] = vec(spec.population_minimizer);
  j["population_optimum"] = spec.population_optimum;
  switch (spec.generator) {
    case GeneratorKind::kParetoLinear:
      j["pareto_shape"] = spec.pareto_shape;
      j["pareto_scale"] = spec.pareto_scale;
      j["direction_bias"] = spec.direction_bias;
      break;
    case GeneratorKind::kPackingHard:
      j["epsilon"] = spec.epsilon;
      j["zeta"] = spec.zeta;
      j["p"] = spec.packing_p;
      j["a"] = spec.packing_a;
      j["packing_size"] = spec.packing_size;
      j["nu"] = vec(spec.packing_nu);
      j["vacuous"] = spec.vacuous;
      break;
    case GeneratorKind::kTwoPoint:
      j["zeta"] = spec.zeta;
      j["rho"] = spec.rho;
      j["sign"] = spec.sign;
      break;
  }
  return j;
}

Vector UniformOnSphere(int d, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(d);
  double norm = 0.0;
  do {
    for (int j = 0; j < d; ++j) v[j] = normal(rng);
    norm = v.norm();
  } while (norm == 0.0);
  return v / norm;
}

Sample DrawSample(const InstanceSpec& spec, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Sample z;
  z.b = 0.0;
  switch (spec.generator) {
    case GeneratorKind::kParetoLinear: {
      // Inverse CDF with U in (0, 1].
      const double u = 1.0 - unif(rng);
      const double r = spec.pareto_scale * std::pow(u, -1.0 / spec.pareto_shape);
      const bool biased = unif(rng) < spec.direction_bias;
      z.a = r * (biased ? spec.mean_direction : UniformOnSphere(spec.d, rng));
      break;
    }
    case GeneratorKind::kPackingHard:
      if (unif(rng) < spec.packing_p) {
        z.a = spec.packing_a * spec.packing_nu;
      } else {
        z.a = Vector::Zero(spec.d);
      }
      break;
    case GeneratorKind::kTwoPoint: {
      const double plus = 0.5 * (1.0 + spec.sign * spec.rho);
      z.a = Vector::Zero(spec.d);
      z.a[0] = unif(rng) < plus ? spec.moment.G_2 : -spec.moment.G_2;
      break;
    }
  }
  return z;
}

absl::StatusOr<GeneratedInstance> GenParetoLinear(const ParetoLinearParams& p) {
  if (absl::Status s = CheckCommon(p.d, p.n, p.radius); !s.ok()) return s;
  if (!(p.k >= 2.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("tail moment order must be >= 2, got ", p.k));
  }
  if (!(p.G_k > 0.0) || !(p.shape_offset > 0.0) ||
      !(p.direction_bias >= 0.0 && p.direction_bias <= 1.0)) {
    return absl::InvalidArgumentError("invalid pareto_linear parameters");
  }
  Rng rng(p.seed);
  InstanceSpec spec;
  spec.generator = GeneratorKind::kParetoLinear;
  spec.d = p.d;
  spec.n = p.n;
  spec.seed = p.seed;
  spec.radius = p.radius;
  spec.pareto_shape = p.k + p.shape_offset;
  const double shape = spec.pareto_shape;
  // E R^j = shape · scale^j / (shape − j) for j < shape.
  spec.pareto_scale = p.G_k * std::pow((shape - p.k) / shape, 1.0 / p.k);
  const double scale = spec.pareto_scale;
  const double g2 = scale * std::sqrt(shape / (shape - 2.0));
  spec.G_1 = shape * scale / (shape - 1.0);
  auto moment = MomentSpec::Create(p.k, p.G_k, std::min(g2, p.G_k));
  if (!moment.ok()) return moment.status();
  spec.moment = *moment;
  spec.direction_bias = p.direction_bias;
  spec.mean_direction = UniformOnSphere(p.d, rng);
  spec.population_mean = p.direction_bias * spec.G_1 * spec.mean_direction;
  SetLinearOptimum(spec);
  GeneratedInstance out{DrawDataset(spec, p.n, rng), std::move(spec)};
  return out;
}

absl::StatusOr<std::vector<Vector>> GreedySpherePacking(int d, Rng& rng) {
  const int target = 1 << std::min(d, kMaxPackingLog2);
  const long long budget = 1000LL * target + 1000;
  std::vector<Vector> points;
  points.reserve(target);
  const double min_sq = kPackingMinDistance * kPackingMinDistance;
  for (long long attempt = 0;
       attempt < budget && static_cast<int>(points.size()) < target;
       ++attempt) {
    Vector candidate = UniformOnSphere(d, rng);
    bool separated = true;
    for (const Vector& q : points) {
      if ((q - candidate).squaredNorm() < min_sq) {
        separated = false;
        break;
      }
    }
    if (separated) points.push_back(std::move(candidate));
  }
  if (static_cast<int>(points.size()) < target) {
    return absl::ResourceExhaustedError(
        absl::StrCat("packing construction found ", points.size(), " of ",
                     target, " points within the retry budget"));
  }
  return points;
}

absl::StatusOr<GeneratedInstance> GenPackingHard(const PackingHardParams& p) {
  if (absl::Status s = CheckCommon(p.d, p.n, p.radius); !s.ok()) return s;
  if (!(p.zeta > 0.0 && p.zeta <= 0.25)) {
    return absl::InvalidArgumentError(
        absl::StrCat("zeta must lie in (0, 1/4], got ", p.zeta));
  }
  if (!(p.epsilon > 0.0) || !(p.G_k > 0.0) || !(p.k >= 2.0) || p.n < 1) {
    return absl::InvalidArgumentError("invalid packing_hard parameters");
  }
  Rng rng(p.seed);
  auto packing = GreedySpherePacking(p.d, rng);
  if (!packing.ok()) return packing.status();

  InstanceSpec spec;
  spec.generator = GeneratorKind::kPackingHard;
  spec.d = p.d;
  spec.n = p.n;
  spec.seed = p.seed;
  spec.radius = p.radius;
  spec.epsilon = p.epsilon;
  spec.zeta = p.zeta;
  spec.packing_size = static_cast<int>(packing->size());
  std::uniform_int_distribution<int> pick(0, spec.packing_size - 1);
  spec.packing_nu = (*packing)[pick(rng)];

  const double raw =
      std::log((spec.packing_size - 1) / (4.0 * std::exp(1.0) * p.zeta)) /
      (p.n * p.epsilon);
  spec.vacuous = !(raw > 0.0);
  spec.packing_p = std::clamp(raw, kMinPackingProbability, 1.0);
  if (spec.vacuous) spec.packing_p = kMinPackingProbability;
  spec.packing_a = p.G_k * std::pow(spec.packing_p, -1.0 / p.k);

  // ‖z‖ ∈ {0, a}: E‖z‖^j = p a^j.
  const double g2 = std::sqrt(spec.packing_p) * spec.packing_a;
  auto moment = MomentSpec::Create(p.k, p.G_k, std::min(g2, p.G_k));
  if (!moment.ok()) return moment.status();
  spec.moment = *moment;
  spec.G_1 = spec.packing_p * spec.packing_a;
  spec.population_mean = spec.packing_p * spec.packing_a * spec.packing_nu;
  SetLinearOptimum(spec);
  GeneratedInstance out{DrawDataset(spec, p.n, rng), std::move(spec)};
  return out;
}

absl::StatusOr<GeneratedInstance> GenTwoPoint(const TwoPointParams& p) {
  if (absl::Status s = CheckCommon(p.d, p.n, p.radius); !s.ok()) return s;
  if (!(p.zeta > 0.0 && p.zeta <= 0.25)) {
    return absl::InvalidArgumentError(
        absl::StrCat("zeta must lie in (0, 1/4], got ", p.zeta));
  }
  if (!(p.G_2 > 0.0) || p.sign < -1 || p.sign > 1 || p.n < 1) {
    return absl::InvalidArgumentError("invalid two_point parameters");
  }
  Rng rng(p.seed);
  InstanceSpec spec;
  spec.generator = GeneratorKind::kTwoPoint;
  spec.d = p.d;
  spec.n = p.n;
  spec.seed = p.seed;
  spec.radius = p.radius;
  spec.zeta = p.zeta;
  spec.sign = p.sign;
  spec.rho =
      p.sign == 0
          ? 0.0
          : kTwoPointC0 *
                std::min(std::sqrt(std::log(1.0 / p.zeta) / p.n), 1.0);
  spec.moment = MomentSpec{2.0, p.G_2, p.G_2};
  spec.G_1 = p.G_2;
  spec.population_mean = Vector::Zero(p.d);
  spec.population_mean[0] = p.sign * spec.rho * p.G_2;
  SetLinearOptimum(spec);
  GeneratedInstance out{DrawDataset(spec, p.n, rng), std::move(spec)};
  return out;
}

}  // namespace htdp
