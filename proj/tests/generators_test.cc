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

#include <cmath>

#include "gtest/gtest.h"
#include "oracles.h"

namespace htdp {
namespace {

bool SameData(const Dataset& a, const Dataset& b) {
  if (a.size() != b.size() || a.dim != b.dim) return false;
  for (int i = 0; i < a.size(); ++i) {
    if (a.samples[i].a != b.samples[i].a || a.samples[i].b != b.samples[i].b) {
      return false;
    }
  }
  return true;
}

TEST(MomentSpecTest, Validation) {
  EXPECT_TRUE(MomentSpec::Create(2.0, 1.0, 1.0).ok());
  EXPECT_TRUE(MomentSpec::Create(4.0, 2.0, 1.0).ok());
  EXPECT_FALSE(MomentSpec::Create(1.5, 1.0, 1.0).ok());
  EXPECT_FALSE(MomentSpec::Create(2.0, 1.0, 2.0).ok());
  EXPECT_FALSE(MomentSpec::Create(2.0, 0.0, 0.0).ok());
}

TEST(ParetoLinearTest, SecondMomentMatches) {
  ParetoLinearParams p;
  p.d = 1;
  p.n = 100000;
  p.k = 2.0;
  p.G_k = 1.0;
  p.seed = 2024;
  auto inst = GenParetoLinear(p);
  ASSERT_TRUE(inst.ok());
  double m2 = 0.0;
  for (const Sample& z : inst->data.samples) m2 += z.a.squaredNorm();
  m2 /= p.n;
  EXPECT_NEAR(m2, 1.0, 0.05);
}

TEST(ParetoLinearTest, LinearOptimumIsClosedForm) {
  ParetoLinearParams p;
  p.d = 3;
  p.n = 10;
  p.radius = 2.0;
  auto inst = GenParetoLinear(p);
  ASSERT_TRUE(inst.ok());
  const InstanceSpec& s = inst->spec;
  const double mu = s.population_mean.norm();
  ASSERT_GT(mu, 0.0);
  EXPECT_NEAR(s.population_optimum, -s.radius * mu, 1e-12);
  EXPECT_LE((s.population_minimizer + s.radius * s.population_mean / mu).norm(),
            1e-12);
  EXPECT_NEAR(s.PopulationRisk(s.population_minimizer), s.population_optimum,
              1e-12);
  // Any feasible point does no better.
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    const Vector w = s.radius * UniformOnSphere(3, rng);
    EXPECT_GE(s.PopulationRisk(w), s.population_optimum - 1e-12);
  }
}

TEST(ParetoLinearTest, DeterministicInSeed) {
  ParetoLinearParams p;
  p.d = 2;
  p.n = 500;
  p.seed = 9;
  auto a = GenParetoLinear(p);
  auto b = GenParetoLinear(p);
  p.seed = 10;
  auto c = GenParetoLinear(p);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_TRUE(SameData(a->data, b->data));
  EXPECT_FALSE(SameData(a->data, c->data));
}

TEST(ParetoLinearTest, RejectsSmallTailIndex) {
  ParetoLinearParams p;
  p.k = 1.5;
  EXPECT_FALSE(GenParetoLinear(p).ok());
}

TEST(ParetoLinearTest, PopulationMomentWithinFivePercent) {
  ParetoLinearParams p;
  p.d = 2;
  p.n = 10;
  p.k = 3.0;
  p.G_k = 2.0;
  auto inst = GenParetoLinear(p);
  ASSERT_TRUE(inst.ok());
  Rng rng(77);
  double mk = 0.0;
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) {
    mk += std::pow(DrawSample(inst->spec, rng).a.norm(), p.k);
  }
  mk /= kDraws;
  EXPECT_NEAR(mk / std::pow(p.G_k, p.k), 1.0, 0.05);
}

TEST(PackingHardTest, DegenerateRegimeUsesFullMass) {
  PackingHardParams p;
  p.d = 8;
  p.n = 2;
  p.epsilon = 1.0;
  p.G_k = 1.5;
  p.seed = 3;
  auto inst = GenPackingHard(p);
  ASSERT_TRUE(inst.ok());
  EXPECT_DOUBLE_EQ(inst->spec.packing_p, 1.0);
  EXPECT_DOUBLE_EQ(inst->spec.packing_a, 1.5);
  for (const Sample& z : inst->data.samples) {
    EXPECT_LE((z.a - 1.5 * inst->spec.packing_nu).norm(), 1e-12);
  }
}

TEST(PackingHardTest, NegativeLogClampsAndFlagsVacuous) {
  PackingHardParams p;
  p.d = 1;
  p.n = 100;
  p.epsilon = 1.0;
  p.zeta = 0.25;
  auto inst = GenPackingHard(p);
  ASSERT_TRUE(inst.ok());
  EXPECT_EQ(inst->spec.packing_size, 2);
  EXPECT_TRUE(inst->spec.vacuous);
  EXPECT_DOUBLE_EQ(inst->spec.packing_p, 1e-12);
}

TEST(PackingHardTest, ProbabilityFormulaAndMoment) {
  PackingHardParams p;
  p.d = 6;
  p.n = 50;
  p.epsilon = 0.5;
  p.zeta = 0.1;
  p.k = 2.0;
  p.G_k = 1.0;
  p.seed = 4;
  auto inst = GenPackingHard(p);
  ASSERT_TRUE(inst.ok());
  const InstanceSpec& s = inst->spec;
  const double expected_p = std::min(
      std::log((s.packing_size - 1) / (4.0 * std::exp(1.0) * p.zeta)) /
          (p.n * p.epsilon),
      1.0);
  EXPECT_NEAR(s.packing_p, expected_p, 1e-15);
  EXPECT_FALSE(s.vacuous);
  EXPECT_NEAR(s.packing_a, p.G_k * std::pow(s.packing_p, -1.0 / p.k), 1e-12);
  EXPECT_LE((s.population_mean -
             p.G_k * std::pow(s.packing_p, 1.0 - 1.0 / p.k) * s.packing_nu)
                .norm(),
            1e-12);
  Rng rng(8);
  double mk = 0.0;
  constexpr int kDraws = 1000000;
  for (int i = 0; i < kDraws; ++i) {
    mk += std::pow(DrawSample(s, rng).a.norm(), p.k);
  }
  EXPECT_LE(mk / kDraws, std::pow(p.G_k, p.k) * 1.05);
}

TEST(PackingHardTest, PackingIsSeparated) {
  Rng rng(12);
  auto pts = GreedySpherePacking(4, rng);
  ASSERT_TRUE(pts.ok());
  EXPECT_GE(static_cast<int>(pts->size()), 2);
  for (size_t i = 0; i < pts->size(); ++i) {
    EXPECT_NEAR((*pts)[i].norm(), 1.0, 1e-12);
    for (size_t j = 0; j < i; ++j) {
      EXPECT_GE(((*pts)[i] - (*pts)[j]).norm(), 0.5);
    }
  }
}

TEST(TwoPointTest, SymmetricCaseHasZeroMean) {
  TwoPointParams p;
  p.sign = 0;
  p.n = 100;
  auto inst = GenTwoPoint(p);
  ASSERT_TRUE(inst.ok());
  EXPECT_EQ(inst->spec.rho, 0.0);
  EXPECT_EQ(inst->spec.population_mean.norm(), 0.0);
}

TEST(TwoPointTest, NormsAreExactAndMeanMatches) {
  TwoPointParams p;
  p.n = 1000000;
  p.G_2 = 2.0;
  p.zeta = 0.1;
  p.sign = -1;
  p.seed = 5;
  auto inst = GenTwoPoint(p);
  ASSERT_TRUE(inst.ok());
  const double rho =
      0.25 * std::min(std::sqrt(std::log(1.0 / p.zeta) / p.n), 1.0);
  EXPECT_NEAR(inst->spec.rho, rho, 1e-15);
  double mean = 0.0;
  for (const Sample& z : inst->data.samples) {
    EXPECT_EQ(z.a.norm(), p.G_2);
    mean += z.a[0];
  }
  mean /= p.n;
  const double sigma = p.G_2 * std::sqrt((1.0 - rho * rho) / p.n);
  EXPECT_NEAR(mean, -rho * p.G_2, 3.0 * sigma);
}

TEST(GeneratorNamesTest, RoundTrip) {
  for (GeneratorKind k : {GeneratorKind::kParetoLinear,
                          GeneratorKind::kPackingHard,
                          GeneratorKind::kTwoPoint}) {
    auto parsed = ParseGeneratorKind(GeneratorKindName(k));
    ASSERT_TRUE(parsed.ok());
    EXPECT_EQ(*parsed, k);
  }
  EXPECT_FALSE(ParseGeneratorKind("gaussian").ok());
}

}  // namespace
}  // namespace htdp
