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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "oracles.h"

namespace htdp {
namespace {

Vector V(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

Sample S(std::initializer_list<double> a, double b) {
  Sample z;
  z.a = V(a);
  z.b = b;
  return z;
}

ExtensionParams Params(double C) { return *ExtensionParams::Create(C); }

ConvexDomain Interval(double lo, double hi) {
  return *ConvexDomain::Box(V({lo}), V({hi}));
}

oracle::Family FamilyOf(LossKind kind) {
  switch (kind) {
    case LossKind::kLinear:
      return oracle::Family::kLinear;
    case LossKind::kHinge:
      return oracle::Family::kHinge;
    case LossKind::kAbsolute:
      return oracle::Family::kAbsolute;
  }
  return oracle::Family::kLinear;
}

TEST(ExtensionParamsTest, RequiresPositiveC) {
  EXPECT_FALSE(ExtensionParams::Create(0.0).ok());
  EXPECT_FALSE(ExtensionParams::Create(-1.0).ok());
  EXPECT_TRUE(ExtensionParams::Create(0.1).ok());
}

TEST(JointObjectiveTest, HandExamples) {
  const LossModel hinge(LossKind::kHinge);
  Dataset data;
  data.dim = 1;
  data.samples = {S({1}, 0)};
  JointPoint p{V({0}), {V({0})}};
  auto v = JointObjective(hinge, data, Params(1.0), 0.0, V({0}), p);
  ASSERT_TRUE(v.ok());
  EXPECT_DOUBLE_EQ(*v, 0.0);
  p.w = V({1});
  v = JointObjective(hinge, data, Params(1.0), 0.0, V({0}), p);
  ASSERT_TRUE(v.ok());
  EXPECT_DOUBLE_EQ(*v, 1.0);
}

TEST(JointObjectiveTest, MatchesIndependentEvaluation) {
  Rng rng(4);
  std::normal_distribution<double> N;
  const LossModel model(LossKind::kAbsolute);
  Dataset data;
  data.dim = 2;
  data.samples = {S({N(rng), N(rng)}, N(rng)), S({N(rng), N(rng)}, N(rng))};
  const Vector w = V({N(rng), N(rng)});
  const Vector w0 = V({N(rng), N(rng)});
  JointPoint p{w, {V({N(rng), N(rng)}), V({N(rng), N(rng)})}};
  const double C = 0.7, lambda = 1.3;
  double expected = 0.0;
  for (int i = 0; i < 2; ++i) {
    const Sample& z = data.samples[i];
    expected += std::fabs(z.a.dot(p.ys[i]) + z.b) + C * (w - p.ys[i]).norm();
  }
  expected = expected / 2 + 0.5 * lambda * (w - w0).squaredNorm();
  auto v = JointObjective(model, data, Params(C), lambda, w0, p);
  ASSERT_TRUE(v.ok());
  EXPECT_NEAR(*v, expected, 1e-12);
}

TEST(JointObjectiveTest, RejectsSizeMismatch) {
  Dataset data;
  data.dim = 1;
  data.samples = {S({1}, 0), S({1}, 0)};
  JointPoint p{V({0}), {V({0})}};
  EXPECT_FALSE(JointObjective(LossModel(LossKind::kHinge), data, Params(1.0),
                              0.0, V({0}), p)
                   .ok());
  EXPECT_FALSE(JointSubgradient(LossModel(LossKind::kHinge), data, Params(1.0),
                                0.0, V({0}), p)
                   .ok());
}

TEST(JointSubgradientTest, ZeroWhenBlocksCoincideAtFlatPoint) {
  Dataset data;
  data.dim = 1;
  data.samples = {S({1}, -5), S({2}, -5)};
  JointPoint p{V({0.5}), {V({0.5}), V({0.5})}};
  auto g = JointSubgradient(LossModel(LossKind::kHinge), data, Params(1.0),
                            0.0, V({0}), p);
  ASSERT_TRUE(g.ok());
  EXPECT_EQ(g->w.norm(), 0.0);
  EXPECT_EQ(g->ys[0].norm() + g->ys[1].norm(), 0.0);
}

TEST(JointSubgradientTest, ActiveHingeBlocks) {
  Dataset data;
  data.dim = 2;
  data.samples = {S({1, 0}, 0.1)};
  JointPoint p{V({1, 0}), {V({0, 0})}};
  auto g = JointSubgradient(LossModel(LossKind::kHinge), data, Params(2.0),
                            0.0, V({0, 0}), p);
  ASSERT_TRUE(g.ok());
  EXPECT_LE((g->w - V({2, 0})).norm(), 1e-15);
  EXPECT_LE((g->ys[0] - V({-1, 0})).norm(), 1e-15);
}

TEST(JointSubgradientTest, HingeAtKinkUsesZeroLossSubgradient) {
  Dataset data;
  data.dim = 2;
  data.samples = {S({1, 0}, 0.0)};
  JointPoint p{V({1, 0}), {V({0, 0})}};
  auto g = JointSubgradient(LossModel(LossKind::kHinge), data, Params(2.0),
                            0.0, V({0, 0}), p);
  ASSERT_TRUE(g.ok());
  EXPECT_LE((g->w - V({2, 0})).norm(), 1e-15);
  EXPECT_LE((g->ys[0] - V({-2, 0})).norm(), 1e-15);
}

TEST(JointSubgradientTest, MatchesCentralDifferences) {
  Rng rng(21);
  std::normal_distribution<double> N;
  for (LossKind kind :
       {LossKind::kLinear, LossKind::kHinge, LossKind::kAbsolute}) {
    const LossModel model(kind);
    for (int trial = 0; trial < 50; ++trial) {
      const int d = 1 + trial % 2;
      const int m = 1 + trial % 3;
      Dataset data;
      data.dim = d;
      JointPoint p;
      p.w = Vector(d);
      for (int k = 0; k < d; ++k) p.w[k] = N(rng);
      for (int i = 0; i < m; ++i) {
        Sample z;
        z.a = Vector(d);
        Vector y(d);
        for (int k = 0; k < d; ++k) {
          z.a[k] = N(rng);
          y[k] = N(rng);
        }
        z.b = N(rng);
        data.samples.push_back(z);
        p.ys.push_back(y);
      }
      Vector w0(d);
      for (int k = 0; k < d; ++k) w0[k] = N(rng);
      const double C = 0.5 + std::fabs(N(rng));
      const double lambda = std::fabs(N(rng));
      auto g = JointSubgradient(model, data, Params(C), lambda, w0, p);
      ASSERT_TRUE(g.ok());
      const Vector flat = FlattenJoint(p);
      const Vector gflat = FlattenJoint(*g);
      Vector dir(flat.size());
      for (int k = 0; k < dir.size(); ++k) dir[k] = N(rng);
      constexpr double h = 1e-6;
      const auto at = [&](const Vector& x) {
        return *JointObjective(model, data, Params(C), lambda, w0,
                               UnflattenJoint(x, d, m));
      };
      const double fd = (at(flat + h * dir) - at(flat - h * dir)) / (2 * h);
      EXPECT_NEAR(fd, gflat.dot(dir), 1e-5);
    }
  }
}

TEST(JointProblemTest, FlatInterfaceAgreesWithStructured) {
  Dataset data;
  data.dim = 1;
  data.samples = {S({2}, 0.3), S({-1}, 0.2)};
  const LossModel model(LossKind::kAbsolute);
  auto problem = JointProblem::Create(model, &data, Params(0.8), 0.5, V({0.1}));
  ASSERT_TRUE(problem.ok());
  EXPECT_EQ(problem->flat_dimension(), 3);
  const Vector flat = V({0.4, -0.3, 0.9});
  EXPECT_NEAR(problem->Value(flat),
              *JointObjective(model, data, Params(0.8), 0.5, V({0.1}),
                              UnflattenJoint(flat, 1, 2)),
              1e-15);
  Vector grad;
  problem->Subgradient(flat, grad);
  const Vector expected = FlattenJoint(*JointSubgradient(
      model, data, Params(0.8), 0.5, V({0.1}), UnflattenJoint(flat, 1, 2)));
  EXPECT_LE((grad - expected).norm(), 1e-15);
  EXPECT_EQ(problem->InitialPoint(), V({0.1, 0.1, 0.1}));
}

TEST(ExtensionValueTest, AbsoluteAndHingeExamples) {
  const ConvexDomain W = Interval(-1, 1);
  constexpr double kAlpha = 1e-3;
  const auto grid_fc = [](oracle::Family f) {
    return oracle::GridMinimize1D(
               [&](double y) {
                 return oracle::Loss1D(f, 1, 0, y) + 0.5 * std::fabs(0.8 - y);
               },
               -1, 1, 1000000)
        .value;
  };
  auto abs_v = ExtensionValueApprox(LossModel(LossKind::kAbsolute), S({1}, 0),
                                    V({0.8}), W, Params(0.5), kAlpha);
  ASSERT_TRUE(abs_v.ok());
  EXPECT_NEAR(grid_fc(oracle::Family::kAbsolute), 0.4, 1e-9);
  EXPECT_GE(abs_v->value, 0.4 - 1e-12);
  EXPECT_LE(abs_v->value, 0.4 + kAlpha);
  auto hinge_v = ExtensionValueApprox(LossModel(LossKind::kHinge), S({1}, 0),
                                      V({0.8}), W, Params(0.5), kAlpha);
  ASSERT_TRUE(hinge_v.ok());
  EXPECT_NEAR(grid_fc(oracle::Family::kHinge), 0.4, 1e-9);
  EXPECT_GE(hinge_v->value, 0.4 - 1e-12);
  EXPECT_LE(hinge_v->value, 0.4 + kAlpha);
}

TEST(ExtensionValueTest, LipschitzLossIsItsOwnExtension) {
  const ConvexDomain W = Interval(-2, 2);
  Rng rng(6);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int i = 0; i < 50; ++i) {
    const Sample z = S({U(rng)}, U(rng));
    const double C = std::fabs(z.a[0]) + 0.1;
    const Vector w = V({U(rng)});
    for (LossKind kind :
         {LossKind::kLinear, LossKind::kHinge, LossKind::kAbsolute}) {
      const LossModel model(kind);
      auto v = ExtensionValueApprox(model, z, w, W, Params(C), 1e-3);
      ASSERT_TRUE(v.ok());
      EXPECT_NEAR(v->value, model.Value(w, z), 1e-3);
    }
  }
}

TEST(ExtensionValueTest, WithinAlphaOfExactOracle) {
  Rng rng(14);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int i = 0; i < 60; ++i) {
    const LossKind kind = static_cast<LossKind>(i % 3);
    const Sample z = S({3 * U(rng)}, U(rng));
    const double C = 0.2 + std::fabs(U(rng));
    const double w = U(rng);
    const double alpha = 0.01;
    auto v = ExtensionValueApprox(LossModel(kind), z, V({w}), Interval(-1, 1),
                                  Params(C), alpha);
    ASSERT_TRUE(v.ok());
    const double exact =
        oracle::ExactExtension1D(FamilyOf(kind), z.a[0], z.b, C, -1, 1, w);
    EXPECT_GE(v->value, exact - 1e-12);
    EXPECT_LE(v->value, exact + alpha);
    EXPECT_LE(std::fabs(v->minimizer[0]), 1.0 + 1e-12);
  }
}

TEST(ExtensionValueTest, RejectsNonPositiveAccuracy) {
  EXPECT_FALSE(ExtensionValueApprox(LossModel(LossKind::kHinge), S({1}, 0),
                                    V({0}), Interval(-1, 1), Params(1), 0.0)
                   .ok());
}

TEST(ExtensionSubgradientTest, AbsoluteExampleAndApproximateInequality) {
  const ConvexDomain W = Interval(-1, 1);
  const double B = 1e-3;
  const Sample z = S({1}, 0);
  auto g = ExtensionSubgradientApprox(LossModel(LossKind::kAbsolute), z,
                                      V({0.8}), W, Params(0.5), B);
  ASSERT_TRUE(g.ok());
  EXPECT_NEAR((*g)[0], 0.5, 1e-9);
  const double fw = oracle::ExactExtension1D(oracle::Family::kAbsolute, 1, 0,
                                             0.5, -1, 1, 0.8);
  for (int i = 0; i <= 1000; ++i) {
    const double u = -1.0 + 2.0 * i / 1000;
    const double fu = oracle::ExactExtension1D(oracle::Family::kAbsolute, 1, 0,
                                               0.5, -1, 1, u);
    EXPECT_GE(fu, fw + (*g)[0] * (u - 0.8) - B);
  }
}

TEST(ExtensionSubgradientTest, FlatMinimizerGivesZero) {
  auto g = ExtensionSubgradientApprox(LossModel(LossKind::kHinge), S({1}, -0.5),
                                      V({0.2}), Interval(-1, 1), Params(10.0),
                                      1e-3);
  ASSERT_TRUE(g.ok());
  EXPECT_EQ((*g)[0], 0.0);
}

TEST(ExtensionSubgradientTest, NormBoundedAndApproximatelyValid) {
  Rng rng(31);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int i = 0; i < 120; ++i) {
    const LossKind kind = static_cast<LossKind>(i % 3);
    const Sample z = S({4 * U(rng)}, U(rng));
    const double C = 0.1 + 2 * std::fabs(U(rng));
    const double w = U(rng);
    const double B = 0.05;
    auto g = ExtensionSubgradientApprox(LossModel(kind), z, V({w}),
                                        Interval(-1, 1), Params(C), B);
    ASSERT_TRUE(g.ok());
    EXPECT_LE(g->norm(), C * (1 + 1e-12));
    if (i % 4 == 0) {
      const double fw =
          oracle::ExactExtension1D(FamilyOf(kind), z.a[0], z.b, C, -1, 1, w);
      for (int k = 0; k <= 100; ++k) {
        const double u = -1.0 + 2.0 * k / 100;
        const double fu =
            oracle::ExactExtension1D(FamilyOf(kind), z.a[0], z.b, C, -1, 1, u);
        EXPECT_GE(fu, fw + (*g)[0] * (u - w) - B - 1e-12);
      }
    }
  }
}

TEST(ExtensionBiasTest, FormulaExamples) {
  Dataset data;
  data.dim = 1;
  data.samples = {S({0.5}, 0), S({-1}, 0)};
  EXPECT_EQ(ExtensionBiasDiag(data, LossModel(LossKind::kHinge), 2.0,
                              Params(1.0)),
            0.0);
  data.samples = {S({3}, 0), S({1}, 0)};
  EXPECT_DOUBLE_EQ(
      ExtensionBiasDiag(data, LossModel(LossKind::kHinge), 1.0, Params(2.0)),
      0.5);
}

TEST(ExtensionBiasTest, BoundsEmpiricalGap) {
  Rng rng(2);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const LossKind kind = static_cast<LossKind>(trial % 3);
    Dataset data;
    data.dim = 1;
    for (int i = 0; i < 5; ++i) data.samples.push_back(S({4 * U(rng)}, U(rng)));
    const double C = 1.0;
    const double diag = ExtensionBiasDiag(data, LossModel(kind), 2.0, Params(C));
    double worst = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      const double w = -1.0 + 2.0 * k / 1000;
      double gap = 0.0;
      for (const Sample& z : data.samples) {
        gap += LossModel(kind).Value(V({w}), z) -
               oracle::ExactExtension1D(FamilyOf(kind), z.a[0], z.b, C, -1, 1,
                                        w);
      }
      worst = std::max(worst, gap / data.size());
    }
    EXPECT_LE(worst, diag + 1e-12);
  }
}

TEST(JointReformulationTest, OptimaCoincideOnGrid) {
  Rng rng(8);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 5; ++trial) {
    const oracle::Family f = static_cast<oracle::Family>(trial % 3);
    std::vector<oracle::Sample1D> data;
    for (int i = 0; i < 1 + trial % 3; ++i) data.push_back({3 * U(rng), U(rng)});
    const double C = 0.8, lambda = 0.5, w0 = U(rng);
    constexpr int kN = 400;
    const oracle::GridMin joint =
        oracle::JointGridMinimum1D(f, data, C, lambda, w0, -1, 1, kN);
    const oracle::GridMin direct = oracle::GridMinimize1D(
        [&](double w) {
          return oracle::RegularizedExtensionObjective1D(f, data, C, lambda,
                                                         w0, -1, 1, w);
        },
        -1, 1, kN);
    const double L = 3 * 1.0 + C + lambda * 2;
    EXPECT_NEAR(joint.value, direct.value, 2 * (2.0 / kN) * L);
  }
}

}  // namespace
}  // namespace htdp
