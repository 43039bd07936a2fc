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

#include <cmath>
#include <random>
#include <sstream>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "htdp/extension.h"
#include "htdp/geometry.h"
#include "htdp/losses.h"
#include "oracles.h"

namespace htdp {
namespace {

Vector V(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

FirstOrderOracle AbsOracle() {
  FirstOrderOracle o;
  o.eval = [](const Vector& x, Vector& g, double* value) {
    g = Vector::Zero(x.size());
    g[0] = (x[0] > 0) - (x[0] < 0);
    if (value != nullptr) *value = std::fabs(x[0]);
    return absl::OkStatus();
  };
  o.declared_norm_bound = 1.0;
  return o;
}

FirstOrderOracle PiecewiseOracle(const oracle::PiecewiseLinear& f) {
  FirstOrderOracle o;
  o.eval = [f](const Vector& x, Vector& g, double* value) {
    g = f.Subgradient(x);
    if (value != nullptr) *value = f.Value(x);
    return absl::OkStatus();
  };
  o.declared_norm_bound = f.Lipschitz();
  return o;
}

oracle::PiecewiseLinear RandomPieces(Rng& rng, int pieces) {
  std::normal_distribution<double> N;
  oracle::PiecewiseLinear f;
  for (int j = 0; j < pieces; ++j) {
    f.slopes.push_back(V({N(rng), N(rng)}));
    f.offsets.push_back(0.3 * N(rng));
  }
  return f;
}

TEST(SubgradTest, StopReasonNames) {
  EXPECT_EQ(StopReasonName(StopReason::kZeroGradient), "zero_gradient");
  EXPECT_EQ(StopReasonName(StopReason::kCertified), "certified");
  EXPECT_EQ(StopReasonName(StopReason::kIterationCap), "iteration_cap");
}

TEST(AdaptiveTest, ZeroGradientReturnsStart) {
  const ConvexDomain W = *ConvexDomain::Ball(V({0, 0}), 1.0);
  FirstOrderOracle o;
  o.eval = [](const Vector& x, Vector& g, double*) {
    g = Vector::Zero(x.size());
    return absl::OkStatus();
  };
  auto r = AdaptiveProjSubgrad(W, o, V({0.3, -0.2}), 0.1, 2.0);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->point, V({0.3, -0.2}));
  EXPECT_EQ(r->certificate.stop_reason, StopReason::kZeroGradient);
  EXPECT_EQ(r->certificate.iterations, 1);
  EXPECT_TRUE(r->certificate.certified());
}

TEST(AdaptiveTest, AbsoluteValueOnInterval) {
  const ConvexDomain W = *ConvexDomain::Box(V({-1}), V({1}));
  auto r = AdaptiveProjSubgrad(W, AbsOracle(), V({1}), 0.1, 2.0);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->certificate.stop_reason, StopReason::kCertified);
  EXPECT_LE(std::fabs(r->point[0]), 0.1);
}

TEST(AdaptiveTest, RejectsBadArguments) {
  const ConvexDomain W = *ConvexDomain::Box(V({-1}), V({1}));
  EXPECT_FALSE(AdaptiveProjSubgrad(W, AbsOracle(), V({1}), 0.0, 2.0).ok());
  EXPECT_FALSE(AdaptiveProjSubgrad(W, AbsOracle(), V({1}), 0.1, 0.0).ok());
  EXPECT_FALSE(AdaptiveProjSubgrad(W, AbsOracle(), V({1, 0}), 0.1, 2.0).ok());
}

TEST(AdaptiveTest, PropagatesOracleErrors) {
  const ConvexDomain W = *ConvexDomain::Box(V({-1}), V({1}));
  FirstOrderOracle o;
  o.eval = [](const Vector&, Vector&, double*) {
    return absl::InternalError("boom");
  };
  auto r = AdaptiveProjSubgrad(W, o, V({0}), 0.1, 2.0);
  EXPECT_EQ(r.status().code(), absl::StatusCode::kInternal);
}

TEST(AdaptiveTest, PiecewiseLinearAgainstDenseGrid) {
  Rng rng(77);
  const oracle::PiecewiseLinear f = RandomPieces(rng, 5);
  const ConvexDomain W = *ConvexDomain::Ball(V({0, 0}), 1.0);
  constexpr double kAlpha = 0.05;
  constexpr double kD = 2.0;
  auto r = AdaptiveProjSubgrad(W, PiecewiseOracle(f), V({0.5, 0.5}), kAlpha,
                               kD);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->certificate.stop_reason, StopReason::kCertified);
  constexpr int kN = 2000;
  const double best = oracle::GridMinimizeDisk2D(
      [&](const Vector& x) { return f.Value(x); }, 1.0, kN);
  const double grid_slack = f.Lipschitz() * (2.0 / kN) * std::sqrt(2.0);
  EXPECT_LE(f.Value(r->point) - best, kAlpha + grid_slack);
  EXPECT_LE(r->point.norm(), 1.0 + 1e-12);
  const double L = f.Lipschitz();
  const double bound = std::ceil(std::pow(3 * kD * L / kAlpha, 2));
  EXPECT_LE(r->certificate.iterations, bound);
}

TEST(AdaptiveTest, AccuracyOnRandomPiecewiseInstances) {
  Rng rng(5);
  constexpr double kAlpha = 0.05;
  constexpr int kN = 400;
  for (int trial = 0; trial < 50; ++trial) {
    const oracle::PiecewiseLinear f = RandomPieces(rng, 2 + trial % 5);
    const ConvexDomain W = *ConvexDomain::Ball(V({0, 0}), 1.0);
    auto r = AdaptiveProjSubgrad(W, PiecewiseOracle(f), V({0, 0}), kAlpha, 2.0);
    ASSERT_TRUE(r.ok());
    ASSERT_TRUE(r->certificate.certified());
    const double best = oracle::GridMinimizeDisk2D(
        [&](const Vector& x) { return f.Value(x); }, 1.0, kN);
    const double grid_slack = f.Lipschitz() * (2.0 / kN) * std::sqrt(2.0);
    EXPECT_LE(f.Value(r->point) - best, kAlpha + grid_slack) << trial;
  }
}

TEST(AdaptiveTest, CertificateSoundFromTrace) {
  Rng rng(12);
  const oracle::PiecewiseLinear f = RandomPieces(rng, 4);
  const ConvexDomain W = *ConvexDomain::Ball(V({0, 0}), 1.0);
  std::vector<TraceRow> trace;
  SolverOptions opts;
  opts.trace = &trace;
  constexpr double kAlpha = 0.1;
  constexpr double kD = 2.0;
  auto r = AdaptiveProjSubgrad(W, PiecewiseOracle(f), V({1, 0}), kAlpha, kD,
                               opts);
  ASSERT_TRUE(r.ok());
  ASSERT_EQ(r->certificate.stop_reason, StopReason::kCertified);
  ASSERT_EQ(static_cast<int64_t>(trace.size()), r->certificate.iterations);
  double S = 0.0;
  for (const TraceRow& row : trace) {
    S += row.grad_norm * row.grad_norm;
    EXPECT_NEAR(row.cumulative_sq_grad, S, 1e-9 * S);
    EXPECT_TRUE(row.objective.has_value());
    EXPECT_GE(row.xi, 0.0);
    EXPECT_LE(row.xi, kD);
  }
  const TraceRow& last = trace.back();
  EXPECT_LE(3 * kD * std::sqrt(last.cumulative_sq_grad),
            kAlpha * static_cast<double>(last.t));
  for (size_t i = 0; i + 1 < trace.size(); ++i) {
    const double t = static_cast<double>(trace[i].t);
    EXPECT_GT(3 * kD * std::sqrt(trace[i].cumulative_sq_grad), kAlpha * t);
  }

  std::ostringstream csv;
  WriteTraceCsv(trace, csv);
  EXPECT_THAT(csv.str(), ::testing::StartsWith("t,"));
}

TEST(AdaptiveTest, IterationCapReturnsUncertified) {
  const ConvexDomain W = *ConvexDomain::Box(V({-1}), V({1}));
  SolverOptions opts;
  opts.max_iterations = 5;
  auto r = AdaptiveProjSubgrad(W, AbsOracle(), V({1}), 1e-4, 2.0, opts);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->certificate.stop_reason, StopReason::kIterationCap);
  EXPECT_FALSE(r->certificate.certified());
  EXPECT_LE(r->certificate.iterations, 6);
  EXPECT_LE(std::fabs(r->point[0]), 1.0);
}

TEST(AdaptiveTest, LocalizedDomainKeepsIteratesFeasible) {
  const ConvexDomain base = *ConvexDomain::Ball(V({0, 0}), 1.0);
  const LocalizedDomain W =
      *LocalizedDomain::Create(base, V({0.9, 0}), 0.5);
  FirstOrderOracle o;
  o.eval = [](const Vector& x, Vector& g, double* value) {
    const Vector target = V({-1, 0});
    g = x - target;
    if (value != nullptr) *value = 0.5 * (x - target).squaredNorm();
    return absl::OkStatus();
  };
  auto r = AdaptiveProjSubgrad(W, o, V({0.9, 0}), 0.01, 1.0);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(W.Contains(r->point, 1e-9));
  EXPECT_NEAR(r->point[0], 0.4, 0.15);
}

TEST(BiasedPsgTest, StepCount) {
  EXPECT_EQ(BiasedPsgSteps(0.1, 2.0, 1.0), 6400);
  EXPECT_EQ(BiasedPsgSteps(1.0, 1.0, 0.25), 1);
  EXPECT_EQ(BiasedPsgSteps(0.3, 1.0, 1.0), 178);
}

TEST(BiasedPsgTest, AbsoluteValueRunsExactSchedule) {
  const ConvexDomain W = *ConvexDomain::Box(V({-1}), V({1}));
  auto r = BiasedPsg(W, AbsOracle(), V({1}), 0.1, 2.0);
  ASSERT_TRUE(r.ok());
  EXPECT_LE(std::fabs(r->point[0]), 0.1);
  EXPECT_EQ(r->certificate.iterations, BiasedPsgSteps(0.1, 2.0, 1.0));
  EXPECT_EQ(r->certificate.stop_reason, StopReason::kFixedSchedule);
  EXPECT_TRUE(r->certificate.certified());
}

TEST(BiasedPsgTest, RejectsLargeBiasAndMissingBound) {
  const ConvexDomain W = *ConvexDomain::Box(V({-1}), V({1}));
  FirstOrderOracle o = AbsOracle();
  o.declared_bias = 0.026;
  EXPECT_EQ(BiasedPsg(W, o, V({1}), 0.1, 2.0).status().code(),
            absl::StatusCode::kInvalidArgument);
  o.declared_bias = 0.025;
  EXPECT_TRUE(BiasedPsg(W, o, V({1}), 0.1, 2.0).ok());
  o.declared_norm_bound.reset();
  EXPECT_FALSE(BiasedPsg(W, o, V({1}), 0.1, 2.0).ok());
}

TEST(BiasedPsgTest, StrongConvexityDistance) {
  const ConvexDomain W = *ConvexDomain::Ball(V({0, 0}), 1.0);
  const Vector w0 = V({0.3, -0.4});
  constexpr double kLambda = 1.0;
  FirstOrderOracle o;
  o.eval = [&](const Vector& x, Vector& g, double* value) {
    g = kLambda * (x - w0);
    if (value != nullptr) *value = 0.5 * kLambda * (x - w0).squaredNorm();
    return absl::OkStatus();
  };
  o.declared_norm_bound = kLambda * 2.0;
  for (double alpha : {0.2, 0.05}) {
    auto r = BiasedPsg(W, o, V({-1, 0}), alpha, 2.0);
    ASSERT_TRUE(r.ok());
    EXPECT_LE((r->point - w0).norm(), std::sqrt(2 * alpha / kLambda));
  }
}

TEST(BiasedPsgTest, AgreesWithAdaptiveJointRoute) {
  Rng rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  const LossModel model(LossKind::kHinge);
  Dataset data;
  data.dim = 1;
  std::vector<oracle::Sample1D> data1d;
  for (int i = 0; i < 3; ++i) {
    Sample z;
    z.a = V({3 * U(rng)});
    z.b = U(rng);
    data.samples.push_back(z);
    data1d.push_back({z.a[0], z.b});
  }
  const double C = 1.0, lambda = 0.5, w0 = 0.2, alpha = 0.1;
  const ConvexDomain W = *ConvexDomain::Box(V({-1}), V({1}));
  const ExtensionParams params = *ExtensionParams::Create(C);
  const auto F = [&](double w) {
    return oracle::RegularizedExtensionObjective1D(
        oracle::Family::kHinge, data1d, C, lambda, w0, -1, 1, w);
  };

  FirstOrderOracle biased;
  biased.declared_bias = alpha / 4;
  biased.declared_norm_bound = C + lambda * 2.0;
  biased.eval = [&](const Vector& x, Vector& g, double*) {
    g = lambda * (x - V({w0}));
    for (const Sample& z : data.samples) {
      auto gi = ExtensionSubgradientApprox(model, z, x, W, params, alpha / 4);
      if (!gi.ok()) return gi.status();
      g += *gi / 3.0;
    }
    return absl::OkStatus();
  };
  auto rb = BiasedPsg(W, biased, V({w0}), alpha, 2.0);
  ASSERT_TRUE(rb.ok());

  auto problem = JointProblem::Create(model, &data, params, lambda, V({w0}));
  ASSERT_TRUE(problem.ok());
  const ReplicatedProductSet joint_domain(W, W, 3);
  auto ra = AdaptiveProjSubgrad(joint_domain, problem->Oracle(),
                                problem->InitialPoint(), alpha,
                                joint_domain.diameter_bound());
  ASSERT_TRUE(ra.ok());
  ASSERT_TRUE(ra->certificate.certified());

  const double fb = F(rb->point[0]);
  const double fa = F(ra->point[0]);
  EXPECT_LE(std::fabs(fa - fb), 2 * alpha);
  const double best = oracle::GridMinimize1D(F, -1, 1, 20000).value;
  EXPECT_LE(fb - best, alpha + 1e-3);
  EXPECT_LE(fa - best, alpha + 1e-3);
}

}  // namespace
}  // namespace htdp
