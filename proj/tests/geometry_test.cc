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

#include "htdp/geometry.h"

#include <cmath>
#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracles.h"

namespace htdp {
namespace {

using ::testing::DoubleNear;

Vector V(std::initializer_list<double> xs) {
  Vector v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

void ExpectNear(const Vector& a, const Vector& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  EXPECT_LE((a - b).norm(), tol) << "a=" << a.transpose()
                                  << " b=" << b.transpose();
}

TEST(ConvexDomainTest, BallProjectsRadially) {
  auto ball = ConvexDomain::Ball(Vector::Zero(2), 1.0);
  ASSERT_TRUE(ball.ok());
  ExpectNear(ball->Project(V({2, 0})), V({1, 0}), 1e-15);
  ExpectNear(ball->Project(V({0.3, 0.4})), V({0.3, 0.4}), 0.0);
  EXPECT_DOUBLE_EQ(ball->diameter_bound(), 2.0);
}

TEST(ConvexDomainTest, BoxClampsCoordinates) {
  auto box = ConvexDomain::Box(V({0, 0}), V({1, 1}));
  ASSERT_TRUE(box.ok());
  ExpectNear(box->Project(V({-1, 2})), V({0, 1}), 0.0);
  EXPECT_DOUBLE_EQ(box->diameter_bound(), std::sqrt(2.0));
}

TEST(ConvexDomainTest, ProductProjectsBlockwise) {
  auto ball = ConvexDomain::Ball(Vector::Zero(2), 1.0);
  auto box = ConvexDomain::Box(V({0}), V({1}));
  ASSERT_TRUE(ball.ok() && box.ok());
  auto prod = ConvexDomain::Product({*ball, *box});
  ASSERT_TRUE(prod.ok());
  EXPECT_EQ(prod->dimension(), 3);
  ExpectNear(prod->Project(V({3, 4, 7})), V({0.6, 0.8, 1}), 1e-15);
  EXPECT_DOUBLE_EQ(prod->diameter_bound(), std::sqrt(4.0 + 1.0));
}

TEST(ConvexDomainTest, RejectsInvalidConstruction) {
  EXPECT_FALSE(ConvexDomain::Ball(Vector::Zero(2), 0.0).ok());
  EXPECT_FALSE(ConvexDomain::Ball(Vector::Zero(2), -1.0).ok());
  EXPECT_FALSE(ConvexDomain::Box(V({1, 0}), V({0, 1})).ok());
  EXPECT_FALSE(ConvexDomain::Box(V({0}), V({1, 1})).ok());
  EXPECT_FALSE(ConvexDomain::Product({}).ok());
}

TEST(ConvexDomainTest, CheckedProjectionRejectsBadInput) {
  auto ball = ConvexDomain::Ball(Vector::Zero(2), 1.0);
  ASSERT_TRUE(ball.ok());
  EXPECT_FALSE(ProjectExact(*ball, V({1, 2, 3})).ok());
  EXPECT_FALSE(ProjectExact(*ball, V({NAN, 0})).ok());
  EXPECT_TRUE(ProjectExact(*ball, V({1, 2})).ok());
}

TEST(ConvexDomainTest, ProjectionInvariantsOnRandomPoints) {
  Rng rng(11);
  std::normal_distribution<double> normal(0.0, 2.0);
  auto ball = ConvexDomain::Ball(V({0.5, -0.2, 0.1}), 1.3);
  auto box = ConvexDomain::Box(V({-1, 0, -2}), V({1, 0.5, 0}));
  ASSERT_TRUE(ball.ok() && box.ok());
  auto prod = ConvexDomain::Product({*ball, *box});
  ASSERT_TRUE(prod.ok());
  for (const ConvexDomain* dom : {&*ball, &*box, &*prod}) {
    const int d = dom->dimension();
    for (int i = 0; i < 500; ++i) {
      Vector y(d), yp(d);
      for (int k = 0; k < d; ++k) {
        y[k] = normal(rng);
        yp[k] = normal(rng);
      }
      const Vector p = dom->Project(y);
      const Vector pp = dom->Project(yp);
      EXPECT_TRUE(dom->Contains(p));
      EXPECT_LE((dom->Project(p) - p).norm(), 1e-12);
      EXPECT_LE((p - pp).norm(), (y - yp).norm() + 1e-12);
    }
  }
  // Closed-form references.
  for (int i = 0; i < 200; ++i) {
    Vector y(3);
    for (int k = 0; k < 3; ++k) y[k] = normal(rng);
    ExpectNear(ball->Project(y),
               oracle::ProjectBall(ball->center(), ball->radius(), y), 1e-12);
    ExpectNear(box->Project(y),
               oracle::ProjectBox(box->lower(), box->upper(), y), 0.0);
  }
}

TEST(ConvexDomainTest, DiameterBoundDominatesSampledDistances) {
  Rng rng(5);
  std::normal_distribution<double> normal(0.0, 3.0);
  auto box = ConvexDomain::Box(V({-1, 0}), V({2, 0.5}));
  ASSERT_TRUE(box.ok());
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const Vector a = box->Project(V({normal(rng), normal(rng)}));
    const Vector b = box->Project(V({normal(rng), normal(rng)}));
    worst = std::max(worst, (a - b).norm());
  }
  EXPECT_LE(worst, box->diameter_bound() + 1e-12);
}

TEST(LocalizedDomainTest, RejectsBadRadiusAndCenter) {
  auto ball = ConvexDomain::Ball(Vector::Zero(1), 1.0);
  ASSERT_TRUE(ball.ok());
  EXPECT_FALSE(LocalizedDomain::Create(*ball, V({0}), 0.0).ok());
  EXPECT_FALSE(LocalizedDomain::Create(*ball, V({0}), -1.0).ok());
  EXPECT_FALSE(LocalizedDomain::Create(*ball, V({2}), 0.5).ok());
  EXPECT_TRUE(LocalizedDomain::Create(*ball, V({1}), 0.5).ok());
}

TEST(LocalizedDomainTest, DiameterBoundIsMinimum) {
  auto ball = ConvexDomain::Ball(Vector::Zero(2), 1.0);
  ASSERT_TRUE(ball.ok());
  auto small = LocalizedDomain::Create(*ball, Vector::Zero(2), 0.25);
  auto large = LocalizedDomain::Create(*ball, Vector::Zero(2), 5.0);
  ASSERT_TRUE(small.ok() && large.ok());
  EXPECT_DOUBLE_EQ(small->diameter_bound(), 0.5);
  EXPECT_DOUBLE_EQ(large->diameter_bound(), 2.0);
}

TEST(LocalizedDomainTest, BallIntersectionIsRadial) {
  auto ball = ConvexDomain::Ball(Vector::Zero(2), 1.0);
  auto loc = LocalizedDomain::Create(*ball, Vector::Zero(2), 0.5);
  ASSERT_TRUE(loc.ok());
  auto x = InexactProjectLocalized(*loc, V({2, 0}), 1e-6);
  ASSERT_TRUE(x.ok());
  ExpectNear(*x, V({0.5, 0}), 1e-6);
}

TEST(LocalizedDomainTest, InteriorPointIsFixed) {
  auto box = ConvexDomain::Box(V({-1, -1}), V({1, 1}));
  auto loc = LocalizedDomain::Create(*box, Vector::Zero(2), 0.5);
  ASSERT_TRUE(loc.ok());
  LocalizedDomain::ProjectionStats stats;
  const Vector x = loc->InexactProject(V({0.1, 0.1}), 1e-6, &stats);
  ExpectNear(x, V({0.1, 0.1}), 0.0);
  EXPECT_EQ(stats.bisection_steps, 0);
  EXPECT_EQ(stats.base_projections, 1);
}

TEST(LocalizedDomainTest, BoxCornerMatchesSweepOracle) {
  auto box = ConvexDomain::Box(V({0, 0}), V({2, 2}));
  auto loc = LocalizedDomain::Create(*box, V({1, 1}), 0.5);
  ASSERT_TRUE(loc.ok());
  const Vector y = V({3, 1});
  auto x = InexactProjectLocalized(*loc, y, 1e-4);
  ASSERT_TRUE(x.ok());
  const Vector ref = oracle::SweepLocalizedProjection(
      [&](const Vector& v) {
        return oracle::ProjectBox(V({0, 0}), V({2, 2}), v);
      },
      V({1, 1}), 0.5, y, (y - V({1, 1})).norm() / 0.5, 1000000);
  ExpectNear(*x, ref, 1e-4);
  ExpectNear(*x, V({1.5, 1}), 1e-4);
}

TEST(LocalizedDomainTest, InvalidAccuracyRejected) {
  auto ball = ConvexDomain::Ball(Vector::Zero(1), 1.0);
  auto loc = LocalizedDomain::Create(*ball, Vector::Zero(1), 0.5);
  ASSERT_TRUE(loc.ok());
  EXPECT_FALSE(InexactProjectLocalized(*loc, V({2}), 0.0).ok());
  EXPECT_FALSE(InexactProjectLocalized(*loc, V({2, 1}), 1e-3).ok());
}

TEST(LocalizedDomainTest, RandomDomainsWithinXiOfSweep) {
  Rng rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + trial % 2;
    Vector lo(d), hi(d), y(d), c(d);
    for (int k = 0; k < d; ++k) {
      lo[k] = -1.0 - U(rng);
      hi[k] = 1.0 + U(rng);
      y[k] = 8.0 * U(rng) - 4.0;
      c[k] = lo[k] + (hi[k] - lo[k]) * U(rng);
    }
    const double r = 0.1 + 0.8 * U(rng);
    const double xi = std::pow(10.0, -1.0 - 3.0 * U(rng));
    auto box = ConvexDomain::Box(lo, hi);
    auto loc = LocalizedDomain::Create(*box, c, r);
    ASSERT_TRUE(loc.ok());
    LocalizedDomain::ProjectionStats stats;
    const Vector x = loc->InexactProject(y, xi, &stats);
    const double dist = (y - c).norm();
    const Vector ref = oracle::SweepLocalizedProjection(
        [&](const Vector& v) { return oracle::ProjectBox(lo, hi, v); }, c, r,
        y, dist / r, 200000);
    ASSERT_GT(ref.size(), 0);
    // The sweep resolution adds at most (λ̄/N)·dist.
    EXPECT_LE((x - ref).norm(), xi + dist * dist / r / 200000 + 1e-12);
    EXPECT_TRUE(box->Contains(x));
    EXPECT_LE((x - c).norm(), r + kMembershipTolerance);
    const int bound =
        static_cast<int>(std::ceil(std::log2(1.0 + dist * dist / (r * xi))));
    EXPECT_LE(stats.bisection_steps, bound);
    EXPECT_EQ(LocalizedDomain::BisectionSteps(dist, r, xi), bound);
  }
}

TEST(ReplicatedProductSetTest, ProjectsHeadInexactlyAndTailsExactly) {
  auto ball = ConvexDomain::Ball(Vector::Zero(1), 1.0);
  auto loc = LocalizedDomain::Create(*ball, V({0.5}), 0.25);
  ASSERT_TRUE(loc.ok());
  ReplicatedProductSet set(*loc, *ball, 2);
  EXPECT_EQ(set.dimension(), 3);
  EXPECT_EQ(set.copies(), 2);
  EXPECT_DOUBLE_EQ(set.diameter_bound(), std::sqrt(0.25 + 2 * 4.0));
  const Vector x = set.Project(V({-3, 5, -0.5}), 1e-9);
  EXPECT_THAT(x[0], DoubleNear(0.25, 1e-9));
  EXPECT_DOUBLE_EQ(x[1], 1.0);
  EXPECT_DOUBLE_EQ(x[2], -0.5);
  Vector inplace = V({-3, 5, -0.5});
  set.ProjectInPlace(inplace, 1e-9);
  ExpectNear(inplace, x, 1e-9);
}

}  // namespace
}  // namespace htdp
