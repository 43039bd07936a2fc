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

// Convex feasible sets: projection-friendly base domains (balls, boxes and
// their products), the localized set W ∩ B(center, r) with a bisection-based
// inexact projection, and block products used by the joint reformulation.

#ifndef HTDP_GEOMETRY_H_
#define HTDP_GEOMETRY_H_

#include <utility>
#include <variant>
#include <vector>

#include "absl/status/statusor.h"
#include "htdp/types.h"

namespace htdp {

// Anything a projected first-order method can run over. Project() must return
// a feasible point within distance xi of the exact Euclidean projection; sets
// with an exact projection ignore xi.
class FeasibleSet {
 public:
  virtual ~FeasibleSet() = default;
  virtual int dimension() const = 0;
  virtual double diameter_bound() const = 0;
  virtual Vector Project(const Vector& y, double xi) const = 0;
  // Same contract as Project(), overwriting x.
  virtual void ProjectInPlace(Vector& x, double xi) const {
    x = Project(x, xi);
  }
};

// A compact convex set with an exact Euclidean projection. Immutable.
class ConvexDomain final : public FeasibleSet {
 public:
  enum class Kind { kBall, kBox, kProduct };

  static absl::StatusOr<ConvexDomain> Ball(Vector center, double radius);
  static absl::StatusOr<ConvexDomain> Box(Vector lower, Vector upper);
  static absl::StatusOr<ConvexDomain> Product(std::vector<ConvexDomain> factors);

  Kind kind() const { return kind_; }
  int dimension() const override { return dimension_; }
  double diameter_bound() const override { return diameter_; }

  // Exact projection. The caller guarantees y.size() == dimension(); use
  // ProjectExact() for a checked call.
  Vector Project(const Vector& y) const;
  Vector Project(const Vector& y, double /*xi*/) const override {
    return Project(y);
  }
  void ProjectInPlace(Vector& x, double /*xi*/) const override {
    ProjectInto(x, x);
  }

  // Writes the projection of y into out; y and out may alias.
  void ProjectInto(const Eigen::Ref<const Vector>& y,
                   Eigen::Ref<Vector> out) const;

  bool Contains(const Vector& x, double tol = kMembershipTolerance) const;

  // Axis-aligned box enclosing the set.
  std::pair<Vector, Vector> BoundingBox() const;

  const Vector& center() const { return center_; }
  double radius() const { return radius_; }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  const std::vector<ConvexDomain>& factors() const { return factors_; }

 private:
  ConvexDomain() = default;

  Kind kind_ = Kind::kBall;
  int dimension_ = 0;
  double diameter_ = 0.0;
  Vector center_;
  double radius_ = 0.0;
  Vector lower_;
  Vector upper_;
  std::vector<ConvexDomain> factors_;
};

// Checked exact projection: rejects dimension mismatches and non-finite input.
absl::StatusOr<Vector> ProjectExact(const ConvexDomain& domain, const Vector& y);

// W ∩ B(center, radius) for a projection-friendly W.
//
// The projection onto the intersection is x_λ = Π_W((y + λ c) / (1 + λ)) for
// the multiplier λ* solving ‖x_λ − c‖ = r. The map λ ↦ ‖x_λ − c‖² − r² is
// nonincreasing, so bisection over [0, ‖y − c‖ / r] brackets λ*; the feasible
// endpoint is returned. Since ‖x_λ − x_μ‖ ≤ |λ − μ|·‖y − c‖, running
// ⌈log₂(1 + ‖y − c‖² / (r ξ))⌉ steps puts the result within ξ of the exact
// projection.
class LocalizedDomain final : public FeasibleSet {
 public:
  struct ProjectionStats {
    int base_projections = 0;
    int bisection_steps = 0;
  };

  static absl::StatusOr<LocalizedDomain> Create(ConvexDomain base,
                                                Vector center, double radius);

  int dimension() const override { return base_.dimension(); }
  double diameter_bound() const override;
  Vector Project(const Vector& y, double xi) const override;
  void ProjectInPlace(Vector& x, double xi) const override;
  // In-place projection of a block of a larger vector.
  void ProjectBlock(Eigen::Ref<Vector> x, double xi) const;

  Vector InexactProject(const Vector& y, double xi,
                        ProjectionStats* stats = nullptr) const;
  bool Contains(const Vector& x, double tol = kMembershipTolerance) const;

  const ConvexDomain& base() const { return base_; }
  const Vector& center() const { return center_; }
  double radius() const { return radius_; }

  // Number of bisection steps needed for accuracy xi at distance
  // dist_to_center from the center.
  static int BisectionSteps(double dist_to_center, double radius, double xi);

 private:
  LocalizedDomain(ConvexDomain base, Vector center, double radius)
      : base_(std::move(base)), center_(std::move(center)), radius_(radius) {}

  ConvexDomain base_;
  Vector center_;
  double radius_;
};

// Checked inexact projection (xi > 0, dimensions match).
absl::StatusOr<Vector> InexactProjectLocalized(const LocalizedDomain& domain,
                                               const Vector& y, double xi);

// head × tail^copies, laid out as one flat vector [head, tail_1, ..., tail_m].
// Only the head block may be a localized set; the inexact-projection accuracy
// is spent entirely on it and the tail blocks are projected exactly.
class ReplicatedProductSet final : public FeasibleSet {
 public:
  using Head = std::variant<ConvexDomain, LocalizedDomain>;

  ReplicatedProductSet(Head head, ConvexDomain tail, int copies);

  int dimension() const override;
  double diameter_bound() const override;
  Vector Project(const Vector& y, double xi) const override;
  void ProjectInPlace(Vector& x, double xi) const override;

  int copies() const { return copies_; }
  int block_dimension() const { return tail_.dimension(); }

 private:
  const FeasibleSet& head_set() const;

  Head head_;
  ConvexDomain tail_;
  int copies_;
};

}  // namespace htdp

#endif  // HTDP_GEOMETRY_H_
