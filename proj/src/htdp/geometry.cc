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

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace htdp {
namespace {

// Used when a caller asks a localized set for an exact projection.
constexpr double kTightXi = 1e-12;

}  // namespace

absl::StatusOr<ConvexDomain> ConvexDomain::Ball(Vector center, double radius) {
  if (center.size() == 0) {
    return absl::InvalidArgumentError("ball center must be nonempty");
  }
  if (!AllFinite(center)) {
    return absl::InvalidArgumentError("ball center must be finite");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    return absl::InvalidArgumentError(
        absl::StrCat("ball radius must be positive and finite, got ", radius));
  }
  ConvexDomain d;
  d.kind_ = Kind::kBall;
  d.dimension_ = static_cast<int>(center.size());
  d.center_ = std::move(center);
  d.radius_ = radius;
  d.diameter_ = 2.0 * radius;
  return d;
}

absl::StatusOr<ConvexDomain> ConvexDomain::Box(Vector lower, Vector upper) {
  if (lower.size() == 0 || lower.size() != upper.size()) {
    return absl::InvalidArgumentError("box bounds must be nonempty and match");
  }
  if (!AllFinite(lower) || !AllFinite(upper)) {
    return absl::InvalidArgumentError("box bounds must be finite");
  }
  if ((upper.array() < lower.array()).any()) {
    return absl::InvalidArgumentError("box upper bound below lower bound");
  }
  const double diameter = (upper - lower).norm();
  if (!(diameter > 0.0)) {
    return absl::InvalidArgumentError("box must have positive diameter");
  }
  ConvexDomain d;
  d.kind_ = Kind::kBox;
  d.dimension_ = static_cast<int>(lower.size());
  d.lower_ = std::move(lower);
  d.upper_ = std::move(upper);
  d.diameter_ = diameter;
  return d;
}

absl::StatusOr<ConvexDomain> ConvexDomain::Product(
    std::vector<ConvexDomain> factors) {
  if (factors.empty()) {
    return absl::InvalidArgumentError("product needs at least one factor");
  }
  ConvexDomain d;
  d.kind_ = Kind::kProduct;
  double sq = 0.0;
  for (const ConvexDomain& f : factors) {
    d.dimension_ += f.dimension();
    sq += f.diameter_bound() * f.diameter_bound();
  }
  d.diameter_ = std::sqrt(sq);
  d.factors_ = std::move(factors);
  return d;
}

void ConvexDomain::ProjectInto(const Eigen::Ref<const Vector>& y,
                               Eigen::Ref<Vector> out) const {
  switch (kind_) {
    case Kind::kBall: {
      const double dist = (y - center_).norm();
      if (dist <= radius_) {
        if (out.data() != y.data()) out = y;
      } else {
        const double s = radius_ / dist;
        out = center_ + s * (y - center_);
      }
      return;
    }
    case Kind::kBox:
      out = y.cwiseMax(lower_).cwiseMin(upper_);
      return;
    case Kind::kProduct: {
      int offset = 0;
      for (const ConvexDomain& f : factors_) {
        const int k = f.dimension();
        f.ProjectInto(y.segment(offset, k), out.segment(offset, k));
        offset += k;
      }
      return;
    }
  }
}

Vector ConvexDomain::Project(const Vector& y) const {
  Vector out(dimension_);
  ProjectInto(y, out);
  return out;
}

bool ConvexDomain::Contains(const Vector& x, double tol) const {
  if (x.size() != dimension_) return false;
  switch (kind_) {
    case Kind::kBall:
      return (x - center_).norm() <= radius_ + tol;
    case Kind::kBox:
      return ((x - lower_).array() >= -tol).all() &&
             ((upper_ - x).array() >= -tol).all();
    case Kind::kProduct: {
      int offset = 0;
      for (const ConvexDomain& f : factors_) {
        if (!f.Contains(x.segment(offset, f.dimension()), tol)) return false;
        offset += f.dimension();
      }
      return true;
    }
  }
  return false;
}

std::pair<Vector, Vector> ConvexDomain::BoundingBox() const {
  switch (kind_) {
    case Kind::kBall:
      return {center_.array() - radius_, center_.array() + radius_};
    case Kind::kBox:
      return {lower_, upper_};
    case Kind::kProduct: {
      Vector lo(dimension_), hi(dimension_);
      int offset = 0;
      for (const ConvexDomain& f : factors_) {
        auto [flo, fhi] = f.BoundingBox();
        lo.segment(offset, f.dimension()) = flo;
        hi.segment(offset, f.dimension()) = fhi;
        offset += f.dimension();
      }
      return {lo, hi};
    }
  }
  return {};
}

absl::StatusOr<Vector> ProjectExact(const ConvexDomain& domain,
                                    const Vector& y) {
  if (y.size() != domain.dimension()) {
    return absl::InvalidArgumentError(
        absl::StrCat("projection dimension mismatch: point has ", y.size(),
                     " coordinates, domain has ", domain.dimension()));
  }
  if (!AllFinite(y)) {
    return absl::InvalidArgumentError("projection input must be finite");
  }
  return domain.Project(y);
}

absl::StatusOr<LocalizedDomain> LocalizedDomain::Create(ConvexDomain base,
                                                        Vector center,
                                                        double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    return absl::InvalidArgumentError(
        absl::StrCat("localization radius must be positive, got ", radius));
  }
  if (center.size() != base.dimension()) {
    return absl::InvalidArgumentError("localization center dimension mismatch");
  }
  if (!base.Contains(center)) {
    return absl::InvalidArgumentError(
        "localization center must lie in the base domain");
  }
  return LocalizedDomain(std::move(base), std::move(center), radius);
}

double LocalizedDomain::diameter_bound() const {
  return std::min(base_.diameter_bound(), 2.0 * radius_);
}

int LocalizedDomain::BisectionSteps(double dist_to_center, double radius,
                                    double xi) {
  const double ratio = dist_to_center * dist_to_center / (radius * xi);
  return static_cast<int>(std::ceil(std::log2(1.0 + ratio)));
}

Vector LocalizedDomain::InexactProject(const Vector& y, double xi,
                                       ProjectionStats* stats) const {
  ProjectionStats local;
  const double r2 = radius_ * radius_;
  Vector x = base_.Project(y);
  ++local.base_projections;
  if ((x - center_).squaredNorm() - r2 <= 0.0) {
    if (stats != nullptr) *stats = local;
    return x;
  }

  const double dist = (y - center_).norm();
  const int steps = BisectionSteps(dist, radius_, xi);
  double lo = 0.0;
  double hi = dist / radius_;
  Vector x_hi;
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    Vector candidate = base_.Project((y + mid * center_) / (1.0 + mid));
    ++local.base_projections;
    // Ties at g = 0 count as feasible, keeping the smaller-norm iterate.
    if ((candidate - center_).squaredNorm() - r2 <= 0.0) {
      hi = mid;
      x_hi = std::move(candidate);
    } else {
      lo = mid;
    }
  }
  local.bisection_steps = steps;
  if (x_hi.size() == 0) {
    // The upper endpoint is feasible by construction: ‖x_λ̄ − c‖ ≤ rR/(R+r).
    x_hi = base_.Project((y + hi * center_) / (1.0 + hi));
    ++local.base_projections;
  }
  if (stats != nullptr) *stats = local;
  return x_hi;
}

Vector LocalizedDomain::Project(const Vector& y, double xi) const {
  return InexactProject(y, xi > 0.0 ? xi : kTightXi);
}

void LocalizedDomain::ProjectInPlace(Vector& x, double xi) const {
  ProjectBlock(x, xi);
}

void LocalizedDomain::ProjectBlock(Eigen::Ref<Vector> x, double xi) const {
  using SmallVector = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 16, 1>;
  if (x.size() <= 16) {
    SmallVector p(x.size());
    base_.ProjectInto(x, p);
    if ((p - center_).squaredNorm() - radius_ * radius_ <= 0.0) {
      x = p;
      return;
    }
  }
  x = Project(Vector(x), xi);
}

bool LocalizedDomain::Contains(const Vector& x, double tol) const {
  return base_.Contains(x, tol) && (x - center_).norm() <= radius_ + tol;
}

absl::StatusOr<Vector> InexactProjectLocalized(const LocalizedDomain& domain,
                                               const Vector& y, double xi) {
  if (!(xi > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("projection accuracy must be positive, got ", xi));
  }
  if (y.size() != domain.dimension()) {
    return absl::InvalidArgumentError("projection dimension mismatch");
  }
  if (!AllFinite(y)) {
    return absl::InvalidArgumentError("projection input must be finite");
  }
  return domain.InexactProject(y, xi);
}

ReplicatedProductSet::ReplicatedProductSet(Head head, ConvexDomain tail,
                                           int copies)
    : head_(std::move(head)), tail_(std::move(tail)), copies_(copies) {}

const FeasibleSet& ReplicatedProductSet::head_set() const {
  return std::visit([](const auto& h) -> const FeasibleSet& { return h; },
                    head_);
}

int ReplicatedProductSet::dimension() const {
  return head_set().dimension() + copies_ * tail_.dimension();
}

double ReplicatedProductSet::diameter_bound() const {
  const double dh = head_set().diameter_bound();
  const double dt = tail_.diameter_bound();
  return std::sqrt(dh * dh + copies_ * dt * dt);
}

Vector ReplicatedProductSet::Project(const Vector& y, double xi) const {
  const FeasibleSet& head = head_set();
  const int hd = head.dimension();
  const int td = tail_.dimension();
  Vector out = y;
  out.head(hd) = head.Project(y.head(hd), xi);
  for (int i = 0; i < copies_; ++i) {
    auto block = out.segment(hd + i * td, td);
    tail_.ProjectInto(block, block);
  }
  return out;
}

void ReplicatedProductSet::ProjectInPlace(Vector& x, double xi) const {
  const int td = tail_.dimension();
  int hd = 0;
  if (const auto* h = std::get_if<ConvexDomain>(&head_)) {
    hd = h->dimension();
    auto block = x.head(hd);
    h->ProjectInto(block, block);
  } else {
    const LocalizedDomain& loc = std::get<LocalizedDomain>(head_);
    hd = loc.dimension();
    loc.ProjectBlock(x.head(hd), xi);
  }
  for (int i = 0; i < copies_; ++i) {
    auto block = x.segment(hd + i * td, td);
    tail_.ProjectInto(block, block);
  }
}

}  // namespace htdp
