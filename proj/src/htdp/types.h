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

#ifndef HTDP_TYPES_H_
#define HTDP_TYPES_H_

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace htdp {

// Dense parameter vector. All public operations expect finite entries.
using Vector = Eigen::VectorXd;

// Seedable generator injected into every randomized routine. Experiments use
// one generator per trial; nothing in the library owns a global generator.
using Rng = std::mt19937_64;

// Absolute tolerance for set membership checks.
inline constexpr double kMembershipTolerance = 1e-9;

inline bool AllFinite(const Vector& v) { return v.allFinite(); }

}  // namespace htdp

#endif  // HTDP_TYPES_H_
