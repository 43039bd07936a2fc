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

// Population localization: T = ⌈log₂ n⌉ phases; phase t draws J disjoint
// batches of m_t = ⌊n_t/J⌋ samples from its n_t = ⌊n/2^t⌋ fresh samples,
// runs a private regularized ERM solver centered at w̄_t with
// λ_t = 32^{t−1}λ₁ on each batch, and aggregates the J outputs into w̄_{t+1}.

#ifndef HTDP_SCO_H_
#define HTDP_SCO_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "absl/status/statusor.h"
#include "htdp/erm.h"
#include "htdp/generators.h"
#include "htdp/geometry.h"
#include "htdp/losses.h"
#include "htdp/types.h"

namespace htdp {

struct ScoConfig {
  int n = 0;
  int d = 1;
  double epsilon = 1.0;
  double delta = 0.1;
  double lambda1 = 0.0;  // 0 selects DefaultLambda1.
  std::optional<int> J_override;
  std::optional<double> C_override;
  ErmSolverKind solver = ErmSolverKind::kDoubleOutputPert;
  MomentSpec moment;
  ErmOptions erm_options;
};

int NumPhases(int n);                          // ⌈log₂ n⌉
int DefaultRepetitions(int T, double delta);   // ⌈8 ln(4T/δ)⌉
int MinimalSampleSize(int J, int T);           // 2JT
// (G_k/D)(d ln(1/δ)/(nε))^{1−1/k} + (G_2/D)√(ln(1/δ)/n).
double DefaultLambda1(const MomentSpec& moment, double D, int d, int n,
                      double epsilon, double delta);

struct PhaseInfo {
  int phase = 0;  // 1-based
  int n_t = 0;
  int m_t = 0;
  double lambda_t = 0.0;
  int offset = 0;  // first sample index of the phase
};

struct PhaseSchedule {
  int T = 0;
  int J = 0;
  double lambda1 = 0.0;
  // Every phase 1..T; phases with m_t = 0 are listed but not run.
  std::vector<PhaseInfo> phases;

  int active_phases() const;
};

absl::StatusOr<PhaseSchedule> BuildSchedule(const ScoConfig& cfg, double D);

// Index ranges [begin, end) of batch j in phase t.
std::pair<int, int> BatchRange(const PhaseInfo& phase, int j);

// Input point minimizing the ⌊J/2⌋-th smallest distance to the other
// points; lowest index on ties.
absl::StatusOr<Vector> AggregateGeometric(const std::vector<Vector>& points);
int AggregateGeometricIndex(const std::vector<Vector>& points);

struct RunLogRow {
  int phase = 0;
  int repetition = 0;
  int m_t = 0;
  double lambda_t = 0.0;
  double C = 0.0;
  uint64_t output_hash = 0;
  bool certified = true;
  Vector output;
};

void WriteRunLogCsv(const std::vector<RunLogRow>& rows, std::ostream& out);

// FNV-1a over the raw bytes of the coordinates.
uint64_t HashPoint(const Vector& w);

struct ScoResult {
  Vector output;
  PhaseSchedule schedule;
  std::vector<RunLogRow> log;
  std::vector<Vector> centers;  // w̄_1, w̄_2, ...
  bool certified = true;
};

absl::StatusOr<ScoResult> PopLocalize(const Dataset& data,
                                      const LossModel& model,
                                      const ConvexDomain& domain,
                                      const ScoConfig& cfg, Rng& rng);

namespace internal {

absl::StatusOr<ScoResult> PopLocalizeImpl(const Dataset& data,
                                          const LossModel& model,
                                          const ConvexDomain& domain,
                                          const ScoConfig& cfg, Rng& rng,
                                          const ErmHooks& hooks);

}  // namespace internal
}  // namespace htdp

#endif  // HTDP_SCO_H_
