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

// Experiment harness: sweeps of the population-localization pipeline over
// (n, d, ε, δ) grids with closed-form excess risk, and sensitivity probes of
// the noise-free ERM stage maps.

#ifndef HTDP_BENCH_H_
#define HTDP_BENCH_H_

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "htdp/config.h"
#include "htdp/erm.h"
#include "htdp/generators.h"
#include "htdp/sco.h"
#include "htdp/types.h"

namespace htdp {

inline constexpr double kExcessRiskFloor = -1e-9;

// F(w) − F* from the instance's closed form; values in (−1e−9, 0) become 0.
double EvaluateExcessRisk(const InstanceSpec& spec, const Vector& w);

// Monte-Carlo estimate of F(w) from fresh draws, with its standard error.
struct MonteCarloEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
};
MonteCarloEstimate MonteCarloRisk(const InstanceSpec& spec, const Vector& w,
                                  int draws, Rng& rng);

// −m·w/‖w‖, or m·e₁ when w = 0.
Vector MeanFromSco(const Vector& w, double m);

// G_k D (d ln(1/δ)/(nε))^{1−1/k} + G_2 D √(ln(1/δ)/n).
double TheoryRate(const MomentSpec& moment, double D, int d, int n,
                  double epsilon, double delta);

struct ResultRow {
  std::string instance_id;
  int n = 0;
  int d = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  uint64_t seed = 0;
  std::string solver;
  double excess_risk = 0.0;
  double theory_rate = 0.0;
  double runtime_ms = 0.0;
  bool certified = false;
};

void WriteResultHeader(std::ostream& out);
void WriteResultRow(const ResultRow& row, std::ostream& out);

// Builds the instance of one (cell, seed) pair.
absl::StatusOr<GeneratedInstance> GenerateInstance(const ExperimentConfig& cfg,
                                                   int n, int d, double epsilon,
                                                   uint64_t seed);

using LogFn = std::function<void(const std::string&)>;

// Runs every cell × seed. Rows are streamed to out (when non-null) as they
// complete and also returned. Cells violating the minimal-n precondition are
// skipped with a log message; other failures become rows with NaN excess
// risk and certified = false.
absl::StatusOr<std::vector<ResultRow>> RunExperiment(
    const ExperimentConfig& cfg, std::ostream* out, const LogFn& log = {},
    std::ostream* run_log = nullptr);

// Convenience wrapper writing to cfg.output_path (and cfg.run_log_path).
absl::StatusOr<std::vector<ResultRow>> RunExperimentToFiles(
    const ExperimentConfig& cfg, const LogFn& log = {});

struct ProbeConfig {
  int pairs = 200;
  LossKind loss = LossKind::kHinge;
  int m = 1;
  int d = 1;
  double lambda = 2.5;
  double epsilon = 1.0;
  double C = 1.0;
  double radius = 1.0;
  ErmSolverKind route = ErmSolverKind::kDoubleOutputPert;
  int64_t max_iterations = 0;
  uint64_t seed = 0;
};

ProbeConfig ProbeConfigFrom(const ExperimentConfig& cfg);

struct ProbePairResult {
  int pair = 0;
  int replaced_index = 0;
  double stage1_distance = 0.0;
  double stage1_bound = 0.0;
  double stage2_distance = 0.0;
  double stage2_bound = 0.0;
  bool certified = true;

  double stage1_ratio() const { return stage1_distance / stage1_bound; }
  double stage2_ratio() const { return stage2_distance / stage2_bound; }
};

struct ProbeReport {
  std::vector<ProbePairResult> pairs;
  double max_stage1_ratio = 0.0;
  double max_stage2_ratio = 0.0;
  int violations = 0;
  int uncertified = 0;
};

// Bounded random samples: ‖a‖ ~ U(0, 2C) in a uniform direction,
// b ~ U[−1, 1].
Dataset ProbeDataset(int m, int d, double C, Rng& rng);
Sample ProbeSample(int d, double C, Rng& rng);

// Noise-free stage-1 and stage-2 maps on (Z, Z') pairs differing in one
// sample. Stage 2 uses W0 = W ∩ B(w̃(Z), r) for both datasets.
absl::StatusOr<ProbeReport> SensitivityProbe(const ProbeConfig& cfg);

// Distances for a single given pair.
absl::StatusOr<ProbePairResult> ProbePair(const ProbeConfig& cfg,
                                          const Dataset& Z, const Dataset& Zp,
                                          const Vector& w0);

void WriteProbeCsv(const ProbeReport& report, std::ostream& out);

}  // namespace htdp

#endif  // HTDP_BENCH_H_
