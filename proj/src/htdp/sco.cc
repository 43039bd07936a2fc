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

#include "htdp/sco.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "htdp/status_macros.h"

namespace htdp {

int NumPhases(int n) {
  int T = 0;
  while ((int64_t{1} << T) < n) ++T;
  return T;
}

int DefaultRepetitions(int T, double delta) {
  return static_cast<int>(std::ceil(8.0 * std::log(4.0 * T / delta)));
}

int MinimalSampleSize(int J, int T) { return 2 * J * T; }

double DefaultLambda1(const MomentSpec& moment, double D, int d, int n,
                      double epsilon, double delta) {
  const double log_term = std::log(1.0 / delta);
  return moment.G_k / D *
             std::pow(d * log_term / (n * epsilon), 1.0 - 1.0 / moment.k) +
         moment.G_2 / D * std::sqrt(log_term / n);
}

int PhaseSchedule::active_phases() const {
  int count = 0;
  for (const PhaseInfo& p : phases) count += p.m_t >= 1 ? 1 : 0;
  return count;
}

absl::StatusOr<PhaseSchedule> BuildSchedule(const ScoConfig& cfg, double D) {
  if (cfg.n < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("need n >= 2 samples, got ", cfg.n));
  }
  if (cfg.d < 1) return absl::InvalidArgumentError("dimension must be >= 1");
  if (!(cfg.epsilon > 0.0)) {
    return absl::InvalidArgumentError("epsilon must be positive");
  }
  if (!(cfg.delta > 0.0 && cfg.delta < 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrCat("delta must lie in (0, 1/2), got ", cfg.delta));
  }
  if (!(D > 0.0)) return absl::InvalidArgumentError("diameter must be positive");
  PhaseSchedule s;
  s.T = NumPhases(cfg.n);
  s.J = cfg.J_override.has_value() ? *cfg.J_override
                                   : DefaultRepetitions(s.T, cfg.delta);
  if (s.J < 1) return absl::InvalidArgumentError("J must be >= 1");
  const int needed = MinimalSampleSize(s.J, s.T);
  if (cfg.n < needed) {
    return absl::FailedPreconditionError(absl::StrCat(
        "insufficient data: n=", cfg.n, " but J=", s.J, ", T=", s.T,
        " require n >= 2JT = ", needed));
  }
  s.lambda1 = cfg.lambda1 > 0.0
                  ? cfg.lambda1
                  : DefaultLambda1(cfg.moment, D, cfg.d, cfg.n, cfg.epsilon,
                                   cfg.delta);
  int offset = 0;
  for (int t = 1; t <= s.T; ++t) {
    PhaseInfo p;
    p.phase = t;
    p.n_t = static_cast<int>(cfg.n >> t);
    p.m_t = p.n_t / s.J;
    p.lambda_t = std::pow(32.0, t - 1) * s.lambda1;
    p.offset = offset;
    offset += p.n_t;
    s.phases.push_back(p);
  }
  return s;
}

std::pair<int, int> BatchRange(const PhaseInfo& phase, int j) {
  const int begin = phase.offset + j * phase.m_t;
  return {begin, begin + phase.m_t};
}

int AggregateGeometricIndex(const std::vector<Vector>& points) {
  const int J = static_cast<int>(points.size());
  const int k = J / 2;
  int best = 0;
  double best_radius = std::numeric_limits<double>::infinity();
  std::vector<double> dist;
  for (int i = 0; i < J; ++i) {
    dist.clear();
    for (int j = 0; j < J; ++j) {
      if (j != i) dist.push_back((points[i] - points[j]).norm());
    }
    double radius = 0.0;
    if (k > 0) {
      std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
      radius = dist[k - 1];
    }
    if (radius < best_radius) {
      best_radius = radius;
      best = i;
    }
  }
  return best;
}

absl::StatusOr<Vector> AggregateGeometric(const std::vector<Vector>& points) {
  if (points.empty()) {
    return absl::InvalidArgumentError("aggregation needs at least one point");
  }
  for (const Vector& p : points) {
    if (p.size() != points[0].size()) {
      return absl::InvalidArgumentError("aggregation dimension mismatch");
    }
  }
  return points[AggregateGeometricIndex(points)];
}

uint64_t HashPoint(const Vector& w) {
  uint64_t h = 1469598103934665603ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(w.data());
  for (size_t i = 0; i < sizeof(double) * static_cast<size_t>(w.size()); ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

void WriteRunLogCsv(const std::vector<RunLogRow>& rows, std::ostream& out) {
  out << "phase,repetition,m_t,lambda_t,C,output_hash,certified\n";
  for (const RunLogRow& r : rows) {
    out << absl::StrFormat("%d,%d,%d,%.17g,%.17g,%016x,%d\n", r.phase,
                           r.repetition, r.m_t, r.lambda_t, r.C, r.output_hash,
                           r.certified ? 1 : 0);
  }
}

namespace internal {

absl::StatusOr<ScoResult> PopLocalizeImpl(const Dataset& data,
                                          const LossModel& model,
                                          const ConvexDomain& domain,
                                          const ScoConfig& cfg, Rng& rng,
                                          const ErmHooks& hooks) {
  if (data.size() != cfg.n || data.dim != cfg.d ||
      domain.dimension() != cfg.d) {
    return absl::InvalidArgumentError(
        absl::StrCat("config (n=", cfg.n, ", d=", cfg.d,
                     ") does not match dataset (n=", data.size(),
                     ", d=", data.dim, ")"));
  }
  const double D = domain.diameter_bound();
  HTDP_ASSIGN_OR_RETURN(PhaseSchedule schedule, BuildSchedule(cfg, D));
  ErmOptions erm_options = cfg.erm_options;
  if (cfg.solver == ErmSolverKind::kEmPgm &&
      erm_options.em_net_eta_floor <= 0.0) {
    erm_options.em_net_eta_floor = 3.0 * D / std::pow(1e6, 1.0 / cfg.d);
  }

  ScoResult result;
  Vector center = domain.Project(Vector::Zero(cfg.d));
  result.centers.push_back(center);
  for (const PhaseInfo& phase : schedule.phases) {
    if (phase.m_t < 1) continue;
    std::vector<Vector> outputs;
    outputs.reserve(schedule.J);
    for (int j = 0; j < schedule.J; ++j) {
      const auto [begin, end] = BatchRange(phase, j);
      Dataset batch;
      batch.dim = data.dim;
      batch.samples.assign(data.samples.begin() + begin,
                           data.samples.begin() + end);
      HTDP_ASSIGN_OR_RETURN(
          ErmInstance inst,
          ErmInstance::Create(std::move(batch), model, domain, cfg.moment,
                              cfg.epsilon, phase.lambda_t, center,
                              cfg.C_override));
      Rng call_rng(rng());
      absl::StatusOr<ErmReport> report;
      if (cfg.solver == ErmSolverKind::kEmPgm) {
        report = EmPgm(inst, call_rng, erm_options);
      } else {
        report =
            TwoStageImpl(inst, cfg.solver, call_rng, erm_options, hooks);
      }
      if (!report.ok()) {
        return absl::Status(
            report.status().code(),
            absl::StrCat("phase ", phase.phase, " repetition ", j, ": ",
                         report.status().message()));
      }
      RunLogRow row;
      row.phase = phase.phase;
      row.repetition = j;
      row.m_t = phase.m_t;
      row.lambda_t = phase.lambda_t;
      row.C = inst.C();
      row.output = report->output;
      row.output_hash = HashPoint(report->output);
      row.certified = report->certified();
      result.certified = result.certified && row.certified;
      result.log.push_back(row);
      outputs.push_back(std::move(report->output));
    }
    HTDP_ASSIGN_OR_RETURN(center, AggregateGeometric(outputs));
    result.centers.push_back(center);
  }
  result.output = center;
  result.schedule = std::move(schedule);
  return result;
}

}  // namespace internal

absl::StatusOr<ScoResult> PopLocalize(const Dataset& data,
                                      const LossModel& model,
                                      const ConvexDomain& domain,
                                      const ScoConfig& cfg, Rng& rng) {
  return internal::PopLocalizeImpl(data, model, domain, cfg, rng, {});
}

}  // namespace htdp
