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

// Experiment configuration: a flat JSON object whose keys are dotted paths
// ("instance.kind", "grid.n", ...). Settings are layered defaults < file <
// explicit overrides; unknown keys are rejected.

#ifndef HTDP_CONFIG_H_
#define HTDP_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "htdp/erm.h"
#include "htdp/generators.h"
#include "htdp/losses.h"
#include "json.hpp"

namespace htdp {

struct ExperimentConfig {
  // instance.*
  GeneratorKind instance_kind = GeneratorKind::kParetoLinear;
  double k = 2.0;
  double G_k = 1.0;
  double G_2 = 1.0;  // two_point only
  double radius = 1.0;
  double zeta = 0.25;
  int sign = 1;
  double shape_offset = 1.0;
  double direction_bias = 0.5;

  // solver.*
  ErmSolverKind solver = ErmSolverKind::kDoubleOutputPert;
  int64_t max_iterations = 0;
  std::optional<int> J;
  double lambda1 = 0.0;
  std::optional<double> C;
  double smoothness = 0.0;

  // grid.*, seeds
  std::vector<int> n = {1024};
  std::vector<int> d = {1};
  std::vector<double> epsilon = {1.0};
  std::vector<double> delta = {0.1};
  int seeds = 1;
  uint64_t seed_base = 0;

  // output.*
  std::string output_path;
  bool record_runtime = true;
  std::string run_log_path;

  // probe.*
  int probe_pairs = 200;
  LossKind probe_loss = LossKind::kHinge;
  int probe_m = 1;
  int probe_d = 1;
  double probe_lambda = 2.5;
  double probe_epsilon = 1.0;
  double probe_C = 1.0;
  double probe_radius = 1.0;
  std::string probe_output_path;
};

// Every recognized key with its default value.
nlohmann::json DefaultConfigJson();

// Layered settings before validation.
class ConfigBuilder {
 public:
  ConfigBuilder() : settings_(DefaultConfigJson()) {}

  absl::Status MergeFile(const std::string& path);
  absl::Status MergeJson(const nlohmann::json& flat);
  // value is parsed as JSON when possible and kept as a string otherwise.
  absl::Status Set(std::string_view key, std::string_view value);
  // "key=value".
  absl::Status SetAssignment(std::string_view assignment);

  const nlohmann::json& settings() const { return settings_; }
  absl::StatusOr<ExperimentConfig> Build() const;

 private:
  nlohmann::json settings_;
};

absl::StatusOr<ExperimentConfig> ParseConfig(const nlohmann::json& flat);

}  // namespace htdp

#endif  // HTDP_CONFIG_H_
