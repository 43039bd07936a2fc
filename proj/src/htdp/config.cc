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

#include "htdp/config.h"

#include <fstream>
#include <sstream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "htdp/status_macros.h"

namespace htdp {
namespace {

using json = nlohmann::json;

absl::Status CheckKnown(const json& flat) {
  if (!flat.is_object()) {
    return absl::InvalidArgumentError("config must be a JSON object");
  }
  const json defaults = DefaultConfigJson();
  for (auto it = flat.begin(); it != flat.end(); ++it) {
    if (!defaults.contains(it.key())) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key: ", it.key()));
    }
  }
  return absl::OkStatus();
}

template <typename T>
absl::StatusOr<T> Get(const json& flat, const std::string& key) {
  try {
    return flat.at(key).get<T>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config key ", key, ": ", e.what()));
  }
}

// Accepts a scalar or an array.
template <typename T>
absl::StatusOr<std::vector<T>> GetList(const json& flat,
                                       const std::string& key) {
  const json& v = flat.at(key);
  try {
    if (v.is_array()) return v.get<std::vector<T>>();
    return std::vector<T>{v.get<T>()};
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("config key ", key, ": ", e.what()));
  }
}

}  // namespace

json DefaultConfigJson() {
  return json{
      {"instance.kind", "pareto_linear"},
      {"instance.k", 2.0},
      {"instance.G_k", 1.0},
      {"instance.G_2", 1.0},
      {"instance.radius", 1.0},
      {"instance.zeta", 0.25},
      {"instance.sign", 1},
      {"instance.shape_offset", 1.0},
      {"instance.direction_bias", 0.5},
      {"solver.kind", "double_outputpert"},
      {"solver.max_iterations", 0},
      {"solver.J", 0},
      {"solver.lambda1", 0.0},
      {"solver.C", 0.0},
      {"solver.smoothness", 0.0},
      {"grid.n", json::array({1024})},
      {"grid.d", json::array({1})},
      {"grid.epsilon", json::array({1.0})},
      {"grid.delta", json::array({0.1})},
      {"seeds", 1},
      {"seed.base", 0},
      {"output.path", ""},
      {"output.record_runtime", true},
      {"output.run_log", ""},
      {"probe.pairs", 200},
      {"probe.kind", "hinge"},
      {"probe.m", 1},
      {"probe.d", 1},
      {"probe.lambda", 2.5},
      {"probe.epsilon", 1.0},
      {"probe.C", 1.0},
      {"probe.radius", 1.0},
      {"probe.output", ""},
  };
}

absl::Status ConfigBuilder::MergeFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  json parsed;
  try {
    parsed = json::parse(in);
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("cannot parse ", path, ": ", e.what()));
  }
  return MergeJson(parsed);
}

absl::Status ConfigBuilder::MergeJson(const json& flat) {
  HTDP_RETURN_IF_ERROR(CheckKnown(flat));
  for (auto it = flat.begin(); it != flat.end(); ++it) {
    settings_[it.key()] = it.value();
  }
  return absl::OkStatus();
}

absl::Status ConfigBuilder::Set(std::string_view key, std::string_view value) {
  json v = json::parse(value, nullptr, /*allow_exceptions=*/false);
  if (v.is_discarded()) v = std::string(value);
  return MergeJson(json{{std::string(key), v}});
}

absl::Status ConfigBuilder::SetAssignment(std::string_view assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected key=value, got '", std::string(assignment), "'"));
  }
  return Set(assignment.substr(0, eq), assignment.substr(eq + 1));
}

absl::StatusOr<ExperimentConfig> ConfigBuilder::Build() const {
  return ParseConfig(settings_);
}

absl::StatusOr<ExperimentConfig> ParseConfig(const json& input) {
  HTDP_RETURN_IF_ERROR(CheckKnown(input));
  json flat = DefaultConfigJson();
  for (auto it = input.begin(); it != input.end(); ++it) {
    flat[it.key()] = it.value();
  }
  ExperimentConfig c;
  HTDP_ASSIGN_OR_RETURN(std::string kind,
                        Get<std::string>(flat, "instance.kind"));
  HTDP_ASSIGN_OR_RETURN(c.instance_kind, ParseGeneratorKind(kind));
  HTDP_ASSIGN_OR_RETURN(c.k, Get<double>(flat, "instance.k"));
  HTDP_ASSIGN_OR_RETURN(c.G_k, Get<double>(flat, "instance.G_k"));
  HTDP_ASSIGN_OR_RETURN(c.G_2, Get<double>(flat, "instance.G_2"));
  HTDP_ASSIGN_OR_RETURN(c.radius, Get<double>(flat, "instance.radius"));
  HTDP_ASSIGN_OR_RETURN(c.zeta, Get<double>(flat, "instance.zeta"));
  HTDP_ASSIGN_OR_RETURN(c.sign, Get<int>(flat, "instance.sign"));
  HTDP_ASSIGN_OR_RETURN(c.shape_offset,
                        Get<double>(flat, "instance.shape_offset"));
  HTDP_ASSIGN_OR_RETURN(c.direction_bias,
                        Get<double>(flat, "instance.direction_bias"));

  HTDP_ASSIGN_OR_RETURN(std::string solver,
                        Get<std::string>(flat, "solver.kind"));
  HTDP_ASSIGN_OR_RETURN(c.solver, ParseErmSolverKind(solver));
  HTDP_ASSIGN_OR_RETURN(c.max_iterations,
                        Get<int64_t>(flat, "solver.max_iterations"));
  HTDP_ASSIGN_OR_RETURN(int J, Get<int>(flat, "solver.J"));
  if (J > 0) c.J = J;
  HTDP_ASSIGN_OR_RETURN(c.lambda1, Get<double>(flat, "solver.lambda1"));
  HTDP_ASSIGN_OR_RETURN(double C, Get<double>(flat, "solver.C"));
  if (C > 0.0) c.C = C;
  HTDP_ASSIGN_OR_RETURN(c.smoothness, Get<double>(flat, "solver.smoothness"));

  HTDP_ASSIGN_OR_RETURN(c.n, GetList<int>(flat, "grid.n"));
  HTDP_ASSIGN_OR_RETURN(c.d, GetList<int>(flat, "grid.d"));
  HTDP_ASSIGN_OR_RETURN(c.epsilon, GetList<double>(flat, "grid.epsilon"));
  HTDP_ASSIGN_OR_RETURN(c.delta, GetList<double>(flat, "grid.delta"));
  HTDP_ASSIGN_OR_RETURN(c.seeds, Get<int>(flat, "seeds"));
  HTDP_ASSIGN_OR_RETURN(c.seed_base, Get<uint64_t>(flat, "seed.base"));

  HTDP_ASSIGN_OR_RETURN(c.output_path, Get<std::string>(flat, "output.path"));
  HTDP_ASSIGN_OR_RETURN(c.record_runtime,
                        Get<bool>(flat, "output.record_runtime"));
  HTDP_ASSIGN_OR_RETURN(c.run_log_path,
                        Get<std::string>(flat, "output.run_log"));

  HTDP_ASSIGN_OR_RETURN(c.probe_pairs, Get<int>(flat, "probe.pairs"));
  HTDP_ASSIGN_OR_RETURN(std::string loss, Get<std::string>(flat, "probe.kind"));
  HTDP_ASSIGN_OR_RETURN(c.probe_loss, ParseLossKind(loss));
  HTDP_ASSIGN_OR_RETURN(c.probe_m, Get<int>(flat, "probe.m"));
  HTDP_ASSIGN_OR_RETURN(c.probe_d, Get<int>(flat, "probe.d"));
  HTDP_ASSIGN_OR_RETURN(c.probe_lambda, Get<double>(flat, "probe.lambda"));
  HTDP_ASSIGN_OR_RETURN(c.probe_epsilon, Get<double>(flat, "probe.epsilon"));
  HTDP_ASSIGN_OR_RETURN(c.probe_C, Get<double>(flat, "probe.C"));
  HTDP_ASSIGN_OR_RETURN(c.probe_radius, Get<double>(flat, "probe.radius"));
  HTDP_ASSIGN_OR_RETURN(c.probe_output_path,
                        Get<std::string>(flat, "probe.output"));

  if (c.seeds < 0) return absl::InvalidArgumentError("seeds must be >= 0");
  if (c.max_iterations < 0) {
    return absl::InvalidArgumentError("solver.max_iterations must be >= 0");
  }
  if (c.probe_pairs < 0 || c.probe_m < 1 || c.probe_d < 1) {
    return absl::InvalidArgumentError("invalid probe settings");
  }
  return c;
}

}  // namespace htdp
