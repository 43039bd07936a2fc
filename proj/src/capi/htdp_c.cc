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

#include "htdp/htdp.h"

#include <cstring>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_split.h"
#include "htdp/bench.h"
#include "htdp/config.h"
#include "htdp/erm.h"
#include "htdp/generators.h"
#include "htdp/losses.h"
#include "htdp/sco.h"
#include "htdp/status_macros.h"
#include "htdp/verify.h"
#include "json.hpp"

struct htdp_config {
  htdp::ConfigBuilder builder;
};

struct htdp_dataset {
  htdp::Dataset data;
};

namespace {

using nlohmann::json;

thread_local std::string last_error;

htdp_status ToCode(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return HTDP_OK;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
      return HTDP_INVALID_ARGUMENT;
    case absl::StatusCode::kFailedPrecondition:
      return HTDP_FAILED_PRECONDITION;
    case absl::StatusCode::kResourceExhausted:
      return HTDP_RESOURCE_EXHAUSTED;
    case absl::StatusCode::kNotFound:
      return HTDP_NOT_FOUND;
    case absl::StatusCode::kUnavailable:
      return HTDP_UNAVAILABLE;
    default:
      return HTDP_INTERNAL;
  }
}

htdp_status Report(const absl::Status& status) {
  if (status.ok()) {
    last_error.clear();
    return HTDP_OK;
  }
  last_error = std::string(status.message());
  return ToCode(status);
}

htdp_status Error(htdp_status code, std::string message) {
  last_error = std::move(message);
  return code;
}

char* Dup(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
htdp_status Guarded(F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return Error(HTDP_INTERNAL, e.what());
  } catch (...) {
    return Error(HTDP_INTERNAL, "unknown exception");
  }
}

absl::StatusOr<json> ParseOptions(const char* options_json) {
  if (options_json == nullptr || *options_json == '\0') return json::object();
  json j = json::parse(options_json, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    return absl::InvalidArgumentError("options must be a JSON object");
  }
  return j;
}

template <typename T>
absl::StatusOr<T> Opt(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    return absl::InvalidArgumentError(
        std::string("option has the wrong type: ") + key);
  }
}

absl::Status CheckKeys(const json& j, std::initializer_list<const char*> keys) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) {
      return absl::InvalidArgumentError("unknown option: " + it.key());
    }
  }
  return absl::OkStatus();
}

struct CommonOptions {
  htdp::LossKind loss = htdp::LossKind::kLinear;
  htdp::ErmSolverKind solver = htdp::ErmSolverKind::kDoubleOutputPert;
  double epsilon = 1.0;
  double radius = 1.0;
  std::optional<double> C;
  htdp::MomentSpec moment;
  htdp::ErmOptions erm;
};

absl::StatusOr<CommonOptions> ParseCommon(const json& j) {
  CommonOptions c;
  HTDP_ASSIGN_OR_RETURN(std::string loss,
                        Opt<std::string>(j, "loss", "linear"));
  HTDP_ASSIGN_OR_RETURN(c.loss, htdp::ParseLossKind(loss));
  HTDP_ASSIGN_OR_RETURN(std::string solver,
                        Opt<std::string>(j, "solver", "double_outputpert"));
  HTDP_ASSIGN_OR_RETURN(c.solver, htdp::ParseErmSolverKind(solver));
  HTDP_ASSIGN_OR_RETURN(c.epsilon, Opt<double>(j, "epsilon", 1.0));
  HTDP_ASSIGN_OR_RETURN(c.radius, Opt<double>(j, "radius", 1.0));
  if (j.contains("C")) {
    HTDP_ASSIGN_OR_RETURN(double C, Opt<double>(j, "C", 0.0));
    c.C = C;
  }
  HTDP_ASSIGN_OR_RETURN(double k, Opt<double>(j, "k", 2.0));
  HTDP_ASSIGN_OR_RETURN(double G_k, Opt<double>(j, "G_k", 1.0));
  HTDP_ASSIGN_OR_RETURN(double G_2, Opt<double>(j, "G_2", G_k));
  HTDP_ASSIGN_OR_RETURN(c.moment, htdp::MomentSpec::Create(k, G_k, G_2));
  HTDP_ASSIGN_OR_RETURN(c.erm.max_solver_iterations,
                        Opt<int64_t>(j, "max_iterations", 0));
  HTDP_ASSIGN_OR_RETURN(c.erm.smoothness, Opt<double>(j, "smoothness", 0.0));
  return c;
}

}  // namespace

extern "C" {

const char* htdp_version(void) { return "1.0.0"; }

const char* htdp_last_error(void) { return last_error.c_str(); }

const char* htdp_status_name(htdp_status status) {
  switch (status) {
    case HTDP_OK:
      return "ok";
    case HTDP_INVALID_ARGUMENT:
      return "invalid_argument";
    case HTDP_FAILED_PRECONDITION:
      return "failed_precondition";
    case HTDP_RESOURCE_EXHAUSTED:
      return "resource_exhausted";
    case HTDP_NOT_FOUND:
      return "not_found";
    case HTDP_UNAVAILABLE:
      return "unavailable";
    case HTDP_INTERNAL:
      return "internal";
    case HTDP_CHECK_FAILED:
      return "check_failed";
  }
  return "unknown";
}

void htdp_string_free(char* s) { delete[] s; }

htdp_status htdp_config_new(htdp_config** out) {
  if (out == nullptr) return Error(HTDP_INVALID_ARGUMENT, "null output");
  return Guarded([&] {
    *out = new htdp_config();
    return Report(absl::OkStatus());
  });
}

void htdp_config_free(htdp_config* config) { delete config; }

htdp_status htdp_config_merge_file(htdp_config* config, const char* path) {
  if (config == nullptr || path == nullptr) {
    return Error(HTDP_INVALID_ARGUMENT, "null argument");
  }
  return Guarded([&] { return Report(config->builder.MergeFile(path)); });
}

htdp_status htdp_config_set(htdp_config* config, const char* key,
                            const char* value) {
  if (config == nullptr || key == nullptr || value == nullptr) {
    return Error(HTDP_INVALID_ARGUMENT, "null argument");
  }
  return Guarded([&] { return Report(config->builder.Set(key, value)); });
}

htdp_status htdp_config_set_assignment(htdp_config* config,
                                       const char* assignment) {
  if (config == nullptr || assignment == nullptr) {
    return Error(HTDP_INVALID_ARGUMENT, "null argument");
  }
  return Guarded(
      [&] { return Report(config->builder.SetAssignment(assignment)); });
}

htdp_status htdp_config_to_json(const htdp_config* config, char** out_json) {
  if (config == nullptr || out_json == nullptr) {
    return Error(HTDP_INVALID_ARGUMENT, "null argument");
  }
  return Guarded([&] {
    absl::StatusOr<htdp::ExperimentConfig> cfg = config->builder.Build();
    if (!cfg.ok()) return Report(cfg.status());
    *out_json = Dup(config->builder.settings().dump(2));
    return Report(absl::OkStatus());
  });
}

htdp_status htdp_run_experiment(const htdp_config* config, htdp_log_fn log,
                                void* user, int64_t* rows_out) {
  if (config == nullptr) return Error(HTDP_INVALID_ARGUMENT, "null config");
  return Guarded([&] {
    absl::StatusOr<htdp::ExperimentConfig> cfg = config->builder.Build();
    if (!cfg.ok()) return Report(cfg.status());
    htdp::LogFn logger;
    if (log != nullptr) {
      logger = [&](const std::string& msg) { log(msg.c_str(), user); };
    }
    auto rows = htdp::RunExperimentToFiles(*cfg, logger);
    if (!rows.ok()) return Report(rows.status());
    if (rows_out != nullptr) *rows_out = static_cast<int64_t>(rows->size());
    return Report(absl::OkStatus());
  });
}

htdp_status htdp_probe_sensitivity(const htdp_config* config,
                                   char** summary_json) {
  if (config == nullptr) return Error(HTDP_INVALID_ARGUMENT, "null config");
  return Guarded([&] {
    absl::StatusOr<htdp::ExperimentConfig> cfg = config->builder.Build();
    if (!cfg.ok()) return Report(cfg.status());
    const htdp::ProbeConfig probe = htdp::ProbeConfigFrom(*cfg);
    absl::StatusOr<htdp::ProbeReport> report = htdp::SensitivityProbe(probe);
    if (!report.ok()) return Report(report.status());
    if (!cfg->probe_output_path.empty()) {
      std::ofstream out(cfg->probe_output_path);
      if (!out) {
        return Error(HTDP_UNAVAILABLE, "cannot open " + cfg->probe_output_path);
      }
      htdp::WriteProbeCsv(*report, out);
    }
    const double b1 =
        report->pairs.empty() ? 0.0 : report->pairs[0].stage1_bound;
    const double b2 =
        report->pairs.empty() ? 0.0 : report->pairs[0].stage2_bound;
    if (summary_json != nullptr) {
      json j = {{"pairs", report->pairs.size()},
                {"loss", htdp::LossKindName(probe.loss)},
                {"stage1_bound", b1},
                {"stage2_bound", b2},
                {"max_stage1_ratio", report->max_stage1_ratio},
                {"max_stage2_ratio", report->max_stage2_ratio},
                {"violations", report->violations},
                {"uncertified", report->uncertified}};
      *summary_json = Dup(j.dump(2));
    }
    if (report->violations > 0 || report->uncertified > 0) {
      return Error(HTDP_CHECK_FAILED,
                   std::to_string(report->violations) + " violations, " +
                       std::to_string(report->uncertified) + " uncertified");
    }
    return Report(absl::OkStatus());
  });
}

htdp_status htdp_gen_instance(const htdp_config* config, const char* data_path,
                              char** spec_json) {
  if (config == nullptr) return Error(HTDP_INVALID_ARGUMENT, "null config");
  return Guarded([&] {
    absl::StatusOr<htdp::ExperimentConfig> cfg = config->builder.Build();
    if (!cfg.ok()) return Report(cfg.status());
    if (cfg->n.empty() || cfg->d.empty() || cfg->epsilon.empty()) {
      return Error(HTDP_INVALID_ARGUMENT, "grid has no cell");
    }
    auto inst = htdp::GenerateInstance(*cfg, cfg->n[0], cfg->d[0],
                                       cfg->epsilon[0], cfg->seed_base);
    if (!inst.ok()) return Report(inst.status());
    if (data_path != nullptr) {
      if (absl::Status s = htdp::WriteDatasetCsvFile(inst->data, data_path);
          !s.ok()) {
        return Report(s);
      }
    }
    if (spec_json != nullptr) {
      *spec_json = Dup(htdp::InstanceSpecToJson(inst->spec).dump(2));
    }
    return Report(absl::OkStatus());
  });
}

htdp_status htdp_verify(const htdp_config* config, const char* only,
                        htdp_log_fn log, void* user, char** report_json) {
  if (config == nullptr) return Error(HTDP_INVALID_ARGUMENT, "null config");
  return Guarded([&] {
    absl::StatusOr<htdp::ExperimentConfig> cfg = config->builder.Build();
    if (!cfg.ok()) return Report(cfg.status());
    htdp::VerifyOptions options;
    options.seed = cfg->seed_base;
    options.probe = htdp::ProbeConfigFrom(*cfg);
    options.probe_pairs = cfg->probe_pairs;
    if (only != nullptr && *only != '\0') {
      options.only = absl::StrSplit(only, ',', absl::SkipEmpty());
    }
    auto results =
        htdp::RunVerifySuites(options, [&](const htdp::SuiteResult& r) {
          if (log == nullptr) return;
          const std::string line = std::string(r.passed ? "PASS " : "FAIL ") +
                                   r.name + " (" + r.detail + ")";
          log(line.c_str(), user);
        });
    if (results.empty()) {
      return Error(HTDP_INVALID_ARGUMENT, "no suite matches the selection");
    }
    json arr = json::array();
    int failed = 0;
    for (const htdp::SuiteResult& r : results) {
      arr.push_back({{"name", r.name},
                     {"passed", r.passed},
                     {"detail", r.detail},
                     {"seconds", r.seconds}});
      if (!r.passed) ++failed;
    }
    if (report_json != nullptr) *report_json = Dup(arr.dump(2));
    if (failed > 0) {
      return Error(HTDP_CHECK_FAILED,
                   std::to_string(failed) + " suite(s) failed");
    }
    return Report(absl::OkStatus());
  });
}

htdp_status htdp_dataset_new(int dim, htdp_dataset** out) {
  if (out == nullptr || dim < 1) {
    return Error(HTDP_INVALID_ARGUMENT, "invalid dimension or null output");
  }
  return Guarded([&] {
    *out = new htdp_dataset();
    (*out)->data.dim = dim;
    return Report(absl::OkStatus());
  });
}

htdp_status htdp_dataset_load_csv(const char* path, htdp_dataset** out) {
  if (path == nullptr || out == nullptr) {
    return Error(HTDP_INVALID_ARGUMENT, "null argument");
  }
  return Guarded([&] {
    absl::StatusOr<htdp::Dataset> data = htdp::ReadDatasetCsvFile(path);
    if (!data.ok()) return Report(data.status());
    *out = new htdp_dataset{*std::move(data)};
    return Report(absl::OkStatus());
  });
}

void htdp_dataset_free(htdp_dataset* data) { delete data; }

htdp_status htdp_dataset_add(htdp_dataset* data, const double* a, double b) {
  if (data == nullptr || a == nullptr) {
    return Error(HTDP_INVALID_ARGUMENT, "null argument");
  }
  return Guarded([&] {
    htdp::Sample z;
    z.a = Eigen::Map<const htdp::Vector>(a, data->data.dim);
    z.b = b;
    if (!z.a.allFinite() || !std::isfinite(b)) {
      return Error(HTDP_INVALID_ARGUMENT, "sample must be finite");
    }
    data->data.samples.push_back(std::move(z));
    return Report(absl::OkStatus());
  });
}

int htdp_dataset_size(const htdp_dataset* data) {
  return data == nullptr ? 0 : data->data.size();
}

int htdp_dataset_dim(const htdp_dataset* data) {
  return data == nullptr ? 0 : data->data.dim;
}

htdp_status htdp_erm_solve(const htdp_dataset* data, const char* options_json,
                           uint64_t seed, char** report_json) {
  if (data == nullptr || report_json == nullptr) {
    return Error(HTDP_INVALID_ARGUMENT, "null argument");
  }
  return Guarded([&]() -> htdp_status {
    absl::StatusOr<json> j = ParseOptions(options_json);
    if (!j.ok()) return Report(j.status());
    if (absl::Status s = CheckKeys(
            *j, {"loss", "solver", "epsilon", "lambda", "radius", "w0", "C",
                 "k", "G_k", "G_2", "max_iterations", "smoothness"});
        !s.ok()) {
      return Report(s);
    }
    absl::StatusOr<CommonOptions> common = ParseCommon(*j);
    if (!common.ok()) return Report(common.status());
    const int d = data->data.dim;
    absl::StatusOr<double> lambda = Opt<double>(*j, "lambda", 1.0);
    if (!lambda.ok()) return Report(lambda.status());
    htdp::Vector w0 = htdp::Vector::Zero(d);
    if (j->contains("w0")) {
      absl::StatusOr<std::vector<double>> v =
          Opt<std::vector<double>>(*j, "w0", {});
      if (!v.ok()) return Report(v.status());
      if (static_cast<int>(v->size()) != d) {
        return Error(HTDP_INVALID_ARGUMENT, "w0 has the wrong dimension");
      }
      w0 = Eigen::Map<const htdp::Vector>(v->data(), d);
    }
    auto W = htdp::ConvexDomain::Ball(htdp::Vector::Zero(d), common->radius);
    if (!W.ok()) return Report(W.status());
    auto inst = htdp::ErmInstance::Create(
        data->data, htdp::LossModel(common->loss), *W, common->moment,
        common->epsilon, *lambda, w0, common->C);
    if (!inst.ok()) return Report(inst.status());
    htdp::Rng rng(seed);
    auto report = htdp::RunErm(common->solver, *inst, rng, common->erm);
    if (!report.ok()) return Report(report.status());
    *report_json = Dup(htdp::ErmReportToJson(*report).dump(2));
    return Report(absl::OkStatus());
  });
}

htdp_status htdp_sco_solve(const htdp_dataset* data, const char* options_json,
                           uint64_t seed, char** result_json) {
  if (data == nullptr || result_json == nullptr) {
    return Error(HTDP_INVALID_ARGUMENT, "null argument");
  }
  return Guarded([&]() -> htdp_status {
    absl::StatusOr<json> j = ParseOptions(options_json);
    if (!j.ok()) return Report(j.status());
    if (absl::Status s = CheckKeys(
            *j, {"loss", "solver", "epsilon", "delta", "radius", "lambda1", "J",
                 "C", "k", "G_k", "G_2", "max_iterations", "smoothness"});
        !s.ok()) {
      return Report(s);
    }
    absl::StatusOr<CommonOptions> common = ParseCommon(*j);
    if (!common.ok()) return Report(common.status());
    htdp::ScoConfig cfg;
    cfg.n = data->data.size();
    cfg.d = data->data.dim;
    cfg.epsilon = common->epsilon;
    cfg.solver = common->solver;
    cfg.moment = common->moment;
    cfg.erm_options = common->erm;
    cfg.C_override = common->C;
    absl::StatusOr<double> delta = Opt<double>(*j, "delta", 0.1);
    absl::StatusOr<double> lambda1 = Opt<double>(*j, "lambda1", 0.0);
    if (!delta.ok()) return Report(delta.status());
    if (!lambda1.ok()) return Report(lambda1.status());
    cfg.delta = *delta;
    cfg.lambda1 = *lambda1;
    if (j->contains("J")) {
      absl::StatusOr<int> J = Opt<int>(*j, "J", 0);
      if (!J.ok()) return Report(J.status());
      cfg.J_override = *J;
    }
    auto W =
        htdp::ConvexDomain::Ball(htdp::Vector::Zero(cfg.d), common->radius);
    if (!W.ok()) return Report(W.status());
    htdp::Rng rng(seed);
    auto result = htdp::PopLocalize(data->data, htdp::LossModel(common->loss),
                                    *W, cfg, rng);
    if (!result.ok()) return Report(result.status());
    json out;
    out["output"] = std::vector<double>(
        result->output.data(), result->output.data() + result->output.size());
    out["certified"] = result->certified;
    out["phases"] = result->schedule.T;
    out["repetitions"] = result->schedule.J;
    out["lambda1"] = result->schedule.lambda1;
    out["active_phases"] = result->schedule.active_phases();
    *result_json = Dup(out.dump(2));
    return Report(absl::OkStatus());
  });
}

}  // extern "C"
