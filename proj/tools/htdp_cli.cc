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

// Command-line front end. Uses only the C interface.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "htdp/htdp.h"

namespace {

struct ConfigDeleter {
  void operator()(htdp_config* c) const { htdp_config_free(c); }
};
using ConfigPtr = std::unique_ptr<htdp_config, ConfigDeleter>;

struct StringDeleter {
  void operator()(char* s) const { htdp_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

constexpr int kExitCheckFailed = 1;
constexpr int kExitError = 2;

int Fail(htdp_status status) {
  std::fprintf(stderr, "error (%s): %s\n", htdp_status_name(status),
               htdp_last_error());
  return status == HTDP_CHECK_FAILED ? kExitCheckFailed : kExitError;
}

void LogToStderr(const char* message, void* /*user*/) {
  std::fprintf(stderr, "%s\n", message);
}

void PrintLine(const char* message, void* /*user*/) {
  std::printf("%s\n", message);
  std::fflush(stdout);
}

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
};

void AddCommon(CLI::App* app, CommonArgs& args) {
  app->add_option("-c,--config", args.config_path, "flat-key JSON config file")
      ->check(CLI::ExistingFile);
  app->add_option("-s,--set", args.overrides,
                  "override a config key, key=value (repeatable)");
}

// Defaults < file < --set, then the extra assignments.
htdp_status LoadConfig(const CommonArgs& args,
                       const std::vector<std::string>& extra, ConfigPtr& out) {
  htdp_config* raw = nullptr;
  if (htdp_status s = htdp_config_new(&raw); s != HTDP_OK) return s;
  out.reset(raw);
  if (!args.config_path.empty()) {
    if (htdp_status s = htdp_config_merge_file(raw, args.config_path.c_str());
        s != HTDP_OK) {
      return s;
    }
  }
  for (const std::string& a : args.overrides) {
    if (htdp_status s = htdp_config_set_assignment(raw, a.c_str());
        s != HTDP_OK) {
      return s;
    }
  }
  for (const std::string& a : extra) {
    if (htdp_status s = htdp_config_set_assignment(raw, a.c_str());
        s != HTDP_OK) {
      return s;
    }
  }
  return HTDP_OK;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private heavy-tailed stochastic convex optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(htdp_version()));

  CommonArgs run_args;
  std::string run_output;
  std::string run_log;
  CLI::App* run = app.add_subcommand("run", "run an experiment sweep");
  AddCommon(run, run_args);
  run->add_option("-o,--output", run_output, "result CSV (output.path)");
  run->add_option("--run-log", run_log, "per-call log CSV (output.run_log)");

  CommonArgs probe_args;
  std::string probe_output;
  CLI::App* probe = app.add_subcommand(
      "probe-sensitivity", "check empirical stage sensitivities");
  AddCommon(probe, probe_args);
  probe->add_option("-o,--output", probe_output,
                    "per-pair CSV (probe.output)");

  CommonArgs gen_args;
  std::string gen_data;
  CLI::App* gen = app.add_subcommand(
      "gen-instance", "generate the first grid cell's instance");
  AddCommon(gen, gen_args);
  gen->add_option("-d,--data", gen_data, "dataset CSV output path");

  CommonArgs verify_args;
  std::string verify_only;
  bool verify_list = false;
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suites");
  AddCommon(verify, verify_args);
  verify->add_option("--only", verify_only,
                     "comma-separated suite-name prefixes");
  verify->add_flag("--json", verify_list, "print the JSON report at the end");

  CommonArgs show_args;
  CLI::App* show =
      app.add_subcommand("show-config", "print the effective configuration");
  AddCommon(show, show_args);

  CLI11_PARSE(app, argc, argv);

  ConfigPtr config;
  if (run->parsed()) {
    std::vector<std::string> extra;
    if (!run_output.empty()) extra.push_back("output.path=" + run_output);
    if (!run_log.empty()) extra.push_back("output.run_log=" + run_log);
    if (htdp_status s = LoadConfig(run_args, extra, config); s != HTDP_OK) {
      return Fail(s);
    }
    int64_t rows = 0;
    if (htdp_status s =
            htdp_run_experiment(config.get(), LogToStderr, nullptr, &rows);
        s != HTDP_OK) {
      return Fail(s);
    }
    std::fprintf(stderr, "%lld rows\n", static_cast<long long>(rows));
    return 0;
  }
  if (probe->parsed()) {
    std::vector<std::string> extra;
    if (!probe_output.empty()) extra.push_back("probe.output=" + probe_output);
    if (htdp_status s = LoadConfig(probe_args, extra, config); s != HTDP_OK) {
      return Fail(s);
    }
    char* summary = nullptr;
    const htdp_status s = htdp_probe_sensitivity(config.get(), &summary);
    OwnedString owned(summary);
    if (summary != nullptr) std::printf("%s\n", summary);
    return s == HTDP_OK ? 0 : Fail(s);
  }
  if (gen->parsed()) {
    if (htdp_status s = LoadConfig(gen_args, {}, config); s != HTDP_OK) {
      return Fail(s);
    }
    char* spec = nullptr;
    const htdp_status s = htdp_gen_instance(
        config.get(), gen_data.empty() ? nullptr : gen_data.c_str(), &spec);
    OwnedString owned(spec);
    if (s != HTDP_OK) return Fail(s);
    std::printf("%s\n", spec);
    return 0;
  }
  if (verify->parsed()) {
    if (htdp_status s = LoadConfig(verify_args, {}, config); s != HTDP_OK) {
      return Fail(s);
    }
    char* report = nullptr;
    const htdp_status s = htdp_verify(config.get(), verify_only.c_str(),
                                      PrintLine, nullptr, &report);
    OwnedString owned(report);
    if (verify_list && report != nullptr) std::printf("%s\n", report);
    return s == HTDP_OK ? 0 : Fail(s);
  }
  if (show->parsed()) {
    if (htdp_status s = LoadConfig(show_args, {}, config); s != HTDP_OK) {
      return Fail(s);
    }
    char* json = nullptr;
    const htdp_status s = htdp_config_to_json(config.get(), &json);
    OwnedString owned(json);
    if (s != HTDP_OK) return Fail(s);
    std::printf("%s\n", json);
    return 0;
  }
  return kExitError;
}
