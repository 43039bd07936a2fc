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

#include <cstdio>
#include <fstream>
#include <string>

#include "gtest/gtest.h"

namespace htdp {
namespace {

std::string TempPath(const std::string& name) {
  return ::testing::TempDir() + "/" + name;
}

TEST(ConfigTest, DefaultsParse) {
  auto cfg = ConfigBuilder().Build();
  ASSERT_TRUE(cfg.ok()) << cfg.status();
  EXPECT_EQ(cfg->instance_kind, GeneratorKind::kParetoLinear);
  EXPECT_EQ(cfg->solver, ErmSolverKind::kDoubleOutputPert);
  EXPECT_EQ(cfg->n, std::vector<int>({1024}));
  EXPECT_EQ(cfg->seeds, 1);
  EXPECT_FALSE(cfg->J.has_value());
  EXPECT_FALSE(cfg->C.has_value());
  EXPECT_TRUE(cfg->record_runtime);
  EXPECT_EQ(cfg->probe_pairs, 200);
  EXPECT_EQ(cfg->probe_m, 1);
  EXPECT_DOUBLE_EQ(cfg->probe_lambda, 2.5);
}

TEST(ConfigTest, EveryDefaultKeyIsRecognized) {
  const nlohmann::json defaults = DefaultConfigJson();
  EXPECT_TRUE(ParseConfig(defaults).ok());
  for (auto it = defaults.begin(); it != defaults.end(); ++it) {
    EXPECT_TRUE(ConfigBuilder().MergeJson({{it.key(), it.value()}}).ok())
        << it.key();
  }
}

TEST(ConfigTest, UnknownKeyRejected) {
  ConfigBuilder b;
  EXPECT_EQ(b.Set("grid.size", "3").code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(ParseConfig({{"bogus", 1}}).ok());
}

TEST(ConfigTest, ScalarsWidenToLists) {
  auto cfg = ParseConfig({{"grid.n", 4096}, {"grid.epsilon", {0.5, 2.0}}});
  ASSERT_TRUE(cfg.ok());
  EXPECT_EQ(cfg->n, std::vector<int>({4096}));
  EXPECT_EQ(cfg->epsilon, std::vector<double>({0.5, 2.0}));
}

TEST(ConfigTest, OptionalOverridesAndKinds) {
  auto cfg = ParseConfig({{"solver.J", 5},
                          {"solver.C", 2.5},
                          {"solver.kind", "em_pgm"},
                          {"instance.kind", "two_point"},
                          {"probe.kind", "absolute"}});
  ASSERT_TRUE(cfg.ok()) << cfg.status();
  EXPECT_EQ(cfg->J, 5);
  EXPECT_EQ(cfg->C, 2.5);
  EXPECT_EQ(cfg->solver, ErmSolverKind::kEmPgm);
  EXPECT_EQ(cfg->instance_kind, GeneratorKind::kTwoPoint);
  EXPECT_EQ(cfg->probe_loss, LossKind::kAbsolute);
  EXPECT_FALSE(ParseConfig({{"solver.kind", "sgd"}}).ok());
  EXPECT_FALSE(ParseConfig({{"instance.kind", "gaussian"}}).ok());
}

TEST(ConfigTest, TypeAndRangeErrors) {
  EXPECT_FALSE(ParseConfig({{"grid.n", "many"}}).ok());
  EXPECT_FALSE(ParseConfig({{"seeds", -1}}).ok());
  EXPECT_FALSE(ParseConfig({{"solver.max_iterations", -5}}).ok());
  EXPECT_FALSE(ParseConfig({{"probe.m", 0}}).ok());
}

TEST(ConfigTest, PrecedenceCliOverFileOverDefaults) {
  const std::string path = TempPath("cfg.json");
  {
    std::ofstream f(path);
    f << R"({"seeds": 4, "grid.n": [2048, 4096], "output.path": "a.csv"})";
  }
  ConfigBuilder b;
  ASSERT_TRUE(b.MergeFile(path).ok());
  ASSERT_TRUE(b.SetAssignment("seeds=7").ok());
  ASSERT_TRUE(b.SetAssignment("output.path=out/run.csv").ok());
  auto cfg = b.Build();
  ASSERT_TRUE(cfg.ok());
  EXPECT_EQ(cfg->seeds, 7);
  EXPECT_EQ(cfg->n, std::vector<int>({2048, 4096}));
  EXPECT_EQ(cfg->output_path, "out/run.csv");
  EXPECT_EQ(cfg->d, std::vector<int>({1}));
  std::remove(path.c_str());
}

TEST(ConfigTest, FileErrors) {
  ConfigBuilder b;
  EXPECT_EQ(b.MergeFile(TempPath("missing.json")).code(),
            absl::StatusCode::kNotFound);
  const std::string path = TempPath("broken.json");
  {
    std::ofstream f(path);
    f << "{seeds: 4";
  }
  EXPECT_EQ(b.MergeFile(path).code(), absl::StatusCode::kInvalidArgument);
  std::remove(path.c_str());
  EXPECT_FALSE(b.SetAssignment("novalue").ok());
  EXPECT_FALSE(b.SetAssignment("=3").ok());
}

TEST(ConfigTest, StringValuesNeedNoQuoting) {
  ConfigBuilder b;
  ASSERT_TRUE(b.Set("solver.kind", "direct_extension").ok());
  ASSERT_TRUE(b.Set("output.record_runtime", "false").ok());
  auto cfg = b.Build();
  ASSERT_TRUE(cfg.ok());
  EXPECT_EQ(cfg->solver, ErmSolverKind::kDirectExtension);
  EXPECT_FALSE(cfg->record_runtime);
}

}  // namespace
}  // namespace htdp
