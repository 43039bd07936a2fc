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

// Self-contained invariant suites run by the `verify` subcommand.

#ifndef HTDP_VERIFY_H_
#define HTDP_VERIFY_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "htdp/bench.h"

namespace htdp {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  uint64_t seed = 0;
  // Neighboring pairs per loss kind in the sensitivity suite.
  int probe_pairs = 200;
  ProbeConfig probe;
  // Suite-name prefixes to run; empty runs everything.
  std::vector<std::string> only;
};

std::vector<std::string> VerifySuiteNames();

// Runs the selected suites in a fixed order. progress (if set) is called
// after each suite.
std::vector<SuiteResult> RunVerifySuites(
    const VerifyOptions& options,
    const std::function<void(const SuiteResult&)>& progress = {});

// Kolmogorov–Smirnov statistic of samples against a continuous CDF, and the
// asymptotic p-value.
double KsStatistic(std::vector<double> samples,
                   const std::function<double(double)>& cdf);
double KsPValue(double statistic, int n);

// CDF of Gamma(shape, scale) for integer shape.
double GammaCdfIntegerShape(int shape, double scale, double x);

}  // namespace htdp

#endif  // HTDP_VERIFY_H_
