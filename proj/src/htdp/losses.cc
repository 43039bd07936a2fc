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

#include "htdp/losses.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace htdp {

absl::StatusOr<LossKind> ParseLossKind(std::string_view name) {
  if (name == "linear") return LossKind::kLinear;
  if (name == "hinge") return LossKind::kHinge;
  if (name == "absolute") return LossKind::kAbsolute;
  return absl::InvalidArgumentError(absl::StrCat("unknown loss kind: ", std::string(name)));
}

std::string_view LossKindName(LossKind kind) {
  switch (kind) {
    case LossKind::kLinear:
      return "linear";
    case LossKind::kHinge:
      return "hinge";
    case LossKind::kAbsolute:
      return "absolute";
  }
  return "unknown";
}

double LossModel::Value(const Eigen::Ref<const Vector>& w,
                        const Sample& z) const {
  const double s = z.a.dot(w) + z.b;
  switch (kind_) {
    case LossKind::kLinear:
      return s;
    case LossKind::kHinge:
      return s > 0.0 ? s : 0.0;
    case LossKind::kAbsolute:
      return std::abs(s);
  }
  return s;
}

std::pair<double, double> LossModel::SubdifferentialCoefficients(
    const Eigen::Ref<const Vector>& w, const Sample& z) const {
  const double s = z.a.dot(w) + z.b;
  switch (kind_) {
    case LossKind::kLinear:
      return {1.0, 1.0};
    case LossKind::kHinge:
      if (s > 0.0) return {1.0, 1.0};
      if (s < 0.0) return {0.0, 0.0};
      return {0.0, 1.0};
    case LossKind::kAbsolute:
      if (s > 0.0) return {1.0, 1.0};
      if (s < 0.0) return {-1.0, -1.0};
      return {-1.0, 1.0};
  }
  return {1.0, 1.0};
}

double LossModel::SubgradientCoefficient(const Eigen::Ref<const Vector>& w,
                                         const Sample& z) const {
  const auto [lo, hi] = SubdifferentialCoefficients(w, z);
  return std::clamp(0.0, lo, hi);
}

Vector LossModel::Subgradient(const Eigen::Ref<const Vector>& w,
                              const Sample& z) const {
  return SubgradientCoefficient(w, z) * z.a;
}

namespace {

absl::Status CheckDims(const Vector& w, const Sample& z) {
  if (w.size() != z.a.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("loss dimension mismatch: w has ", w.size(),
                     " coordinates, sample has ", z.a.size()));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<double> EvalLoss(const LossModel& model, const Vector& w,
                                const Sample& z) {
  if (absl::Status s = CheckDims(w, z); !s.ok()) return s;
  return model.Value(w, z);
}

absl::StatusOr<Vector> EvalSubgradient(const LossModel& model, const Vector& w,
                                       const Sample& z) {
  if (absl::Status s = CheckDims(w, z); !s.ok()) return s;
  return model.Subgradient(w, z);
}

double EmpiricalRisk(const LossModel& model, const Dataset& data,
                     const Vector& w) {
  double total = 0.0;
  for (const Sample& z : data.samples) total += model.Value(w, z);
  return data.samples.empty() ? 0.0 : total / data.size();
}

void WriteDatasetCsv(const Dataset& data, std::ostream& out) {
  for (int j = 0; j < data.dim; ++j) out << "a_" << (j + 1) << ",";
  out << "b\n";
  char buf[32];
  for (const Sample& z : data.samples) {
    for (int j = 0; j < data.dim; ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", z.a[j]);
      out << buf << ',';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", z.b);
    out << buf << '\n';
  }
}

absl::Status WriteDatasetCsvFile(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) return absl::UnavailableError(absl::StrCat("cannot open ", path));
  WriteDatasetCsv(data, out);
  if (!out) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

absl::StatusOr<Dataset> ReadDatasetCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    return absl::InvalidArgumentError("dataset CSV is empty");
  }
  std::vector<std::string> header =
      absl::StrSplit(absl::StripAsciiWhitespace(line), ',');
  if (header.size() < 2 || header.back() != "b") {
    return absl::InvalidArgumentError("dataset CSV header must end with b");
  }
  Dataset data;
  data.dim = static_cast<int>(header.size()) - 1;
  for (int j = 0; j < data.dim; ++j) {
    if (header[j] != absl::StrCat("a_", j + 1)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unexpected dataset column ", header[j]));
    }
  }
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    absl::string_view trimmed = absl::StripAsciiWhitespace(line);
    if (trimmed.empty()) continue;
    std::vector<absl::string_view> cells = absl::StrSplit(trimmed, ',');
    if (static_cast<int>(cells.size()) != data.dim + 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("row ", row, " has ", cells.size(), " cells"));
    }
    Sample z;
    z.a.resize(data.dim);
    for (int j = 0; j <= data.dim; ++j) {
      double v;
      if (!absl::SimpleAtod(cells[j], &v) || !std::isfinite(v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("row ", row, ": bad value '", cells[j], "'"));
      }
      if (j < data.dim) {
        z.a[j] = v;
      } else {
        z.b = v;
      }
    }
    data.samples.push_back(std::move(z));
  }
  return data;
}

absl::StatusOr<Dataset> ReadDatasetCsvFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ReadDatasetCsv(in);
}

}  // namespace htdp
