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

#ifndef HTDP_STATUS_MACROS_H_
#define HTDP_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define HTDP_STATUS_CONCAT_INNER_(x, y) x##y
#define HTDP_STATUS_CONCAT_(x, y) HTDP_STATUS_CONCAT_INNER_(x, y)

#define HTDP_RETURN_IF_ERROR(expr)               \
  do {                                           \
    const absl::Status _htdp_status = (expr);    \
    if (!_htdp_status.ok()) return _htdp_status; \
  } while (0)

#define HTDP_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                                \
  if (!statusor.ok()) return statusor.status();           \
  lhs = std::move(statusor).value()

#define HTDP_ASSIGN_OR_RETURN(lhs, rexpr) \
  HTDP_ASSIGN_OR_RETURN_IMPL_(            \
      HTDP_STATUS_CONCAT_(_htdp_statusor_, __LINE__), lhs, rexpr)

#endif  // HTDP_STATUS_MACROS_H_
