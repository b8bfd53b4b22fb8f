// Copyright 2026 The mixbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Checks every implemented bound against the exact union probability of a
// joint table, with phi and alpha replaced by the table's exact restricted
// coefficients.

#ifndef MIXBOUND_VALIDITY_H_
#define MIXBOUND_VALIDITY_H_

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mixbound/models.h"

namespace mixbound {

struct ValidityOptions {
  int max_past = kDefaultMaxPast;
  double tolerance = 1e-12;
  // Added to every bound before comparison; used to prove the checker fires.
  double fault = 0.0;
};

struct ValidityViolation {
  std::string bound;
  std::string setting;  // e.g. "L=2" or "i=0 n=1 L=1"
  double value;
  double exact;
};

struct ValidityResult {
  std::size_t checks = 0;
  std::vector<ValidityViolation> violations;
  // Smallest exact - bound seen over all checks.
  double tightest_gap = std::numeric_limits<double>::infinity();
  std::string tightest_bound;
  // Lags where exact alpha exceeded max_past and phi was used instead.
  std::size_t alpha_fallback_lags = 0;
};

ValidityResult CheckValidity(const JointTableModel& table,
                             const ValidityOptions& options = {});

}  // namespace mixbound

#endif  // MIXBOUND_VALIDITY_H_
