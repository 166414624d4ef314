// Copyright 2026 The stein-lab Authors
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

#pragma once

#include <map>
#include <string>
#include <vector>

namespace steinlab {

enum class Status { Pass, Fail, Inconclusive, Inapplicable };

const char* status_name(Status s);

// One verified inequality lhs <= rhs (or a residual check with rhs the tolerance).
struct CheckRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  Status status = Status::Pass;
  std::map<std::string, double> certificates;
  std::map<std::string, std::string> notes;
  double runtime_ms = 0.0;
  std::string repro;
};

// Decide lhs <= rhs + tol from certified brackets [lo, hi] of each side.
Status decide_leq(double lhs_lo, double lhs_hi, double rhs_lo, double rhs_hi, double tol);
CheckRecord make_leq(const std::string& name, double lhs, double rhs, double tol);
CheckRecord make_bracketed_leq(const std::string& name, double lhs_lo, double lhs_hi, double rhs_lo,
                               double rhs_hi, double tol);

}  // namespace steinlab
