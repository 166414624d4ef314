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

#include "steinlab/report.hpp"

#include <cmath>
#include <limits>

namespace steinlab {

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Inconclusive:
      return "inconclusive";
    case Status::Inapplicable:
      return "inapplicable";
  }
  return "unknown";
}

Status decide_leq(double lhs_lo, double lhs_hi, double rhs_lo, double rhs_hi, double tol) {
  if (std::isnan(lhs_lo) || std::isnan(lhs_hi) || std::isnan(rhs_lo) || std::isnan(rhs_hi))
    return Status::Inconclusive;
  if (lhs_hi <= rhs_lo + tol) return Status::Pass;
  if (lhs_lo > rhs_hi + tol) return Status::Fail;
  return Status::Inconclusive;
}

CheckRecord make_leq(const std::string& name, double lhs, double rhs, double tol) {
  return make_bracketed_leq(name, lhs, lhs, rhs, rhs, tol);
}

CheckRecord make_bracketed_leq(const std::string& name, double lhs_lo, double lhs_hi, double rhs_lo,
                               double rhs_hi, double tol) {
  CheckRecord r;
  r.name = name;
  r.lhs = lhs_hi;
  r.rhs = rhs_lo;
  r.slack = (std::isinf(rhs_lo) && rhs_lo > 0) ? std::numeric_limits<double>::infinity() : rhs_lo - lhs_hi;
  r.status = decide_leq(lhs_lo, lhs_hi, rhs_lo, rhs_hi, tol);
  r.certificates["tolerance"] = tol;
  if (lhs_lo != lhs_hi) r.certificates["lhs_lower"] = lhs_lo;
  if (rhs_lo != rhs_hi) r.certificates["rhs_upper"] = rhs_hi;
  return r;
}

}  // namespace steinlab
