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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "steinlab/linalg.hpp"

namespace steinlab {

struct FreeFamily {
  int d = 0;
  std::map<int, std::vector<Mat>> levels;
  double c = 0.0;
  std::string rule;  // "product", "explicit" or "sampled-SEP"
  std::optional<std::uint64_t> seed;
  bool inner_approximation = false;

  const std::vector<Mat>& level(int n) const;
  int max_level() const;
  Mat sigma0() const;  // uniform level-1 mixture
};

FreeFamily build_product_family(const std::vector<Mat>& level1, int max_level);
FreeFamily make_explicit_family(int d, std::map<int, std::vector<Mat>> levels);
FreeFamily build_sep_family(int dA, int dB, int sample_count, std::uint64_t seed, int max_level);

// Drops generators within trace distance tol of an earlier one.
std::vector<Mat> deduplicate(const std::vector<Mat>& gens, double tol = 1e-10);

struct HullDistance {
  double residual;  // Frobenius distance to the hull
  std::vector<double> weights;
};
HullDistance hull_distance(const Mat& tau, const std::vector<Mat>& gens, double tol = 1e-8,
                           int max_iterations = 20000);

struct AxiomResult {
  int axiom;
  bool pass;
  double residual;
  std::string detail;
};
struct AxiomReport {
  std::vector<AxiomResult> results;
  bool all_pass() const;
  const AxiomResult& axiom(int a) const;
};
AxiomReport check_axioms(const FreeFamily& family, const std::vector<int>& levels_to_check = {},
                         double tol = 1e-6);

}  // namespace steinlab
