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

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "steinlab/linalg.hpp"

namespace steinlab {

using Distribution = std::vector<double>;

// Result of a divergence computation. Values are in bits.
struct DivergenceResult {
  double value = 0.0;
  bool infinite = false;
  // Set when an optimizer stopped before its tolerance; [lower, upper] is certified.
  bool approximate = false;
  double lower = 0.0;
  double upper = 0.0;
  // Duality gap or feasibility residual.
  double certificate = 0.0;
  std::optional<Mat> witness_operator;
  std::vector<double> weights;
  std::vector<double> smoothed;
  std::optional<double> threshold;
  bool monotone_trace = true;
  int iterations = 0;
  std::vector<std::string> notes;

  double as_double() const;
  static DivergenceResult infinity();
  static DivergenceResult exact(double v);
};

void require_distribution(const Distribution& p, const char* what);
Mat diag_matrix(const Distribution& p);
bool is_diagonal(const Mat& m);  // off-diagonal entries exactly zero

DivergenceResult umegaki(const Mat& rho, const Mat& sigma);
DivergenceResult d_max(const Mat& rho, const Mat& sigma);
DivergenceResult d_h(const Mat& rho, const Mat& sigma, double eps);
DivergenceResult dtilde_max(const Mat& rho, const Mat& sigma, double eps);

DivergenceResult umegaki_classical(const Distribution& p, const Distribution& q);
DivergenceResult d_max_classical(const Distribution& p, const Distribution& q);
DivergenceResult d_h_classical(const Distribution& p, const Distribution& q, double eps);
DivergenceResult dtilde_classical(const Distribution& p, const Distribution& q, double eps);
DivergenceResult d_max_smoothed_classical(const Distribution& p, const Distribution& q, double eps);
double total_variation(const Distribution& p, const Distribution& q);

struct HullOptions {
  int max_iterations = 10000;
  double gap_tolerance = 1e-6;
  bool away_steps = true;
  // bisection tolerance on lambda for the max-type hull divergences
  double lambda_tolerance = 1e-7;
};

DivergenceResult rel_ent_to_hull(const Mat& rho, const std::vector<Mat>& generators,
                                 const HullOptions& opt = {});
DivergenceResult d_max_to_hull(const Mat& rho, const std::vector<Mat>& generators,
                               const HullOptions& opt = {});
DivergenceResult dtilde_to_hull(const Mat& rho, const std::vector<Mat>& generators, double eps,
                                const HullOptions& opt = {});

// Certified minimization of a spectral function of A0 - sum_i w_i B_i over the simplex.
enum class SpectralKind { MaxEigen, PositivePart };
struct SpectralBounds {
  double upper;  // attained by weights
  double lower;  // certified by the dual operator
  std::vector<double> weights;
  Mat dual;
  int iterations = 0;
};
// Stops once upper <= decide_below (feasible), lower > decide_below (infeasible),
// upper - lower <= gap, or the iteration cap is hit.
SpectralBounds minimize_spectral(SpectralKind kind, const Mat& a0, const std::vector<Mat>& b,
                                 double decide_below, double gap, int max_iterations,
                                 std::vector<double> start = {});

Mat mixture(const std::vector<Mat>& generators, const std::vector<double>& w);

}  // namespace steinlab
