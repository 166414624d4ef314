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

#include <vector>

#include "steinlab/linalg.hpp"
#include "steinlab/quantum_blurring.hpp"
#include "steinlab/report.hpp"

namespace steinlab {

using Occupation = std::vector<int>;

// Operator on `modes` bosonic modes truncated at `cutoff` photons per mode. Basis order is
// lexicographic in the occupation vector, first mode most significant.
struct FockOperator {
  int modes = 1;
  int cutoff = 0;
  Mat m;

  long long dim() const { return m.rows(); }
};

long long fock_dim(int modes, int cutoff);
long long fock_index(const Occupation& h, int cutoff);
Occupation fock_occupation(long long i, int modes, int cutoff);
FockOperator fock_zero(int modes, int cutoff);
FockOperator fock_from_matrix(int modes, int cutoff, Mat m);
FockOperator fock_ketbra(const Occupation& h, const Occupation& k, int cutoff);
FockOperator vacuum(int modes, int cutoff);

struct CoherentState {
  Vec psi;            // normalised after truncation
  double slack = 0.0; // mass beyond the cutoff
};
CoherentState coherent_state(cplx alpha, int cutoff);

struct LossParams {
  double delta = 0.0;
  double lambda = 0.0;  // 1 / (1 + delta (1 + delta))
  double mu = 0.0;      // sqrt(1 + delta (1 + delta)) / (1 + delta)
};
LossParams loss_params(double delta);

// Pure loss on every mode. Exact on truncated inputs: occupations never increase.
FockOperator pure_loss(double lambda, const FockOperator& x);
// Single-mode Kraus operators sqrt((1/lambda - 1)^l / l!) a^l lambda^{N/2}, l = 0..cutoff.
std::vector<Mat> pure_loss_kraus(double lambda, int cutoff);
FockOperator damping(double mu, const FockOperator& x);
// (E_{lambda(delta)} o D_{mu(delta)}) on every mode.
FockOperator loss_damping(double delta, const FockOperator& x);

// U_n: |n,t> -> |n t(1), ..., n t(d-1)>. Entries beyond the cutoff are dropped and their
// absolute sum is written to `dropped`.
FockOperator lift(const SymTypeOperator& x, int cutoff, double* dropped = nullptr);
// U_n^dag X U_n; components with total occupation above n are annihilated.
SymTypeOperator unlift(const FockOperator& x, int n);
FockOperator lifted_blur(int n, double delta, const FockOperator& x);

double limit_entry(const Occupation& h, const Occupation& k, const Occupation& h2, const Occupation& k2,
                   double delta);
FockOperator limit_operator(const Occupation& h, const Occupation& k, double delta, int cutoff);

struct ConvergenceRow {
  int n = 0;
  double error = 0.0;  // trace-norm distance to the limit
};
struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  CheckRecord decreasing;  // e_{n_max} <= e_{n_min}
  CheckRecord threshold;   // e_{n_max} <= threshold
};
ConvergenceStudy convergence_study(const Occupation& h, const Occupation& k, double delta,
                                   const std::vector<int>& n_grid, double threshold = 0.05);

struct LambdaMapResult {
  FockOperator value;
  int nodes = 0;
  double doubling_change = 0.0;  // trace norm of the last node-doubling change
  bool consistent = false;       // doubling_change < tolerance
};
// Midpoint rule for int_0^Delta d delta / Delta (E o D)^{(x) modes}(X); nodes double from
// `quad_nodes` until the change is below `tolerance` or `max_nodes` is reached.
LambdaMapResult lambda_map(double big_delta, const FockOperator& x, int quad_nodes = 32, double tolerance = 1e-8,
                           int max_nodes = 8192);
FockOperator lambda_map_fixed(double big_delta, const FockOperator& x, int nodes);
FockOperator lambda_map_fixed_serial(double big_delta, const FockOperator& x, int nodes);

struct SupportReport {
  std::vector<double> multipliers;
  std::vector<double> f;  // Tr(|psi><psi| - M A)_+
  bool monotone = true;
  bool in_support = false;
  double kernel_overlap = 0.0;  // |<psi|phi>|^2 with phi the kernel component of psi
  Vec witness;                  // normalised kernel component when it is significant
  Status status = Status::Pass;
  std::string verdict;          // "IN-SUPPORT", "NOT-IN-SUPPORT" or "UNDECIDED"
};
SupportReport support_test(const Vec& psi, const Mat& a, const std::vector<double>& multipliers, double tol = 0.05);

struct VacuumExperiment {
  LambdaMapResult averaged;
  SupportReport support;
};
VacuumExperiment vacuum_support_experiment(const FockOperator& rho, double big_delta,
                                           const std::vector<double>& multipliers, int quad_nodes = 32);

struct CoherentCounterexample {
  double floor_loss = 0.0;      // 1 - exp(-lambda |alpha|^2), pure loss alone
  double floor_composed = 0.0;  // 1 - exp(-|alpha|^2 / (1 + delta)^2), loss after damping
  double slack = 0.0;
  SupportReport loss;
  SupportReport composed;
  CheckRecord loss_floor;
  CheckRecord composed_floor;
};
CoherentCounterexample coherent_counterexample(cplx alpha, double delta, int cutoff,
                                               const std::vector<double>& multipliers);

}  // namespace steinlab
