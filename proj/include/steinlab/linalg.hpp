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

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace steinlab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Global numerical tolerances. Mutable so tools can pass --tol through.
struct Tolerances {
  double spectrum = 1e-10;
  double normalization = 1e-9;
  double hermitian = 1e-12;
};
Tolerances& tolerances();

struct HermitianSpectrum {
  RVec values;  // descending
  Mat vectors;  // columns, matching values
};

double max_abs(const Mat& x);
bool is_hermitian(const Mat& x);
void require_square(const Mat& x, const char* what);
void require_hermitian(const Mat& x, const char* what);
void require_psd(const Mat& x, const char* what);
void require_state(const Mat& x, const char* what);
Mat hermitian_part(const Mat& x);

HermitianSpectrum hermitian_spectrum(const Mat& x);
Mat reconstruct(const HermitianSpectrum& s);

// Apply f to the eigenvalues of a Hermitian matrix.
template <class F>
Mat spectral_apply(const HermitianSpectrum& s, F f) {
  RVec fv(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) fv(i) = f(s.values(i));
  return s.vectors * fv.asDiagonal() * s.vectors.adjoint();
}

double trace_positive_part(const Mat& x);
Mat positive_part(const Mat& x);
// Projector onto the eigenspace with eigenvalue > threshold.
Mat positive_projector(const Mat& x, double threshold = 0.0);
Mat psd_sqrt(const Mat& x);

double trace_norm(const Mat& x);
double operator_norm(const Mat& x);
double fidelity(const Mat& rho, const Mat& sigma);
double trace_distance(const Mat& rho, const Mat& sigma);
double lambda_min(const Mat& x);
double lambda_max(const Mat& x);

Mat tensor(const Mat& x, const Mat& y);
Mat tensor_power(const Mat& x, int k);
Vec tensor(const Vec& x, const Vec& y);
Mat partial_trace(const Mat& x, const std::vector<int>& dims,
                  const std::vector<int>& keep);
Mat projector(const Vec& v);

// Index map of U_pi on (C^d)^{\otimes N}: |x_1..x_N> -> |x_{perm[0]}..x_{perm[N-1]}>.
std::vector<std::uint32_t> permutation_index_map(int d, int n,
                                                 const std::vector<int>& perm);
Mat permute_subsystems(const Mat& x, int d, int n, const std::vector<int>& perm);
Mat symmetrize(const Mat& x, int d, int n);
Mat symmetrize_serial(const Mat& x, int d, int n);
// max over adjacent transpositions of |U X U^dag - X|_max.
double permutation_residual(const Mat& x, int d, int n);

// (sqrt(omega) (x) 1)|Phi>^{\otimes n}, reordered to (AE)^n.
Vec purify_symmetric(const Mat& omega, int d, int n);

long long ipow(long long base, int exp);

}  // namespace steinlab
