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

#include <memory>
#include <optional>
#include <vector>

#include "steinlab/divergences.hpp"
#include "steinlab/free_sets.hpp"
#include "steinlab/linalg.hpp"
#include "steinlab/report.hpp"
#include "steinlab/types.hpp"

namespace steinlab {

// Operator on Sym^n(C^d) in the type basis |n,t>, ordered as type_index(n, d).
struct SymTypeOperator {
  int n = 0;
  int d = 0;
  std::shared_ptr<const TypeIndex> index;
  Mat m;

  bool is_hermitian(double tol = 1e-12) const;
  cplx trace() const { return m.trace(); }
};

SymTypeOperator sym_zero(int n, int d);
SymTypeOperator sym_from_matrix(int n, int d, Mat m);
// |n,t><n,s|
SymTypeOperator sym_ketbra(int n, int d, const TypeVector& t, const TypeVector& s);

// Equal superposition over the type class, normalised.
Vec sym_basis_vector(int n, const TypeVector& t, int d);
// Columns are the basis vectors in type order (isometry Sym^n -> (C^d)^{\otimes n}).
Mat sym_isometry(int n, int d);
Mat embed(const SymTypeOperator& x);
SymTypeOperator unembed(const Mat& x, int n, int d);

struct SymOverlap {
  double coefficient = 0.0;  // zero when n t < r w
  TypeVector residual;       // type of the remaining n - r systems
};
// <x^r| n,t> for any sequence x^r of type w.
SymOverlap sym_overlap(const TypeVector& w, const TypeVector& t);

SymTypeOperator sym_partial_trace(const SymTypeOperator& x, int r);
// Pi_n (|0><0|^{\otimes r} (x) Tr_r X) Pi_n
SymTypeOperator gamma(const SymTypeOperator& x, int r);

struct KrausFamily {
  int n = 0;
  int r = 0;
  int d = 0;
  std::vector<TypeVector> labels;  // w in T_r
  std::vector<RMat> ops;           // M_{r,w} in the type basis
};
KrausFamily kraus_family(int n, int r, int d);
SymTypeOperator apply_kraus(const KrausFamily& k, const SymTypeOperator& x);
RMat kraus_gram(const KrausFamily& k);  // sum_w M^T M

// d_r(t) by its closed-form sum, and its natural logarithm.
std::vector<double> d_r_diag(int n, int r, int d);
std::vector<double> log_d_r_diag(int n, int r, int d);
// Trace-preserving Theta_{n,r} with Kraus operators M D_r^{-1/2}.
SymTypeOperator theta(const SymTypeOperator& x, int r);
KrausFamily theta_family(int n, int r, int d);

int blur_q_m(int n, double delta);  // floor(delta n)
void require_blur_delta(double delta);
// Sum_r H(n+m, m; n, r) Gamma_{n,r}(X), m = floor(delta n).
SymTypeOperator blur_q(const SymTypeOperator& x, double delta);
SymTypeOperator blur_q_serial(const SymTypeOperator& x, double delta);

// Tr_m S_{n+m}(X (x) rho^{\otimes m}) on (C^d)^{\otimes n}, m = floor(delta n).
Mat blur_rho(int n, double delta, const Mat& rho, const Mat& x);
Mat blur_rho_m(int n, int m, const Mat& rho, const Mat& x);

CheckRecord check_tail_filtering(const Mat& t, const Mat& v_basis, const Mat& z);
// Low-occupation block: max_{x != 0} n t(x) <= N.
bool low_occupation(const TypeVector& t, int big_n);
CheckRecord check_output_norm(const SymTypeOperator& x, int big_n, double delta);
// max d_r(t) over types with max_{x != 0} n t(x) >= N, against 3 exp(-N eta^2 / 2).
CheckRecord check_d_r_bound(int n, int r, int d, int big_n);

struct GqslChainTerms {
  int m = 0;
  DivergenceResult blurred;   // D_max(B^rho(rho_n) || F_n)
  DivergenceResult extended;  // D_max(rho_n (x) rho^{(x) m} || F_{n+m}), when level n+m exists
  DivergenceResult original;  // D_max(rho_n || F_n)
  double log_inv_c = 0.0;
  std::vector<CheckRecord> records;  // main inequality first
};
GqslChainTerms check_gqsl_chain(const Mat& rho, const FreeFamily& family, int n, double delta,
                                const std::optional<Mat>& rho_n = std::nullopt, double eta = 0.1);

// Tr(rho^{(x)n} - M avg_{delta in (0, Delta]} B^rho_{n,delta}(rho_n))_+ for each M. The delta
// average is exact: the map depends on delta only through floor(delta n).
std::vector<double> blurring_proxy(const Mat& rho, const Mat& rho_n, int n, double big_delta,
                                   const std::vector<double>& multipliers);

}  // namespace steinlab
