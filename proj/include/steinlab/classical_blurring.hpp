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
#include <vector>

#include "steinlab/divergences.hpp"
#include "steinlab/free_sets.hpp"
#include "steinlab/random.hpp"
#include "steinlab/report.hpp"
#include "steinlab/types.hpp"

namespace steinlab {

// Permutation-invariant distribution on X^n, stored as type-class masses.
struct SymmetricDistribution {
  std::shared_ptr<const TypeIndex> index;
  std::vector<double> weights;

  int n() const { return index->n(); }
  int alphabet_size() const { return index->alphabet_size(); }
  double mass(const TypeVector& t) const;
};

SymmetricDistribution make_symmetric(int n, int alphabet_size, std::vector<double> weights);
// Type-space view of p^{\otimes n}.
SymmetricDistribution iid_types(const Distribution& p, int n);
double ball_mass(const SymmetricDistribution& p, const Distribution& s, double delta);

struct BlurKernel {
  int n = 0;
  int m = 0;
  int alphabet_size = 0;
  std::shared_ptr<const TypeIndex> index;
  RMat k;  // k(t, u) = K[t | u]
};

BlurKernel blur_kernel(int n, int m, int alphabet_size);
BlurKernel blur_kernel_serial(int n, int m, int alphabet_size);
SymmetricDistribution apply_blur(const BlurKernel& kernel, const SymmetricDistribution& p);

double typicality_mass(const Distribution& p, int n, double delta);
double delta_n(int n, int alphabet_size, double eta);
int blur_m(int n, double delta);  // ceil(2 delta n)

// D_max^eps between symmetric distributions (type-space smoothing).
DivergenceResult d_max_smoothed_types(const SymmetricDistribution& p, const SymmetricDistribution& q, double eps);

CheckRecord check_blurring_lemma(const SymmetricDistribution& p, const SymmetricDistribution& q,
                                 const Distribution& s, double delta, double eta);

// Random instance: p concentrated (1-eta) on the delta-ball around s, q arbitrary.
struct BlurringInstance {
  SymmetricDistribution p;
  SymmetricDistribution q;
  Distribution s;
  double delta = 0.0;
  double eta = 0.0;
};
BlurringInstance random_blurring_instance(Rng& rng, int n, int alphabet_size, double delta, double eta);

// Classical product family on type space: one generator per multiset of level-1 generators.
struct TypeSpaceFamily {
  int n = 0;
  std::shared_ptr<const TypeIndex> index;
  std::vector<std::vector<double>> generators;
  double c = 0.0;
};
TypeSpaceFamily type_space_family(const FreeFamily& family, int n);

struct ClassicalSteinTerms {
  DivergenceResult lhs;          // D_max^eta(p^n || F_n)
  DivergenceResult smoothed;     // D_max^eps(p^n || F_n)
  double log_term = 0.0;         // log 1/(1-eps-eta)
  double g_term = 0.0;           // 2n g((2 delta_n + 1/n)|X|)
  double c_term = 0.0;           // (2n delta_n + 1)|X| log 1/c
  double delta = 0.0;
  int m = 0;
  std::vector<CheckRecord> records;  // main inequality first, then proof-chain steps
};
ClassicalSteinTerms check_classical_gsl(const Distribution& p, const FreeFamily& family, int n, double eps,
                                        double eta);

}  // namespace steinlab
