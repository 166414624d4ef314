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

#include <boost/rational.hpp>

#include "steinlab/types.hpp"

namespace steinlab {

using BigRational = boost::rational<BigCount>;

// Logarithms are base 2 unless stated otherwise.
double binary_entropy(double p);
// g(x) = (x+1) log(x+1) - x log x, g(0) = 0.
double bosonic_g(double x);

double hyp_pmf(int N, int K, int n, int k);
BigRational hyp_pmf_rational(int N, int K, int n, int k);
double to_double(const BigRational& r);

double tail_mass(int N, int K, int n, double u);
struct TailBounds {
  double basic;
  double tight;
};
TailBounds tail_bounds(int N, int K, int n, double u);

// Pmf of drawing a multiset of type t (over n) from an urn of type s (over N).
double multivariate_pmf(const TypeVector& s, const TypeVector& t);
double multivariate_pmf_ratio(const TypeVector& s, const TypeVector& t);
BigRational multivariate_pmf_rational(const TypeVector& s, const TypeVector& t);
// 2^{-n g(N/n - 1)}; throws unless nt <= Ns elementwise.
double hyp_lower_bound(const TypeVector& s, const TypeVector& t);

}  // namespace steinlab
