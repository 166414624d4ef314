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

#include "steinlab/hypergeometric.hpp"

#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "steinlab/linalg.hpp"

namespace steinlab {

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

double bosonic_g(double x) {
  if (x < 0.0) throw ValidationError("bosonic_g: negative argument");
  if (x == 0.0) return 0.0;
  return (x + 1) * std::log2(x + 1) - x * std::log2(x);
}

static void check_hyp(int N, int K, int n, int k) {
  if (N < 0 || K < 0 || K > N || n < 0 || n > N || k < 0 || k > n)
    throw ValidationError("hyp_pmf: parameters out of range");
}

double hyp_pmf(int N, int K, int n, int k) {
  check_hyp(N, K, n, k);
  if (k > K || n - k > N - K) return 0.0;
  return std::exp(log_binomial(K, k) + log_binomial(N - K, n - k) - log_binomial(N, n));
}

BigRational hyp_pmf_rational(int N, int K, int n, int k) {
  check_hyp(N, K, n, k);
  if (N > 60) throw SizeError("hyp_pmf_rational: exact path limited to N <= 60");
  return BigRational(binomial(K, k) * binomial(N - K, n - k), binomial(N, n));
}

double to_double(const BigRational& r) {
  using boost::multiprecision::cpp_bin_float_100;
  cpp_bin_float_100 a(r.numerator()), b(r.denominator());
  return static_cast<double>(a / b);
}

double tail_mass(int N, int K, int n, double u) {
  check_hyp(N, K, n, 0);
  if (n == 0) return 0.0;
  double s = 0.0;
  const double center = static_cast<double>(K) / N;
  for (int k = 0; k <= n; ++k)
    if (std::abs(static_cast<double>(k) / n - center) > u) s += hyp_pmf(N, K, n, k);
  return s;
}

TailBounds tail_bounds(int N, int /*K*/, int n, double u) {
  if (u <= 0) throw ValidationError("tail_bounds: u must be positive");
  TailBounds b;
  b.basic = 2.0 * std::exp(-2.0 * n * u * u);
  b.tight = (N > n) ? 2.0 * std::exp(-2.0 * double(n) * n * u * u / (N - n)) : 0.0;
  return b;
}

static void check_multi(const TypeVector& s, const TypeVector& t) {
  if (s.size() != t.size()) throw ValidationError("multivariate_pmf: alphabet mismatch");
  if (t.n > s.n) throw ValidationError("multivariate_pmf: need N >= n");
}

double multivariate_pmf(const TypeVector& s, const TypeVector& t) {
  check_multi(s, t);
  if (!leq_elementwise(t.counts, s.counts)) return 0.0;
  double l = -log_binomial(s.n, t.n);
  for (int x = 0; x < s.size(); ++x) l += log_binomial(s.counts[x], t.counts[x]);
  return std::exp(l);
}

double multivariate_pmf_ratio(const TypeVector& s, const TypeVector& t) {
  check_multi(s, t);
  if (!leq_elementwise(t.counts, s.counts)) return 0.0;
  std::vector<int> rest(s.size());
  for (int x = 0; x < s.size(); ++x) rest[x] = s.counts[x] - t.counts[x];
  const TypeVector r{s.n - t.n, rest};
  return std::exp(log_multinomial(t) + log_multinomial(r) - log_multinomial(s));
}

BigRational multivariate_pmf_rational(const TypeVector& s, const TypeVector& t) {
  check_multi(s, t);
  if (!leq_elementwise(t.counts, s.counts)) return BigRational(0);
  BigCount num = 1;
  for (int x = 0; x < s.size(); ++x) num *= binomial(s.counts[x], t.counts[x]);
  return BigRational(num, binomial(s.n, t.n));
}

double hyp_lower_bound(const TypeVector& s, const TypeVector& t) {
  check_multi(s, t);
  if (!leq_elementwise(t.counts, s.counts))
    throw ValidationError("hyp_lower_bound: requires nt <= Ns elementwise");
  if (t.n == 0) return 1.0;
  const double x = static_cast<double>(s.n) / t.n - 1.0;
  return std::exp2(-t.n * bosonic_g(x));
}

}  // namespace steinlab
