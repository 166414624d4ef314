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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "steinlab/classical_blurring.hpp"
#include "steinlab/hypergeometric.hpp"

using namespace steinlab;

namespace {

std::vector<std::vector<int>> all_sequences(int len, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> z(len, 0);
  while (true) {
    out.push_back(z);
    int i = len - 1;
    while (i >= 0 && z[i] == k - 1) z[i--] = 0;
    if (i < 0) break;
    ++z[i];
  }
  return out;
}

// Sequence-level blurring of one input sequence: append m of each symbol, average
// over all distinct arrangements, keep the first n symbols. Exact rationals.
std::map<std::vector<int>, BigRational> blur_sequence(const std::vector<int>& x, int m, int k) {
  std::vector<int> y = x;
  for (int a = 0; a < k; ++a)
    for (int r = 0; r < m; ++r) y.push_back(a);
  const auto ty = type_of_sequence(y, k).counts;
  const int n = static_cast<int>(x.size());
  std::map<std::vector<int>, BigCount> hits;
  BigCount arrangements = 0;
  for (const auto& z : all_sequences(static_cast<int>(y.size()), k)) {
    if (type_of_sequence(z, k).counts != ty) continue;
    ++arrangements;
    hits[std::vector<int>(z.begin(), z.begin() + n)] += 1;
  }
  std::map<std::vector<int>, BigRational> out;
  for (const auto& [z, c] : hits) out[z] = BigRational(c, arrangements);
  return out;
}

std::vector<double> to_sequences(const SymmetricDistribution& p) {
  const int n = p.n(), k = p.alphabet_size();
  std::vector<double> out;
  for (const auto& z : all_sequences(n, k)) {
    const auto t = type_of_sequence(z, k);
    out.push_back(p.mass(t) / to_double(BigRational(multinomial(t))));
  }
  return out;
}

SymmetricDistribution random_symmetric(Rng& rng, int n, int k) {
  auto idx = type_index(n, k);
  return make_symmetric(n, k, random_distribution(idx->size(), rng));
}

Distribution power(const Distribution& p, int n) {
  Distribution out{1.0};
  for (int j = 0; j < n; ++j) {
    Distribution next;
    for (double a : out)
      for (double b : p) next.push_back(a * b);
    out.swap(next);
  }
  return out;
}

}  // namespace

TEST_CASE("kernel example: one symbol, one copy each") {
  const auto b = blur_kernel(1, 1, 2);
  // types in order (1,0), (0,1); urn {0,0,1}
  CHECK(b.k(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(b.k(1, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("m = 0 gives the identity kernel") {
  for (int n = 1; n <= 8; ++n)
    for (int k = 2; k <= 3; ++k) {
      const auto b = blur_kernel(n, 0, k);
      CHECK((b.k - RMat::Identity(b.k.rows(), b.k.cols())).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("kernel columns are stochastic, supported on the urn, and match the serial reference") {
  for (int n = 1; n <= 12; ++n)
    for (int k = 2; k <= 4; ++k)
      for (int m : {0, 1, 3, 7}) {
        const auto b = blur_kernel(n, m, k);
        const auto s = blur_kernel_serial(n, m, k);
        CHECK((b.k - s.k).cwiseAbs().maxCoeff() < 1e-13);
        for (int u = 0; u < b.k.cols(); ++u) {
          CHECK(std::abs(b.k.col(u).sum() - 1.0) < 1e-12);
          for (int t = 0; t < b.k.rows(); ++t) {
            std::vector<int> cap = (*b.index)[u].counts;
            for (int& c : cap) c += m;
            if (!leq_elementwise((*b.index)[t].counts, cap)) CHECK(b.k(t, u) == 0.0);
          }
        }
      }
}

TEST_CASE("kernel equals sequence-level append, shuffle, discard (exact)") {
  const int k = 2;
  for (int n = 1; n <= 6; ++n)
    for (int m = 0; m <= 3; ++m) {
      const auto b = blur_kernel(n, m, k);
      for (int u = 0; u < b.index->size(); ++u) {
        // every sequence of the input type must give the same type law
        for (const auto& x : all_sequences(n, k)) {
          if (type_of_sequence(x, k).counts != (*b.index)[u].counts) continue;
          std::vector<BigRational> law(b.index->size(), BigRational(0));
          for (const auto& [z, pr] : blur_sequence(x, m, k)) law[b.index->find(type_of_sequence(z, k).counts)] += pr;
          for (int t = 0; t < b.index->size(); ++t) {
            CHECK(std::abs(b.k(t, u) - to_double(law[t])) < 1e-14);
            TypeVector v{n + m * k, (*b.index)[u].counts};
            for (int& c : v.counts) c += m;
            CHECK(law[t] == multivariate_pmf_rational(v, (*b.index)[t]));
          }
        }
      }
    }
}

TEST_CASE("blurring an i.i.d. input matches the sequence-level oracle") {
  const int n = 4, m = 2, k = 2;
  const BigRational p0[2] = {BigRational(3, 4), BigRational(1, 4)};
  std::map<std::vector<int>, BigRational> out;
  for (const auto& x : all_sequences(n, k)) {
    BigRational px(1);
    for (int a : x) px *= p0[a];
    for (const auto& [z, pr] : blur_sequence(x, m, k)) out[z] += px * pr;
  }
  const auto blurred = apply_blur(blur_kernel(n, m, k), iid_types({0.75, 0.25}, n));
  std::vector<BigRational> by_type(blurred.index->size(), BigRational(0));
  for (const auto& [z, pr] : out) {
    const auto t = type_of_sequence(z, k);
    by_type[blurred.index->find(t.counts)] += pr;
    // output stays permutation invariant
    auto sorted = z;
    std::sort(sorted.begin(), sorted.end());
    CHECK(pr == out[sorted]);
  }
  for (int t = 0; t < blurred.index->size(); ++t) CHECK(std::abs(blurred.weights[t] - to_double(by_type[t])) < 1e-10);
}

TEST_CASE("point mass input returns the kernel column") {
  const auto b = blur_kernel(5, 2, 3);
  for (int u = 0; u < b.index->size(); ++u) {
    std::vector<double> w(b.index->size(), 0.0);
    w[u] = 1.0;
    const auto out = apply_blur(b, make_symmetric(5, 3, w));
    for (int t = 0; t < b.index->size(); ++t) CHECK(std::abs(out.weights[t] - b.k(t, u)) < 1e-15);
  }
  CHECK_THROWS_AS(apply_blur(b, iid_types({0.5, 0.5}, 5)), ValidationError);
}

TEST_CASE("spill-over lower bound inside the ball") {
  Rng rng(11);
  for (int k = 2; k <= 3; ++k)
    for (int n = 1; n <= (k == 2 ? 30 : 14); ++n)
      for (double delta : {0.03, 0.1, 0.2, 0.35, 0.5}) {
        const int m = blur_m(n, delta);
        const auto b = blur_kernel(n, m, k);
        const double bound = std::exp2(-n * bosonic_g((2.0 * delta + 1.0 / n) * k));
        for (int trial = 0; trial < 4; ++trial) {
          const auto s = random_distribution(k, rng);
          for (int u = 0; u < b.index->size(); ++u) {
            if (!in_ball((*b.index)[u], s, delta)) continue;
            for (int t = 0; t < b.index->size(); ++t)
              if (in_ball((*b.index)[t], s, delta)) CHECK(b.k(t, u) >= bound * (1 - 1e-12));
          }
        }
      }
}

TEST_CASE("typicality mass") {
  CHECK(typicality_mass({0.3, 0.7}, 9, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  // |k/10 - 1/2| <= 0.2 means k in 3..7: (120+210+252+210+120)/1024
  const double mass = typicality_mass({0.5, 0.5}, 10, 0.2);
  CHECK(mass == doctest::Approx(912.0 / 1024.0).epsilon(1e-14));
  CHECK(1.0 - mass <= std::pow(11.0, 2) * std::exp2(-2.0 * 10 * 0.04));
  Rng rng(5);
  for (int k = 2; k <= 3; ++k)
    for (int n = 1; n <= 40; n += 3)
      for (double eta : {0.01, 0.1, 0.4}) {
        const auto p = random_distribution(k, rng);
        const double d = delta_n(n, k, eta);
        CHECK(1.0 - typicality_mass(p, n, d) <= eta + 1e-12);
        for (double delta : {0.05, 0.15, 0.3})
          CHECK(1.0 - typicality_mass(p, n, delta) <= std::pow(n + 1.0, k) * std::exp2(-2.0 * n * delta * delta) + 1e-12);
      }
}

TEST_CASE("symmetric smoothing equals unrestricted sequence-level smoothing") {
  Rng rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + trial % 4, k = 2 + trial % 2;
    const auto p = random_symmetric(rng, n, k);
    const auto q = random_symmetric(rng, n, k);
    const double eta = uniform(rng, 0.0, 0.6);
    const auto typ = d_max_smoothed_types(p, q, eta);
    const auto seq = d_max_smoothed_classical(to_sequences(p), to_sequences(q), eta);
    CHECK(std::abs(typ.value - seq.value) < 1e-10);
  }
}

TEST_CASE("symmetric smoothing against a grid over all sequence distributions") {
  // n = 2, binary: four sequences, p' ranges over a grid of the full simplex
  Rng rng(8);
  for (int trial = 0; trial < 5; ++trial) {
    const auto p = random_symmetric(rng, 2, 2);
    const auto q = random_symmetric(rng, 2, 2);
    const double eta = uniform(rng, 0.05, 0.4);
    const auto ps = to_sequences(p), qs = to_sequences(q);
    const int steps = 60;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= steps; ++a)
      for (int b = 0; a + b <= steps; ++b)
        for (int c = 0; a + b + c <= steps; ++c) {
          const double x[4] = {double(a) / steps, double(b) / steps, double(c) / steps,
                               double(steps - a - b - c) / steps};
          double tv = 0.0, ratio = 0.0;
          for (int i = 0; i < 4; ++i) {
            tv += 0.5 * std::abs(x[i] - ps[i]);
            ratio = std::max(ratio, x[i] / qs[i]);
          }
          if (tv <= eta) best = std::min(best, std::max(0.0, std::log2(ratio)));
        }
    const auto typ = d_max_smoothed_types(p, q, eta);
    CHECK(typ.value <= best + 1e-12);
    CHECK(best - typ.value < 0.35);  // grid resolution
  }
}

TEST_CASE("blurring lemma examples") {
  const Distribution s{0.7, 0.3};
  for (int n : {5, 10, 20}) {
    const auto p = iid_types(s, n);
    const double eta = 0.2;
    const double delta = delta_n(n, 2, eta);
    const auto r = check_blurring_lemma(p, p, s, delta, eta);
    CHECK(r.status == Status::Pass);
    CHECK(std::isfinite(r.lhs));
    CHECK(r.slack > 0.0);
  }
  // q on a type far from s: right-hand side infinite
  const int n = 10;
  std::vector<double> w(type_index(n, 2)->size(), 0.0);
  w[0] = 1.0;  // type (10, 0)
  const auto r = check_blurring_lemma(iid_types({0.3, 0.7}, n), make_symmetric(n, 2, w), {0.3, 0.7}, 0.25, 0.3);
  CHECK(r.status == Status::Pass);
  CHECK(std::isinf(r.rhs));
  // p not concentrated: reported inapplicable
  const auto bad = check_blurring_lemma(make_symmetric(n, 2, w), iid_types({0.3, 0.7}, n), {0.3, 0.7}, 0.1, 0.1);
  CHECK(bad.status == Status::Inapplicable);
}

TEST_CASE("blurring lemma campaign") {
  Rng rng(2026);
  int violations = 0, checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int k = 2 + trial % 2;
    const int n = uniform_int(rng, 1, k == 2 ? 30 : 20);
    const double delta = uniform(rng, 0.02, 0.5);
    const double eta = uniform(rng, 0.0, 0.5);
    const auto inst = random_blurring_instance(rng, n, k, delta, eta);
    const auto r = check_blurring_lemma(inst.p, inst.q, inst.s, delta, eta);
    CHECK(r.status != Status::Inapplicable);
    if (r.status == Status::Fail) ++violations;
    ++checked;
  }
  CHECK(checked == 200);
  CHECK(violations == 0);
}

TEST_CASE("type-space family matches the sequence-level product hull") {
  const std::vector<Mat> level1{diag_matrix({0.9, 0.1}), diag_matrix({0.2, 0.8}), diag_matrix({0.5, 0.5})};
  const auto fam = build_product_family(level1, 3);
  const Distribution p{0.65, 0.35};
  for (int n = 1; n <= 3; ++n) {
    const auto ts = type_space_family(fam, n);
    std::vector<Mat> gens;
    for (const auto& g : ts.generators) gens.push_back(diag_matrix(g));
    for (double eps : {0.0, 0.1, 0.3}) {
      const auto typ = dtilde_to_hull(diag_matrix(iid_types(p, n).weights), gens, eps);
      const auto seq = dtilde_to_hull(diag_matrix(power(p, n)), fam.level(n), eps);
      CHECK(std::abs(typ.value - seq.value) < 1e-6);
    }
  }
  CHECK_THROWS_AS(type_space_family(build_product_family({Mat::Identity(2, 2) / 2.0 + Mat::Constant(2, 2, 0.1)}, 1), 2),
                  ValidationError);
}

TEST_CASE("classical Stein inequality examples") {
  const std::vector<Mat> simplex{diag_matrix({1.0, 0.0}), diag_matrix({0.0, 1.0})};
  {
    const auto t = check_classical_gsl({0.5, 0.5}, build_product_family(simplex, 1), 8, 0.2, 0.1);
    CHECK(t.lhs.upper < 1e-6);
    CHECK(t.smoothed.upper < 1e-6);
    for (const auto& r : t.records) CHECK_MESSAGE(r.status == Status::Pass, r.name);
  }
  {
    const auto fam = build_product_family({diag_matrix({0.5, 0.5})}, 1);
    const Distribution p{0.75, 0.25};
    const int n = 12;
    const auto t = check_classical_gsl(p, fam, n, 0.3, 0.1);
    for (const auto& r : t.records) CHECK_MESSAGE(r.status == Status::Pass, r.name);
    // single generator: the hull is the uniform distribution itself
    const Distribution u(1 << n, 1.0 / (1 << n));
    CHECK(std::abs(t.lhs.value - d_max_smoothed_classical(power(p, n), u, 0.1).value) < 1e-6);
    CHECK(std::abs(t.smoothed.value - d_max_smoothed_classical(power(p, n), u, 0.3).value) < 1e-6);
    CHECK(t.records[0].slack > 0.0);
    CHECK(t.c_term == doctest::Approx((2.0 * n * t.delta + 1.0) * 2.0).epsilon(1e-12));
  }
  {
    // eps = eta / 2, a richer family
    const auto fam = build_product_family({diag_matrix({0.8, 0.1, 0.1}), diag_matrix({0.1, 0.3, 0.6})}, 1);
    const auto t = check_classical_gsl({0.2, 0.5, 0.3}, fam, 6, 0.1, 0.2);
    for (const auto& r : t.records) CHECK_MESSAGE(r.status == Status::Pass, r.name);
  }
  CHECK_THROWS_AS(check_classical_gsl({0.5, 0.5}, build_product_family(simplex, 1), 4, 0.6, 0.5), ValidationError);
}
