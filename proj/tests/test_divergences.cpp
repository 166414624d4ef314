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

#include "steinlab/divergences.hpp"
#include "steinlab/hypergeometric.hpp"
#include "steinlab/random.hpp"

using namespace steinlab;

namespace {

Mat ket_proj(double th, double ph) {
  Vec v(2);
  v << std::cos(th / 2), std::polar(std::sin(th / 2), ph);
  return projector(v);
}

Mat mixed_with_noise(const Mat& s, double lam) {
  return (1 - lam) * s + lam * Mat::Identity(s.rows(), s.cols()) / double(s.rows());
}

std::vector<Mat> product_level(const std::vector<Mat>& base, int n) {
  std::vector<Mat> out{Mat::Identity(1, 1)};
  for (int k = 0; k < n; ++k) {
    std::vector<Mat> next;
    for (auto& a : out)
      for (auto& b : base) next.push_back(tensor(a, b));
    out.swap(next);
  }
  return out;
}

}  // namespace

TEST_CASE("umegaki and d_max") {
  Mat p = diag_matrix({1.0, 0.0}), u = diag_matrix({0.5, 0.5});
  CHECK(umegaki(p, u).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(umegaki(u, p).infinite);
  CHECK(std::abs(d_max(diag_matrix({0.75, 0.25}), u).value - std::log2(1.5)) < 1e-14);
  Rng rng(21);
  for (int k = 0; k < 100; ++k) {
    const int d = 2 + k % 3;
    const Mat r = random_state(d, rng, 1 + k % d), s = random_state(d, rng);
    CHECK(umegaki(r, r).value == doctest::Approx(0.0).epsilon(1e-10));
    CHECK(std::abs(d_max(s, s).value) < 1e-10);
    const auto dm = d_max(r, s);
    CHECK(umegaki(r, s).value <= dm.value + 1e-9);
    CHECK(lambda_min(std::exp2(dm.value) * s - r) > -1e-9);
  }
}

TEST_CASE("diagonal pairs keep entries below the spectral threshold") {
  // ratio 1e-15 / 1e-30 sits where sigma looks like kernel to an eigensolver
  const Mat rho = diag_matrix({1.0 - 1e-15, 1e-15});
  const Mat sigma = diag_matrix({1.0 - 1e-30, 1e-30});
  const double expect = std::log2(1e15);
  CHECK(std::abs(d_max(rho, sigma).value - expect) < 1e-9);
  CHECK_FALSE(d_max(rho, sigma).infinite);
  // eps below the tiny entry's mass keeps the huge ratio binding
  CHECK(std::abs(dtilde_max(rho, sigma, 1e-16).value - std::log2((1e-15 - 1e-16) / 1e-30)) < 1e-6);
}

TEST_CASE("hypothesis testing divergence") {
  Rng rng(23);
  for (double eps : {0.05, 0.3, 0.7}) {
    const Mat r = random_state(3, rng);
    CHECK(std::abs(d_h(r, r, eps).value + std::log2(1 - eps)) < 1e-9);
  }
  for (int k = 0; k < 50; ++k) {
    const int d = 2 + k % 4;
    auto p = random_distribution(d, rng), q = random_distribution(d, rng);
    if (k % 5 == 0) { q[0] = 0.0; double s = 0; for (double v : q) s += v; for (auto& v : q) v /= s; }
    const double eps = uniform(rng, 0.05, 0.9);
    const auto c = d_h_classical(p, q, eps);
    const auto qd = d_h(diag_matrix(p), diag_matrix(q), eps);
    CHECK(c.infinite == qd.infinite);
    if (!c.infinite) CHECK(std::abs(c.value - qd.value) < 1e-8);
  }
  for (int k = 0; k < 40; ++k) {
    const int d = 2 + k % 3;
    const Mat r = random_state(d, rng), s = random_state(d, rng, 1 + k % d);
    const double eps = uniform(rng, 0.05, 0.5);
    const auto res = d_h(r, s, eps);
    REQUIRE(res.witness_operator.has_value());
    const Mat& q = *res.witness_operator;
    CHECK(lambda_min(q) > -1e-8);
    CHECK(lambda_max(q) < 1 + 1e-8);
    CHECK((q * r).trace().real() >= 1 - eps - 1e-8);
    const double v = std::exp2(-res.value);
    for (int j = 1; j <= 200; ++j) {
      const double t = 0.02 * j * j;
      CHECK(v >= (1 - eps - trace_positive_part(hermitian_part(r - t * s))) / t - 1e-8);
    }
    // data processing under a partial trace
    const Mat r2 = tensor(r, random_state(2, rng)), s2 = tensor(s, random_state(2, rng));
    CHECK(d_h(r, s, eps).value <= d_h(r2, s2, eps).value + 1e-7);
  }
}

TEST_CASE("datta-leditzky divergence") {
  Rng rng(25);
  for (int k = 0; k < 30; ++k) {
    const int d = 2 + k % 3;
    const Mat r = random_state(d, rng), s = random_state(d, rng);
    CHECK(std::abs(dtilde_max(r, s, 0.0).value - d_max(r, s).value) < 1e-12);
    const double eps = uniform(rng, 0.01, 0.5);
    CHECK(std::abs(dtilde_max(r, r, eps).value - std::log2(1 - eps)) < 1e-10);
    const auto dt = dtilde_max(r, s, eps);
    CHECK(dt.monotone_trace);
    CHECK(trace_positive_part(hermitian_part(r - std::exp2(dt.value) * s)) <= eps + 1e-10);
    // triangle with an intermediate state
    const Mat w = random_state(d, rng);
    CHECK(dt.value <= dtilde_max(r, w, eps).value + d_max(w, s).value + 1e-9);
  }
}

TEST_CASE("classical smoothing") {
  const auto r = d_max_smoothed_classical({1.0, 0.0}, {0.5, 0.5}, 0.25);
  CHECK(std::abs(r.value - std::log2(1.5)) < 1e-14);
  // grid oracle over two-point p'
  double best = 1e9;
  for (int i = 0; i <= 100000; ++i) {
    const double a = i / 100000.0;
    if (1 - a > 0.25 + 1e-15) continue;
    best = std::min(best, std::log2(std::max(a, 1 - a) / 0.5));
  }
  CHECK(std::abs(best - r.value) < 1e-4);
  CHECK(std::abs(r.smoothed[0] - 0.75) < 1e-14);

  Rng rng(27);
  for (int k = 0; k < 200; ++k) {
    const int d = 2 + k % 4;
    const auto p = random_distribution(d, rng), q = random_distribution(d, rng);
    CHECK(std::abs(d_max_smoothed_classical(p, q, 0.0).value - d_max_classical(p, q).value) < 1e-12);
    const double eps = uniform(rng, 0.01, 0.4);
    const auto sm = d_max_smoothed_classical(p, q, eps);
    CHECK(total_variation(p, sm.smoothed) <= eps + 1e-12);
    CHECK(d_max_classical(sm.smoothed, q).value <= sm.value + 1e-10);
    // sandwich; the wider smoothing radius sits on the smoothed max-divergence
    const double dt = dtilde_classical(p, q, eps).value;
    const double eps2 = std::sqrt(eps * (2 - eps));
    CHECK(dt <= sm.value + 1e-8);
    CHECK(d_max_smoothed_classical(p, q, std::min(eps2, 0.999)).value <= dt + std::log2(1 / (1 - eps)) + 1e-8);
    // classical threshold agrees with the quantum bisection
    CHECK(std::abs(dt - dtilde_max(diag_matrix(p), diag_matrix(q), eps).value) < 1e-9);
    // duality with hypothesis testing
    const double eta = uniform(rng, 0.01, 1 - eps - 0.01);
    CHECK(d_h_classical(p, q, 1 - eps - eta).value + std::log2(eta) <= sm.value + 1e-8);
    CHECK(sm.value <= d_h_classical(p, q, 1 - eps).value + 1e-8);
    // triangle
    const auto w = random_distribution(d, rng);
    CHECK(d_max_classical(p, q).value <= d_max_classical(p, w).value + d_max_classical(w, q).value + 1e-10);
  }
  CHECK_THROWS_AS(d_max_smoothed_classical({0.5, 0.5}, {0.5, 0.5}, 1.0), ValidationError);
  // with the radii exchanged the bound fails already for p = q
  const std::vector<double> pq{0.3, 0.7};
  const double e = 0.1, e2 = std::sqrt(e * (2 - e));
  CHECK(d_max_smoothed_classical(pq, pq, e).value > dtilde_classical(pq, pq, e2).value + std::log2(1 / (1 - e)) + 0.1);
}

TEST_CASE("relative entropy to a hull") {
  Rng rng(29);
  const std::vector<Mat> gens{ket_proj(0, 0), ket_proj(M_PI, 0), ket_proj(M_PI / 2, 0),
                              mixed_with_noise(ket_proj(1.0, 2.0), 0.3)};
  const auto r0 = rel_ent_to_hull(gens[3], gens);
  CHECK(r0.value < 1e-5);
  const Mat rho = random_state(2, rng);
  CHECK(std::abs(rel_ent_to_hull(rho, {gens[3]}).value - umegaki(rho, gens[3]).value) < 1e-12);
  const Mat p = diag_matrix({0.75, 0.25});
  const auto rc = rel_ent_to_hull(p, {diag_matrix({1, 0}), diag_matrix({0, 1})});
  CHECK(rc.value < 1e-6);
  // a classical pair where the optimum is interior: p=(0.6,0.3,0.1) vs {(1,0,0),(0,.5,.5)}
  const Mat p3 = diag_matrix({0.6, 0.3, 0.1});
  const std::vector<Mat> g3{diag_matrix({1, 0, 0}), diag_matrix({0, 0.5, 0.5})};
  const auto r3 = rel_ent_to_hull(p3, g3);
  double best = 1e9;
  for (int i = 1; i < 200000; ++i) {
    const double w = i / 200000.0;
    best = std::min(best, umegaki_classical({0.6, 0.3, 0.1}, {w, 0.5 * (1 - w), 0.5 * (1 - w)}).value);
  }
  CHECK(std::abs(r3.value - best) < 1e-8);
  CHECK(r3.lower <= best + 1e-12);
}

TEST_CASE("max divergences to a hull") {
  Rng rng(31);
  const std::vector<Mat> gens{ket_proj(0, 0), ket_proj(M_PI, 0), ket_proj(M_PI / 2, 0),
                              mixed_with_noise(ket_proj(1.0, 2.0), 0.3)};
  CHECK(d_max_to_hull(gens[3], gens).value < 1e-7);
  const Mat rho = random_state(2, rng);
  CHECK(std::abs(d_max_to_hull(rho, {gens[3]}).value - d_max(rho, gens[3]).value) < 1e-12);
  // two commuting generators: grid of step 1e-4, refined by golden section (both
  // objectives are quasi-convex in the weight)
  auto oracle = [](auto f) {
    double bw = 0.0, bv = 1e300;
    for (int i = 0; i <= 10000; ++i) {
      const double v = f(i / 10000.0);
      if (v < bv) { bv = v; bw = i / 10000.0; }
    }
    double a = std::max(0.0, bw - 1e-4), b = std::min(1.0, bw + 1e-4);
    for (int i = 0; i < 100; ++i) {
      const double c = a + (b - a) / 3, d = b - (b - a) / 3;
      if (f(c) <= f(d)) b = d; else a = c;
    }
    return std::min(bv, f(0.5 * (a + b)));
  };
  for (int k = 0; k < 10; ++k) {
    const auto p = random_distribution(3, rng);
    const auto a = random_distribution(3, rng), b = random_distribution(3, rng);
    const double eps = 0.1;
    auto qw = [&](double w) {
      std::vector<double> q(3);
      for (int x = 0; x < 3; ++x) q[x] = w * a[x] + (1 - w) * b[x];
      return q;
    };
    const double best = oracle([&](double w) { return d_max_classical(p, qw(w)).value; });
    const double bestt = oracle([&](double w) { return dtilde_classical(p, qw(w), eps).value; });
    const auto r = d_max_to_hull(diag_matrix(p), {diag_matrix(a), diag_matrix(b)});
    CHECK(r.lower <= best + 1e-9);
    CHECK(std::abs(r.value - best) < 1e-6);
    const auto rt = dtilde_to_hull(diag_matrix(p), {diag_matrix(a), diag_matrix(b)}, eps);
    CHECK(rt.lower <= bestt + 1e-9);
    CHECK(std::abs(rt.value - bestt) < 1e-6);
  }
  // quantum: bracket contains every sampled mixture's value from below
  for (int k = 0; k < 5; ++k) {
    const Mat r = random_state(2, rng);
    const auto res = d_max_to_hull(r, gens);
    CHECK(std::abs(d_max(r, mixture(gens, res.weights)).value - res.value) < 1e-6);
    for (int j = 0; j < 200; ++j) {
      const auto w = random_distribution(4, rng);
      CHECK(res.lower <= d_max(r, mixture(gens, w)).value + 1e-9);
    }
  }
}

TEST_CASE("hull divergence structure") {
  Rng rng(33);
  const std::vector<Mat> base{diag_matrix({1, 0}), diag_matrix({0, 1}), ket_proj(M_PI / 2, 0)};
  const Mat unif = mixture(base, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const double c = lambda_min(unif);
  const auto l2 = product_level(base, 2);
  for (int k = 0; k < 5; ++k) {
    const Mat a = random_state(2, rng), b = random_state(2, rng);
    const auto da = d_max_to_hull(a, base), db = d_max_to_hull(b, base);
    const auto dab = d_max_to_hull(tensor(a, b), l2);
    CHECK(dab.lower <= da.upper + db.upper + 1e-7);
    CHECK(dab.lower <= 2 * std::log2(1 / c) + 1e-9);
  }
  for (int k = 0; k < 10; ++k) {
    const Mat r = random_state(2, rng);
    const Mat r2 = mixed_with_noise(r, uniform(rng, 0.0, 0.2));
    const double eps = trace_distance(r, r2);
    const auto a = rel_ent_to_hull(r, base), b = rel_ent_to_hull(r2, base);
    const double lhs = std::max(a.upper - b.lower, b.upper - a.lower);
    CHECK(lhs <= eps * std::log2(1 / c) + bosonic_g(eps) + 1e-9);
  }
}
