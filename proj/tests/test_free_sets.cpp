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
#include "steinlab/free_sets.hpp"
#include "steinlab/random.hpp"

using namespace steinlab;

namespace {

Mat pure(double th, double ph) {
  Vec v(2);
  v << std::cos(th / 2), std::polar(std::sin(th / 2), ph);
  return projector(v);
}

Mat basis_proj(int dim, int i) {
  Mat m = Mat::Zero(dim, dim);
  m(i, i) = 1.0;
  return m;
}

}  // namespace

TEST_CASE("product family construction") {
  const auto f = build_product_family({basis_proj(2, 0), basis_proj(2, 1)}, 2);
  CHECK(f.level(2).size() == 4);
  CHECK(std::abs(f.c - 0.5) < 1e-15);
  Rng rng(41);
  const Mat s = random_state(2, rng);
  const auto f1 = build_product_family({s}, 3);
  CHECK(f1.level(3).size() == 1);
  CHECK(max_abs(f1.level(3)[0] - tensor_power(s, 3)) < 1e-15);
  CHECK(std::abs(f1.c - lambda_min(s)) < 1e-12);
  const auto f3 = build_product_family({pure(0, 0), pure(M_PI / 2, 0), pure(M_PI / 2, M_PI / 2)}, 2);
  CHECK(f3.level(2).size() == 9);
  CHECK_THROWS_AS(build_product_family({basis_proj(2, 0)}, 2), ValidationError);
  CHECK(deduplicate({basis_proj(2, 0), basis_proj(2, 0), basis_proj(2, 1)}).size() == 2);
}

TEST_CASE("hull distance") {
  const std::vector<Mat> g{basis_proj(2, 0), basis_proj(2, 1)};
  CHECK(hull_distance(Mat::Identity(2, 2) / 2.0, g).residual < 1e-10);
  const Mat plus = pure(M_PI / 2, 0);
  // closest diagonal state to |+><+| is I/2; distance = |offdiag| sqrt(2) = 1/sqrt(2)
  CHECK(std::abs(hull_distance(plus, g).residual - std::sqrt(0.5)) < 1e-8);
  Rng rng(43);
  std::vector<Mat> gens;
  for (int i = 0; i < 6; ++i) gens.push_back(random_state(3, rng));
  for (int k = 0; k < 10; ++k) {
    const auto w = random_distribution(6, rng);
    CHECK(hull_distance(mixture(gens, w), gens).residual < 1e-8);
  }
}

TEST_CASE("axioms") {
  const auto f = build_product_family({pure(0, 0), pure(M_PI, 0), pure(M_PI / 2, 0), pure(1.1, 0.4)}, 3);
  const auto rep = check_axioms(f);
  CHECK(rep.all_pass());
  for (const auto& r : rep.results)
    if (r.axiom != 2) CHECK(r.residual < 1e-8);
  // asymmetric singleton at level 2
  Mat k01 = Mat::Zero(4, 4);
  k01(1, 1) = 1.0;
  const auto bad = make_explicit_family(2, {{1, {basis_proj(2, 0), basis_proj(2, 1)}}, {2, {k01}}});
  const auto rb = check_axioms(bad, {2});
  CHECK(!rb.axiom(5).pass);
  CHECK(rb.axiom(5).residual >= 0.4);
  // dropping a permuted generator that stays in the hull keeps A5
  const auto fm = build_product_family({basis_proj(2, 0), basis_proj(2, 1), Mat::Identity(2, 2) / 2.0}, 2);
  auto l2 = fm.level(2);
  const Mat drop = tensor(basis_proj(2, 0), Mat::Identity(2, 2) / 2.0);
  l2.erase(std::remove_if(l2.begin(), l2.end(), [&](const Mat& m) { return max_abs(m - drop) < 1e-14; }), l2.end());
  CHECK(l2.size() == fm.level(2).size() - 1);
  const auto broken = make_explicit_family(2, {{1, fm.level(1)}, {2, l2}});
  CHECK(check_axioms(broken, {2}).axiom(5).pass);
  const auto nofull = make_explicit_family(2, {{1, {basis_proj(2, 0)}}});
  const auto r2 = check_axioms(nofull);
  CHECK(!r2.axiom(2).pass);
  CHECK(r2.axiom(2).residual == 0.0);
  // level 2 without its marginals breaks A3
  const auto no_a3 = make_explicit_family(2, {{1, {basis_proj(2, 0), Mat::Identity(2, 2) / 2.0}}, {2, {tensor(basis_proj(2, 1), basis_proj(2, 1))}}});
  const auto r3 = check_axioms(no_a3);
  CHECK(!r3.axiom(3).pass);
  CHECK(r3.axiom(3).residual > 0.1);
  CHECK(!r3.axiom(4).pass);
}

TEST_CASE("sampled separable family") {
  const auto f = build_sep_family(2, 2, 16, 7, 1);
  CHECK(f.inner_approximation);
  CHECK(f.c >= 0.25 / 20.0 - 1e-12);
  Vec phi = Vec::Zero(4);
  phi(0) = phi(3) = std::sqrt(0.5);
  double prev = 1e9;
  for (int samples : {16, 32, 64}) {
    const auto fs = build_sep_family(2, 2, samples, 7, 1);
    const auto r = rel_ent_to_hull(projector(phi), fs.level(1));
    CHECK(r.value >= 1.0 - 1e-9);
    CHECK(r.lower <= prev + 1e-9);
    prev = r.upper;
  }
  // a product state close to a sample
  Rng rng(7);
  const Mat prod = build_sep_family(2, 2, 16, 7, 1).level(1)[4];
  CHECK(rel_ent_to_hull(0.999 * prod + 0.001 * Mat::Identity(4, 4) / 4.0, f.level(1)).value < 1e-2);
}

TEST_CASE("hull relative entropy nonincreasing under nesting") {
  Rng rng(47);
  std::vector<Mat> gens;
  const Mat rho = random_state(3, rng);
  gens.push_back(Mat::Identity(3, 3) / 3.0);
  double prev = rel_ent_to_hull(rho, gens).upper;
  for (int k = 0; k < 5; ++k) {
    gens.push_back(random_state(3, rng));
    const auto r = rel_ent_to_hull(rho, gens);
    CHECK(r.lower <= prev + 1e-9);
    prev = r.upper;
  }
}
