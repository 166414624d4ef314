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

#include "steinlab/fock.hpp"
#include "steinlab/random.hpp"

using namespace steinlab;

namespace {

Mat kron_all(const std::vector<Mat>& parts) {
  Mat out = Mat::Identity(1, 1);
  for (const auto& p : parts) out = tensor(out, p);
  return out;
}

// Multi-mode pure loss through explicit per-mode Kraus operators.
Mat loss_by_kraus(double lambda, const FockOperator& x) {
  const auto ks = pure_loss_kraus(lambda, x.cutoff);
  Mat cur = x.m;
  for (int j = 0; j < x.modes; ++j) {
    Mat next = Mat::Zero(cur.rows(), cur.cols());
    for (const auto& k : ks) {
      std::vector<Mat> parts(x.modes, Mat::Identity(x.cutoff + 1, x.cutoff + 1));
      parts[j] = k;
      const Mat big = kron_all(parts);
      next += big * cur * big.adjoint();
    }
    cur = next;
  }
  return cur;
}

}  // namespace

TEST_CASE("loss parameters") {
  for (double delta = 0.01; delta <= 0.5 + 1e-12; delta += 0.01) {
    const auto p = loss_params(delta);
    CHECK(std::abs(std::sqrt(p.lambda) * p.mu - 1.0 / (1.0 + delta)) < 1e-12);
    CHECK(std::abs(1.0 / p.lambda - 1.0 - delta * (1.0 + delta)) < 1e-12);
    CHECK(p.mu <= 1.0);
  }
}

TEST_CASE("pure loss on Fock states") {
  const double lambda = 0.37;
  const auto v = pure_loss(lambda, vacuum(1, 6));
  CHECK(max_abs(v.m - vacuum(1, 6).m) < 1e-15);
  const auto one = pure_loss(lambda, fock_ketbra({1}, {1}, 3));
  Mat expect = Mat::Zero(4, 4);
  expect(1, 1) = lambda;
  expect(0, 0) = 1.0 - lambda;
  CHECK(max_abs(one.m - expect) < 1e-15);
  CHECK_THROWS_AS(pure_loss(1.2, vacuum(1, 2)), ValidationError);
}

TEST_CASE("pure loss Kraus operators and trace preservation") {
  Rng rng(61);
  for (int c = 0; c <= 10; ++c) {
    const auto ks = pure_loss_kraus(0.6, c);
    Mat s = Mat::Zero(c + 1, c + 1);
    for (const auto& k : ks) s += k.adjoint() * k;
    CHECK(max_abs(s - Mat::Identity(c + 1, c + 1)) < 1e-12);
  }
  for (int modes = 1; modes <= 2; ++modes)
    for (int c : {2, 5}) {
      const long long dim = fock_dim(modes, c);
      for (int trial = 0; trial < 5; ++trial) {
        const double lambda = uniform(rng, 0.05, 0.95);
        const auto x = fock_from_matrix(modes, c, random_ginibre(dim, dim, rng));
        CHECK(max_abs(pure_loss(lambda, x).m - loss_by_kraus(lambda, x)) < 1e-12);
        const auto s = fock_from_matrix(modes, c, random_state(dim, rng));
        CHECK(std::abs(pure_loss(lambda, s).m.trace() - 1.0) < 1e-12);
        CHECK(lambda_min(hermitian_part(pure_loss(lambda, s).m)) > -1e-12);
      }
    }
}

TEST_CASE("pure loss maps coherent states to coherent states") {
  const double lambda = 0.55;
  for (cplx alpha : {cplx(1.0, 0.0), cplx(0.8, -1.1), cplx(2.0, 0.5)}) {
    const auto in = coherent_state(alpha, 40);
    const auto out = pure_loss(lambda, fock_from_matrix(1, 40, in.psi * in.psi.adjoint()));
    const auto expect = coherent_state(std::sqrt(lambda) * alpha, 40);
    const double fid = std::real(expect.psi.dot(out.m * expect.psi));
    CHECK(1.0 - fid < 1e-12 + 4.0 * std::sqrt(in.slack));
    CHECK(std::abs(out.m(0, 0).real() - std::exp(-lambda * std::norm(alpha))) < 1e-12);
  }
}

TEST_CASE("damping") {
  Rng rng(67);
  const auto x = fock_from_matrix(2, 3, random_state(16, rng));
  CHECK(max_abs(damping(1.0, x).m - x.m) == 0.0);
  const auto one = damping(0.7, fock_ketbra({1}, {1}, 2));
  CHECK(std::abs(one.m(1, 1) - 0.49) < 1e-15);
  CHECK(damping(0.7, x).m.trace().real() < 1.0);
  CHECK(std::abs(damping(0.7, vacuum(2, 3)).m.trace() - 1.0) < 1e-15);
}

TEST_CASE("lift and unlift") {
  const auto vac = lift(sym_ketbra(5, 2, e0(5, 2), e0(5, 2)), 5);
  CHECK(max_abs(vac.m - vacuum(1, 5).m) == 0.0);
  Rng rng(71);
  for (int d = 2; d <= 3; ++d) {
    const int n = 5;
    const auto x = sym_from_matrix(n, d, random_ginibre(type_index(n, d)->size(), type_index(n, d)->size(), rng));
    double dropped = -1.0;
    const auto up = lift(x, n, &dropped);
    CHECK(dropped == 0.0);
    CHECK(max_abs(unlift(up, n).m - x.m) == 0.0);
  }
  // lifted blur is blur_q relabelled
  for (int d = 2; d <= 3; ++d) {
    const int n = 6;
    const auto idx = type_index(n, d);
    const auto x = sym_from_matrix(n, d, random_ginibre(idx->size(), idx->size(), rng));
    const auto fx = lift(x, n);
    const auto lb = lifted_blur(n, 0.4, fx);
    const auto bq = blur_q(x, 0.4);
    for (int a = 0; a < idx->size(); ++a)
      for (int b = 0; b < idx->size(); ++b) {
        const Occupation oa((*idx)[a].counts.begin() + 1, (*idx)[a].counts.end());
        const Occupation ob((*idx)[b].counts.begin() + 1, (*idx)[b].counts.end());
        CHECK(std::abs(lb.m(fock_index(oa, n), fock_index(ob, n)) - bq.m(a, b)) < 1e-15);
      }
  }
}

TEST_CASE("limit entries and the composed channel") {
  CHECK(limit_entry({0}, {0}, {0}, {0}, 0.3) == 1.0);
  for (double delta : {0.1, 0.25, 0.5}) {
    CHECK(std::abs(limit_entry({1}, {1}, {0}, {0}, delta) - delta / (1.0 + delta)) < 1e-15);
    CHECK(limit_entry({2}, {1}, {1}, {1}, delta) == 0.0);
  }
  for (int modes = 1; modes <= 2; ++modes) {
    const int c = 4;
    for (long long a = 0; a < fock_dim(modes, c); ++a)
      for (long long b = 0; b < fock_dim(modes, c); ++b) {
        const auto h = fock_occupation(a, modes, c), k = fock_occupation(b, modes, c);
        for (double delta : {0.15, 0.5}) {
          const auto lim = limit_operator(h, k, delta, c);
          const auto chan = loss_damping(delta, fock_ketbra(h, k, c));
          CHECK(max_abs(lim.m - chan.m) < 1e-12);
        }
      }
  }
}

TEST_CASE("entrywise convergence of the lifted blurring map") {
  const auto zero = convergence_study({0}, {0}, 0.3, {5, 10, 20});
  for (const auto& r : zero.rows) CHECK(r.error < 1e-14);
  CHECK(zero.decreasing.status == Status::Pass);
  const auto s = convergence_study({1}, {1}, 0.25, {40, 80, 160});
  CHECK(s.rows[1].error < s.rows[0].error);
  CHECK(s.rows[2].error < s.rows[1].error);
  CHECK(s.decreasing.status == Status::Pass);
  const auto off = convergence_study({2}, {1}, 0.4, {10, 20, 40, 80});
  for (std::size_t i = 1; i < off.rows.size(); ++i) CHECK(off.rows[i].error < off.rows[i - 1].error);
  CHECK(off.rows.back().error < 0.05);
  CHECK(off.threshold.status == Status::Pass);
  const auto two = convergence_study({1, 1}, {1, 0}, 0.3, {10, 20, 40});
  CHECK(two.decreasing.status == Status::Pass);
}

TEST_CASE("delta-averaged channel") {
  const auto vac = lambda_map(0.5, vacuum(2, 3));
  CHECK(max_abs(vac.value.m - vacuum(2, 3).m) < 1e-14);
  // |1><1| -> (1+delta)^{-2} |1><1| + delta/(1+delta) |0><0|, averaged in closed form
  for (double big_delta : {0.5, 0.2}) {
    const auto r = lambda_map(big_delta, fock_ketbra({1}, {1}, 4));
    CHECK(r.consistent);
    CHECK(std::abs(r.value.m(1, 1).real() - 1.0 / (1.0 + big_delta)) < 1e-8);
    CHECK(std::abs(r.value.m(0, 0).real() - (1.0 - std::log(1.0 + big_delta) / big_delta)) < 1e-8);
  }
  Rng rng(73);
  const auto x = fock_from_matrix(1, 6, random_ginibre(7, 7, rng));
  const auto y = fock_from_matrix(1, 6, random_ginibre(7, 7, rng));
  const auto lx = lambda_map_fixed(0.4, x, 96), ly = lambda_map_fixed(0.4, y, 96);
  const auto lxy = lambda_map_fixed(0.4, fock_from_matrix(1, 6, x.m + 2.0 * y.m), 96);
  CHECK(max_abs(lxy.m - lx.m - 2.0 * ly.m) < 1e-13);
  CHECK(max_abs(lambda_map_fixed(0.4, x, 200).m - lambda_map_fixed_serial(0.4, x, 200).m) == 0.0);
}

TEST_CASE("support test") {
  Rng rng(79);
  const std::vector<double> ms{1, 10, 100, 1e4};
  const Vec psi = random_pure(5, rng);
  const auto self = support_test(psi, psi * psi.adjoint(), ms);
  CHECK(self.f[0] < 1e-12);
  CHECK(self.verdict == "IN-SUPPORT");
  Vec vac = Vec::Zero(30);
  vac(0) = 1.0;
  const auto beta = coherent_state(cplx(1.2, 0.3), 29);
  const auto pure = support_test(vac, beta.psi * beta.psi.adjoint(), ms);
  const double floor = 1.0 - std::norm(beta.psi(0));
  for (double f : pure.f) CHECK(f >= floor - 1e-10);
  CHECK(pure.verdict == "NOT-IN-SUPPORT");
  CHECK(std::abs(std::norm(pure.witness.dot(vac)) - floor) < 1e-10);
  Mat diag = Mat::Zero(6, 6);
  for (int i = 0; i < 6; ++i) diag(i, i) = std::pow(0.5, i + 1);
  const auto thermal = support_test(Vec::Unit(6, 0), diag, {1.0, 1.5, 2.0, 3.0});
  CHECK(std::abs(thermal.f[0] - 0.5) < 1e-12);
  CHECK(std::abs(thermal.f[1] - 0.25) < 1e-12);
  CHECK(thermal.f[2] < 1e-12);
  CHECK(thermal.verdict == "IN-SUPPORT");
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = uniform_int(rng, 2, 8);
    const auto r = support_test(random_pure(dim, rng), random_state(dim, rng, uniform_int(rng, 1, dim)),
                                {0.5, 1, 2, 5, 10, 100, 1e3, 1e5});
    CHECK(r.monotone);
  }
}

TEST_CASE("vacuum support experiment and the fixed-delta counterexample") {
  const std::vector<double> ms{1, 10, 100, 1e4, 1e6};
  const auto v = vacuum_support_experiment(vacuum(1, 12), 0.5, ms);
  CHECK(v.support.f[0] < 1e-12);
  CHECK(v.support.verdict == "IN-SUPPORT");
  const auto one = vacuum_support_experiment(fock_ketbra({1}, {1}, 12), 0.5, ms);
  CHECK(one.support.monotone);
  CHECK(one.support.f.back() < 0.05);
  CHECK(one.support.verdict == "IN-SUPPORT");
  const auto c = coherent_counterexample(2.0, 0.3, 40, ms);
  CHECK(c.loss_floor.status == Status::Pass);
  CHECK(c.composed_floor.status == Status::Pass);
  CHECK(c.loss.verdict == "NOT-IN-SUPPORT");
  CHECK(c.composed.verdict == "NOT-IN-SUPPORT");
  const double lambda = loss_params(0.3).lambda;
  CHECK(std::abs(c.floor_loss - (1.0 - std::exp(-lambda * 4.0))) < 1e-15);
  for (double f : c.loss.f) CHECK(f > 0.9);
  CHECK(c.slack < 1e-20);
}
