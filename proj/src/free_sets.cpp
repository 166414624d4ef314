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

#include "steinlab/free_sets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/LU>

#include "steinlab/random.hpp"

namespace steinlab {

const std::vector<Mat>& FreeFamily::level(int n) const {
  auto it = levels.find(n);
  if (it == levels.end()) throw ValidationError("FreeFamily: level " + std::to_string(n) + " not present");
  return it->second;
}

int FreeFamily::max_level() const { return levels.empty() ? 0 : levels.rbegin()->first; }

Mat FreeFamily::sigma0() const {
  const auto& l1 = level(1);
  Mat m = Mat::Zero(d, d);
  for (const auto& g : l1) m += g;
  return m / static_cast<double>(l1.size());
}

std::vector<Mat> deduplicate(const std::vector<Mat>& gens, double tol) {
  std::vector<Mat> out;
  for (const auto& g : gens) {
    bool dup = false;
    for (const auto& h : out) {
      if (h.rows() != g.rows()) continue;
      // trace norm >= max entry, so a large entry difference rules out duplicates cheaply
      if (max_abs(g - h) > 2 * tol) continue;
      if (trace_distance(g, h) <= tol) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(g);
  }
  return out;
}

static double uniform_lambda_min(const std::vector<Mat>& l1) {
  Mat m = Mat::Zero(l1[0].rows(), l1[0].cols());
  for (const auto& g : l1) m += g;
  return std::max(0.0, lambda_min(m / static_cast<double>(l1.size())));
}

static std::vector<Mat> products(const std::vector<Mat>& prev, const std::vector<Mat>& l1) {
  std::vector<Mat> out;
  out.reserve(prev.size() * l1.size());
  for (const auto& a : prev)
    for (const auto& b : l1) out.push_back(tensor(a, b));
  return out;
}

FreeFamily build_product_family(const std::vector<Mat>& level1, int max_level) {
  if (level1.empty()) throw ValidationError("build_product_family: no generators");
  if (max_level < 1) throw ValidationError("build_product_family: max_level must be >= 1");
  for (const auto& g : level1) require_state(g, "build_product_family");
  FreeFamily f;
  f.d = static_cast<int>(level1[0].rows());
  f.rule = "product";
  f.levels[1] = deduplicate(level1);
  f.c = uniform_lambda_min(f.levels[1]);
  if (f.c <= 1e-12) throw ValidationError("build_product_family: no full-rank mixture among the generators");
  for (int n = 2; n <= max_level; ++n) f.levels[n] = deduplicate(products(f.levels[n - 1], f.levels[1]));
  return f;
}

FreeFamily make_explicit_family(int d, std::map<int, std::vector<Mat>> levels) {
  FreeFamily f;
  f.d = d;
  f.rule = "explicit";
  for (auto& [n, gens] : levels) {
    for (const auto& g : gens) {
      require_state(g, "make_explicit_family");
      if (g.rows() != ipow(d, n)) throw ValidationError("make_explicit_family: generator dimension is not d^n");
    }
  }
  f.levels = std::move(levels);
  if (f.levels.count(1) && !f.levels[1].empty()) f.c = uniform_lambda_min(f.levels[1]);
  return f;
}

FreeFamily build_sep_family(int dA, int dB, int sample_count, std::uint64_t seed, int max_level) {
  if (dA < 1 || dB < 1 || dA * dB > 16) throw ValidationError("build_sep_family: need dA*dB <= 16");
  if (sample_count < dA * dA * dB * dB)
    throw ValidationError("build_sep_family: sample_count must be >= (dA dB)^2");
  std::vector<Mat> l1;
  for (int i = 0; i < dA; ++i)
    for (int j = 0; j < dB; ++j) {
      Mat b = Mat::Zero(dA * dB, dA * dB);
      b(i * dB + j, i * dB + j) = 1.0;
      l1.push_back(b);
    }
  Rng rng(seed);
  for (int s = 0; s < sample_count; ++s) {
    const Vec a = random_pure(dA, rng);
    const Vec b = random_pure(dB, rng);
    l1.push_back(projector(tensor(a, b)));
  }
  FreeFamily f = build_product_family(l1, max_level);
  f.rule = "sampled-SEP";
  f.seed = seed;
  f.inner_approximation = true;
  return f;
}

namespace {

// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.rbegin(), u.rend());
  double css = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    const double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

double frobenius_residual(const Mat& tau, const std::vector<Mat>& gens, const Eigen::VectorXd& w) {
  Mat m = tau;
  for (std::size_t i = 0; i < gens.size(); ++i)
    if (w(i) != 0.0) m -= w(i) * gens[i];
  return m.norm();
}

}  // namespace

HullDistance hull_distance(const Mat& tau, const std::vector<Mat>& gens, double tol, int max_iterations) {
  if (gens.empty()) throw ValidationError("hull_distance: no generators");
  const int g = static_cast<int>(gens.size());
  for (int i = 0; i < g; ++i)
    if (gens[i].rows() != tau.rows()) throw ValidationError("hull_distance: dimension mismatch");
  HullDistance out;
  // exact vertex hit
  for (int i = 0; i < g; ++i) {
    if (max_abs(tau - gens[i]) > 1e-12) continue;
    out.residual = (tau - gens[i]).norm();
    out.weights.assign(g, 0.0);
    out.weights[i] = 1.0;
    return out;
  }
  Eigen::MatrixXd gram(g, g);
  Eigen::VectorXd b(g);
  for (int i = 0; i < g; ++i) {
    b(i) = gens[i].cwiseProduct(tau.conjugate()).sum().real();
    for (int j = i; j < g; ++j) gram(i, j) = gram(j, i) = gens[i].cwiseProduct(gens[j].conjugate()).sum().real();
  }
  const double lip = std::max(2.0 * gram.diagonal().sum(), 1e-300);
  Eigen::VectorXd w = Eigen::VectorXd::Constant(g, 1.0 / g), y = w, wprev = w;
  double t = 1.0;
  auto objective = [&](const Eigen::VectorXd& x) { return x.dot(gram * x) - 2.0 * b.dot(x); };
  double best = frobenius_residual(tau, gens, w);
  Eigen::VectorXd bestw = w;
  auto polish = [&](const Eigen::VectorXd& x) {
    std::vector<int> sup;
    for (int i = 0; i < g; ++i)
      if (x(i) > 1e-12) sup.push_back(i);
    const int k = static_cast<int>(sup.size());
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd rhs(k + 1);
    for (int a = 0; a < k; ++a) {
      for (int c = 0; c < k; ++c) kkt(a, c) = gram(sup[a], sup[c]);
      kkt(a, k) = kkt(k, a) = 1.0;
      rhs(a) = b(sup[a]);
    }
    rhs(k) = 1.0;
    const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    Eigen::VectorXd cand = Eigen::VectorXd::Zero(g);
    for (int a = 0; a < k; ++a) {
      if (!(sol(a) >= 0.0)) return;
      cand(sup[a]) = sol(a);
    }
    const double r = frobenius_residual(tau, gens, cand);
    if (r < best) {
      best = r;
      bestw = cand;
    }
  };
  for (int it = 0; it < max_iterations && best > tol; ++it) {
    const Eigen::VectorXd grad = 2.0 * (gram * y - b);
    w = project_simplex(y - grad / lip);
    if (objective(w) > objective(wprev)) {  // adaptive restart
      t = 1.0;
      y = wprev;
      continue;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = w + ((t - 1.0) / tn) * (w - wprev);
    t = tn;
    wprev = w;
    if (it % 50 == 49) {
      const double r = frobenius_residual(tau, gens, w);
      if (r < best) {
        best = r;
        bestw = w;
      }
      polish(w);
    }
  }
  const double r = frobenius_residual(tau, gens, w);
  if (r < best) {
    best = r;
    bestw = w;
  }
  polish(bestw);
  out.residual = best;
  out.weights.assign(bestw.data(), bestw.data() + g);
  return out;
}

bool AxiomReport::all_pass() const {
  return std::all_of(results.begin(), results.end(), [](const AxiomResult& r) { return r.pass; });
}

const AxiomResult& AxiomReport::axiom(int a) const {
  for (const auto& r : results)
    if (r.axiom == a) return r;
  throw ValidationError("AxiomReport: axiom not present");
}

AxiomReport check_axioms(const FreeFamily& f, const std::vector<int>& levels_to_check, double tol) {
  std::vector<int> lv = levels_to_check;
  if (lv.empty())
    for (const auto& [n, gens] : f.levels) lv.push_back(n);
  auto has = [&](int n) { return std::find(lv.begin(), lv.end(), n) != lv.end() && f.levels.count(n); };
  AxiomReport rep;
  rep.results.push_back({1, true, 0.0, "finite hull: convex and closed by construction"});

  const double c = f.levels.count(1) && !f.levels.at(1).empty() ? uniform_lambda_min(f.levels.at(1)) : 0.0;
  rep.results.push_back({2, c > 1e-12, c, "c = lambda_min of the uniform level-1 mixture"});

  auto max_residual = [&](const std::vector<std::pair<Mat, const std::vector<Mat>*>>& jobs) {
    std::vector<double> res(jobs.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < jobs.size(); ++i) res[i] = hull_distance(jobs[i].first, *jobs[i].second).residual;
    double m = 0.0;
    for (double r : res) m = std::max(m, r);
    return m;
  };

  {
    std::vector<std::pair<Mat, const std::vector<Mat>*>> jobs;
    for (int n : lv)
      if (has(n) && has(n + 1))
        for (const auto& g : f.level(n + 1))
          jobs.push_back({partial_trace(g, std::vector<int>{static_cast<int>(ipow(f.d, n)), f.d}, {0}), &f.level(n)});
    const double r = max_residual(jobs);
    rep.results.push_back({3, r <= tol, r, jobs.empty() ? "no consecutive levels" : "partial trace of the last system"});
  }
  {
    std::vector<std::pair<Mat, const std::vector<Mat>*>> jobs;
    for (int a : lv)
      for (int b : lv)
        if (a <= b && has(a) && has(b) && has(a + b))
          for (const auto& x : f.level(a))
            for (const auto& y : f.level(b)) jobs.push_back({tensor(x, y), &f.level(a + b)});
    const double r = max_residual(jobs);
    rep.results.push_back({4, r <= tol, r, jobs.empty() ? "no level pairs" : "tensor products of generators"});
  }
  {
    std::vector<std::pair<Mat, const std::vector<Mat>*>> jobs;
    for (int n : lv) {
      if (!has(n) || n < 2 || n > 4) continue;
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      while (std::next_permutation(perm.begin(), perm.end()))
        for (const auto& g : f.level(n)) jobs.push_back({permute_subsystems(g, f.d, n, perm), &f.level(n)});
    }
    const double r = max_residual(jobs);
    rep.results.push_back({5, r <= tol, r, jobs.empty() ? "no level with 2 <= n <= 4" : "subsystem permutations"});
  }
  return rep;
}

}  // namespace steinlab
