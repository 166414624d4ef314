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

#include "steinlab/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace steinlab {

namespace {

constexpr double kSupportEig = 1e-12;
constexpr double kSupportMass = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_eps(double eps, bool allow_zero, const char* what) {
  if (!(eps < 1.0) || eps < 0.0 || (!allow_zero && eps == 0.0))
    throw ValidationError(std::string(what) + ": eps out of range");
}

// Smallest mu >= 0 with sum_x (p(x) - mu q(x))_+ <= eps; +inf if none.
double classical_threshold(const Distribution& p, const Distribution& q, double eps) {
  double outside = 0.0;
  std::vector<std::pair<double, std::size_t>> ratios;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] <= 0.0) continue;
    if (q[x] <= 0.0) outside += p[x];
    else ratios.push_back({p[x] / q[x], x});
  }
  if (outside > eps) return kInf;
  std::sort(ratios.rbegin(), ratios.rend());
  // phi(mu) = outside + sum_{r_x > mu} (p_x - mu q_x); walk breakpoints downward.
  double sp = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const std::size_t x = ratios[i].second;
    sp += p[x];
    sq += q[x];
    const double next = (i + 1 < ratios.size()) ? ratios[i + 1].first : 0.0;
    // on [next, r_i]: phi(mu) = outside + sp - mu sq
    const double phi_next = outside + sp - next * sq;
    if (phi_next > eps) {
      return (outside + sp - eps) / sq;
    }
  }
  return 0.0;
}

}  // namespace

double DivergenceResult::as_double() const { return infinite ? kInf : value; }

DivergenceResult DivergenceResult::infinity() {
  DivergenceResult r;
  r.infinite = true;
  r.lower = r.upper = kInf;
  return r;
}

DivergenceResult DivergenceResult::exact(double v) {
  DivergenceResult r;
  r.value = r.lower = r.upper = v;
  return r;
}

void require_distribution(const Distribution& p, const char* what) {
  if (p.empty()) throw ValidationError(std::string(what) + ": empty distribution");
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw ValidationError(std::string(what) + ": negative weight");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12 * std::max<std::size_t>(1, p.size()))
    throw ValidationError(std::string(what) + ": weights do not sum to 1");
}

Mat diag_matrix(const Distribution& p) {
  Mat m = Mat::Zero(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) m(i, i) = p[i];
  return m;
}

double total_variation(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw ValidationError("total_variation: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return 0.5 * s;
}

DivergenceResult umegaki(const Mat& rho, const Mat& sigma) {
  require_state(rho, "umegaki(rho)");
  require_state(sigma, "umegaki(sigma)");
  if (rho.rows() != sigma.rows()) throw ValidationError("umegaki: dimension mismatch");
  const auto sr = hermitian_spectrum(rho);
  const auto ss = hermitian_spectrum(sigma);
  double d = 0.0;
  for (Eigen::Index i = 0; i < sr.values.size(); ++i)
    if (sr.values(i) > 0.0) d += sr.values(i) * std::log2(sr.values(i));
  const Mat r = ss.vectors.adjoint() * rho * ss.vectors;
  double outside = 0.0;
  for (Eigen::Index j = 0; j < ss.values.size(); ++j) {
    const double m = r(j, j).real();
    if (ss.values(j) <= kSupportEig) outside += m;
    else d -= m * std::log2(ss.values(j));
  }
  if (outside > kSupportMass) return DivergenceResult::infinity();
  return DivergenceResult::exact(d);
}

bool is_diagonal(const Mat& m) {
  for (Eigen::Index a = 0; a < m.rows(); ++a)
    for (Eigen::Index b = 0; b < m.cols(); ++b)
      if (a != b && m(a, b) != 0.0) return false;
  return true;
}

namespace {

// Commuting diagonal pairs are classical; entries far below the spectral threshold still count.
Distribution diagonal_of(const Mat& m) {
  Distribution p(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index a = 0; a < m.rows(); ++a) p[a] = std::max(m(a, a).real(), 0.0);
  return p;
}

}  // namespace

DivergenceResult d_max(const Mat& rho, const Mat& sigma) {
  require_state(rho, "d_max(rho)");
  require_state(sigma, "d_max(sigma)");
  if (rho.rows() != sigma.rows()) throw ValidationError("d_max: dimension mismatch");
  if (is_diagonal(rho) && is_diagonal(sigma)) return d_max_classical(diagonal_of(rho), diagonal_of(sigma));
  const auto ss = hermitian_spectrum(sigma);
  const Mat r = ss.vectors.adjoint() * rho * ss.vectors;
  std::vector<Eigen::Index> sup;
  double outside = 0.0;
  for (Eigen::Index j = 0; j < ss.values.size(); ++j) {
    if (ss.values(j) > kSupportEig) sup.push_back(j);
    else outside += r(j, j).real();
  }
  if (outside > kSupportMass) return DivergenceResult::infinity();
  const auto k = static_cast<Eigen::Index>(sup.size());
  Mat m(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b)
      m(a, b) = r(sup[a], sup[b]) / std::sqrt(ss.values(sup[a]) * ss.values(sup[b]));
  return DivergenceResult::exact(std::log2(lambda_max(m)));
}

DivergenceResult d_h(const Mat& rho, const Mat& sigma, double eps) {
  require_state(rho, "d_h(rho)");
  require_state(sigma, "d_h(sigma)");
  require_eps(eps, false, "d_h");
  if (rho.rows() != sigma.rows()) throw ValidationError("d_h: dimension mismatch");
  const double target = 1.0 - eps;
  const Eigen::Index dim = rho.rows();

  // Tests supported on ker(sigma) cost nothing.
  const auto ss = hermitian_spectrum(sigma);
  Mat pker = Mat::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    if (ss.values(j) <= kSupportEig) pker += projector(ss.vectors.col(j));
  const double m0 = (pker * rho).trace().real();
  if (m0 >= target && m0 > 0.0) {
    auto r = DivergenceResult::infinity();
    r.witness_operator = (target / m0) * pker;
    return r;
  }

  auto proj_mass = [&](double t, Mat& p) {
    p = positive_projector(rho - t * sigma, 0.0);
    return (p * rho).trace().real();
  };
  Mat plo, phi;
  double tlo = 1.0, thi = 1.0;
  double b = proj_mass(tlo, plo);
  while (b < target && tlo > 1e-300) {
    tlo *= 0.5;
    b = proj_mass(tlo, plo);
  }
  double a = proj_mass(thi, phi);
  while (a > target && thi < 1e300) {
    thi *= 2.0;
    a = proj_mass(thi, phi);
  }
  int it = 0;
  while (thi / tlo - 1.0 > 1e-14 && it < 2000) {
    ++it;
    const double mid = std::sqrt(tlo * thi);
    if (mid <= tlo || mid >= thi) break;
    Mat pm;
    const double f = proj_mass(mid, pm);
    if (f >= target) { tlo = mid; b = f; plo = pm; }
    else { thi = mid; a = f; phi = pm; }
  }
  const double theta = (b - a > 0.0) ? std::clamp((target - a) / (b - a), 0.0, 1.0) : 0.0;
  const Mat q = hermitian_part((1.0 - theta) * phi + theta * plo);
  const double v = (q * sigma).trace().real();
  double dual = 0.0;
  for (double t : {tlo, thi})
    dual = std::max(dual, (target - trace_positive_part(hermitian_part(rho - t * sigma))) / t);
  if (v <= 0.0) {
    auto r = DivergenceResult::infinity();
    r.witness_operator = q;
    return r;
  }
  DivergenceResult r = DivergenceResult::exact(-std::log2(v));
  r.upper = dual > 0.0 ? -std::log2(std::min(dual, v)) : kInf;
  r.certificate = v - dual;
  r.witness_operator = q;
  r.threshold = thi;
  r.iterations = it;
  return r;
}

DivergenceResult dtilde_max(const Mat& rho, const Mat& sigma, double eps) {
  require_state(rho, "dtilde_max(rho)");
  require_state(sigma, "dtilde_max(sigma)");
  require_eps(eps, true, "dtilde_max");
  if (eps > 0.0 && rho.rows() == sigma.rows() && is_diagonal(rho) && is_diagonal(sigma)) {
    auto r = dtilde_classical(diagonal_of(rho), diagonal_of(sigma), eps);
    r.lower = r.upper = r.value;
    return r;
  }
  const auto dm = d_max(rho, sigma);
  if (eps == 0.0) return dm;
  auto phi = [&](double lam) {
    return trace_positive_part(hermitian_part(rho - std::exp2(lam) * sigma));
  };
  double lo = std::log2(1.0 - eps);
  double hi;
  if (!dm.infinite) {
    hi = std::max(dm.value, lo);
  } else {
    hi = 1.0;
    while (phi(hi) > eps) {
      hi *= 2.0;
      if (hi > 1024.0) return DivergenceResult::infinity();
    }
  }
  DivergenceResult r;
  std::vector<std::pair<double, double>> trace;
  int it = 0;
  while (hi - lo > 1e-13 && it < 200) {
    ++it;
    const double mid = 0.5 * (lo + hi);
    const double f = phi(mid);
    trace.push_back({mid, f});
    if (f <= eps) hi = mid;
    else lo = mid;
  }
  std::sort(trace.begin(), trace.end());
  for (std::size_t i = 1; i < trace.size(); ++i)
    if (trace[i].second > trace[i - 1].second + 1e-12) r.monotone_trace = false;
  r.value = r.upper = hi;
  r.lower = lo;
  r.certificate = phi(hi);
  r.threshold = hi;
  r.iterations = it;
  return r;
}

DivergenceResult umegaki_classical(const Distribution& p, const Distribution& q) {
  require_distribution(p, "umegaki_classical(p)");
  require_distribution(q, "umegaki_classical(q)");
  if (p.size() != q.size()) throw ValidationError("umegaki_classical: size mismatch");
  double d = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] <= 0.0) continue;
    if (q[x] <= 0.0) return DivergenceResult::infinity();
    d += p[x] * std::log2(p[x] / q[x]);
  }
  return DivergenceResult::exact(d);
}

DivergenceResult d_max_classical(const Distribution& p, const Distribution& q) {
  require_distribution(p, "d_max_classical(p)");
  require_distribution(q, "d_max_classical(q)");
  if (p.size() != q.size()) throw ValidationError("d_max_classical: size mismatch");
  double m = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (p[x] <= 0.0) continue;
    if (q[x] <= 0.0) return DivergenceResult::infinity();
    m = std::max(m, p[x] / q[x]);
  }
  return DivergenceResult::exact(std::log2(m));
}

DivergenceResult d_h_classical(const Distribution& p, const Distribution& q, double eps) {
  require_distribution(p, "d_h_classical(p)");
  require_distribution(q, "d_h_classical(q)");
  require_eps(eps, false, "d_h_classical");
  if (p.size() != q.size()) throw ValidationError("d_h_classical: size mismatch");
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  // decreasing likelihood ratio, q = 0 first
  auto key = [&](std::size_t x) { return q[x] > 0.0 ? p[x] / q[x] : (p[x] > 0.0 ? kInf : -1.0); };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) > key(b); });
  const double target = 1.0 - eps;
  std::vector<double> test(p.size(), 0.0);
  double got = 0.0, cost = 0.0;
  for (std::size_t x : order) {
    if (got >= target) break;
    if (p[x] <= 0.0) continue;
    const double take = std::min(1.0, (target - got) / p[x]);
    test[x] = take;
    got += take * p[x];
    cost += take * q[x];
  }
  DivergenceResult r;
  r.weights = test;
  if (cost <= 0.0) {
    r = DivergenceResult::infinity();
    r.weights = test;
    return r;
  }
  r.value = r.lower = r.upper = -std::log2(cost);
  return r;
}

DivergenceResult dtilde_classical(const Distribution& p, const Distribution& q, double eps) {
  require_distribution(p, "dtilde_classical(p)");
  require_distribution(q, "dtilde_classical(q)");
  require_eps(eps, true, "dtilde_classical");
  if (p.size() != q.size()) throw ValidationError("dtilde_classical: size mismatch");
  const double mu = classical_threshold(p, q, eps);
  if (std::isinf(mu)) return DivergenceResult::infinity();
  auto r = DivergenceResult::exact(std::log2(mu));
  r.threshold = r.value;
  return r;
}

DivergenceResult d_max_smoothed_classical(const Distribution& p, const Distribution& q, double eps) {
  require_distribution(p, "d_max_smoothed_classical(p)");
  require_distribution(q, "d_max_smoothed_classical(q)");
  require_eps(eps, true, "d_max_smoothed_classical");
  if (p.size() != q.size()) throw ValidationError("d_max_smoothed_classical: size mismatch");
  double mu = classical_threshold(p, q, eps);
  if (std::isinf(mu)) return DivergenceResult::infinity();
  mu = std::max(mu, 1.0);
  // cut above the cap, re-deposit proportionally to the remaining room
  std::vector<double> ps(p.size());
  double cut = 0.0, room = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double cap = mu * q[x];
    ps[x] = std::min(p[x], cap);
    cut += p[x] - ps[x];
    room += cap - ps[x];
  }
  if (cut > 0.0 && room > 0.0)
    for (std::size_t x = 0; x < p.size(); ++x) ps[x] += cut * (mu * q[x] - ps[x]) / room;
  auto r = DivergenceResult::exact(std::log2(mu));
  r.smoothed = ps;
  r.threshold = r.value;
  r.certificate = total_variation(p, ps);
  return r;
}

}  // namespace steinlab
