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

#include "steinlab/fock.hpp"

#include <algorithm>
#include <cmath>

#include "steinlab/types.hpp"

namespace steinlab {

namespace {

constexpr long long kFockGuard = 4096;
constexpr int kChunk = 64;  // nodes per deterministic partial sum

void check_fock(const FockOperator& x, const char* what) {
  if (x.modes < 1 || x.cutoff < 0 || x.m.rows() != fock_dim(x.modes, x.cutoff) || x.m.cols() != x.m.rows())
    throw ValidationError(std::string(what) + ": operator does not match its Fock truncation");
}

double binom(int n, int k) { return std::exp(log_binomial(n, k)); }

}  // namespace

long long fock_dim(int modes, int cutoff) {
  if (modes < 1 || cutoff < 0) throw ValidationError("fock_dim: need modes >= 1 and cutoff >= 0");
  const long long d = ipow(cutoff + 1, modes);
  if (d > kFockGuard) throw SizeError("fock_dim: truncated space too large");
  return d;
}

long long fock_index(const Occupation& h, int cutoff) {
  long long i = 0;
  for (int v : h) {
    if (v < 0 || v > cutoff) throw ValidationError("fock_index: occupation outside the cutoff");
    i = i * (cutoff + 1) + v;
  }
  return i;
}

Occupation fock_occupation(long long i, int modes, int cutoff) {
  Occupation h(modes);
  for (int j = modes - 1; j >= 0; --j) {
    h[j] = static_cast<int>(i % (cutoff + 1));
    i /= cutoff + 1;
  }
  return h;
}

FockOperator fock_zero(int modes, int cutoff) {
  const long long d = fock_dim(modes, cutoff);
  return FockOperator{modes, cutoff, Mat::Zero(d, d)};
}

FockOperator fock_from_matrix(int modes, int cutoff, Mat m) {
  auto x = fock_zero(modes, cutoff);
  if (m.rows() != x.m.rows() || m.cols() != x.m.cols()) throw ValidationError("fock_from_matrix: size mismatch");
  x.m = std::move(m);
  return x;
}

FockOperator fock_ketbra(const Occupation& h, const Occupation& k, int cutoff) {
  if (h.size() != k.size() || h.empty()) throw ValidationError("fock_ketbra: occupation vectors differ in length");
  auto x = fock_zero(static_cast<int>(h.size()), cutoff);
  x.m(fock_index(h, cutoff), fock_index(k, cutoff)) = 1.0;
  return x;
}

FockOperator vacuum(int modes, int cutoff) {
  const Occupation z(modes, 0);
  return fock_ketbra(z, z, cutoff);
}

CoherentState coherent_state(cplx alpha, int cutoff) {
  if (cutoff < 0) throw ValidationError("coherent_state: cutoff must be nonnegative");
  CoherentState c;
  c.psi = Vec::Zero(cutoff + 1);
  const double a2 = std::norm(alpha);
  const double la = std::log(std::max(std::abs(alpha), 1e-300));
  // |<k|alpha>|^2 = e^{-|a|^2} |a|^{2k} / k!
  auto log_weight = [&](int k) { return -a2 + 2.0 * k * la - log_factorial(k); };
  double kept = 0.0;
  for (int k = 0; k <= cutoff; ++k) {
    const double mag = k == 0 ? std::exp(-0.5 * a2) : std::exp(0.5 * log_weight(k));
    c.psi(k) = mag * std::polar(1.0, k * std::arg(alpha));
    kept += mag * mag;
  }
  // sum the tail directly; 1 - kept would only resolve it to rounding level
  for (int k = cutoff + 1; k <= cutoff + 100000; ++k) {
    const double w = std::exp(log_weight(k));
    c.slack += w;
    if (k > a2 && w < 1e-300) break;
  }
  c.psi /= std::sqrt(kept);
  return c;
}

LossParams loss_params(double delta) {
  if (!(delta > 0.0)) throw ValidationError("loss_params: delta must be positive");
  const double s = 1.0 + delta * (1.0 + delta);
  return LossParams{delta, 1.0 / s, std::sqrt(s) / (1.0 + delta)};
}

FockOperator pure_loss(double lambda, const FockOperator& x) {
  check_fock(x, "pure_loss");
  if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("pure_loss: lambda must be in (0, 1)");
  const int c = x.cutoff;
  // coef[h][k][l] = lambda^{(h+k)/2} sqrt(C(h,l) C(k,l)) (1/lambda - 1)^l
  std::vector<double> coef((c + 1) * (c + 1) * (c + 1), 0.0);
  auto at = [c](int h, int k, int l) { return (h * (c + 1) + k) * (c + 1) + l; };
  for (int h = 0; h <= c; ++h)
    for (int k = 0; k <= c; ++k)
      for (int l = 0; l <= std::min(h, k); ++l)
        coef[at(h, k, l)] = std::pow(lambda, 0.5 * (h + k)) * std::sqrt(binom(h, l) * binom(k, l)) *
                            std::pow(1.0 / lambda - 1.0, l);
  const long long dim = x.dim();
  std::vector<Occupation> occ(dim);
  for (long long i = 0; i < dim; ++i) occ[i] = fock_occupation(i, x.modes, c);
  Mat cur = x.m;
  long long stride = dim;
  for (int j = 0; j < x.modes; ++j) {
    stride /= c + 1;
    Mat next = Mat::Zero(dim, dim);
    for (long long b = 0; b < dim; ++b)
      for (long long a = 0; a < dim; ++a) {
        const cplx v = cur(a, b);
        if (v == 0.0) continue;
        const int h = occ[a][j], k = occ[b][j];
        for (int l = 0; l <= std::min(h, k); ++l) next(a - l * stride, b - l * stride) += coef[at(h, k, l)] * v;
      }
    cur.swap(next);
  }
  return FockOperator{x.modes, c, cur};
}

std::vector<Mat> pure_loss_kraus(double lambda, int cutoff) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("pure_loss_kraus: lambda must be in (0, 1)");
  std::vector<Mat> ops;
  for (int l = 0; l <= cutoff; ++l) {
    Mat k = Mat::Zero(cutoff + 1, cutoff + 1);
    const double pre = std::sqrt(std::pow(1.0 / lambda - 1.0, l) / std::exp(log_factorial(l)));
    // a^l |h> = sqrt(h!/(h-l)!) |h-l>
    for (int h = l; h <= cutoff; ++h)
      k(h - l, h) = pre * std::sqrt(std::exp(log_factorial(h) - log_factorial(h - l))) * std::pow(lambda, 0.5 * h);
    ops.push_back(k);
  }
  return ops;
}

FockOperator damping(double mu, const FockOperator& x) {
  check_fock(x, "damping");
  if (!(mu > 0.0 && mu <= 1.0)) throw ValidationError("damping: mu must be in (0, 1]");
  FockOperator out = x;
  std::vector<double> scale(x.dim());
  for (long long i = 0; i < x.dim(); ++i) {
    int total = 0;
    for (int v : fock_occupation(i, x.modes, x.cutoff)) total += v;
    scale[i] = std::pow(mu, total);
  }
  for (long long b = 0; b < x.dim(); ++b)
    for (long long a = 0; a < x.dim(); ++a) out.m(a, b) *= scale[a] * scale[b];
  return out;
}

FockOperator loss_damping(double delta, const FockOperator& x) {
  const auto p = loss_params(delta);
  return pure_loss(p.lambda, damping(p.mu, x));
}

FockOperator lift(const SymTypeOperator& x, int cutoff, double* dropped) {
  if (x.d < 2) throw ValidationError("lift: need d >= 2");
  auto out = fock_zero(x.d - 1, cutoff);
  const auto& idx = *x.index;
  std::vector<long long> target(idx.size(), -1);
  for (int t = 0; t < idx.size(); ++t) {
    const Occupation occ(idx[t].counts.begin() + 1, idx[t].counts.end());
    if (*std::max_element(occ.begin(), occ.end()) <= cutoff) target[t] = fock_index(occ, cutoff);
  }
  double lost = 0.0;
  for (int a = 0; a < idx.size(); ++a)
    for (int b = 0; b < idx.size(); ++b) {
      if (target[a] >= 0 && target[b] >= 0) out.m(target[a], target[b]) = x.m(a, b);
      else lost += std::abs(x.m(a, b));
    }
  if (dropped) *dropped = lost;
  return out;
}

SymTypeOperator unlift(const FockOperator& x, int n) {
  check_fock(x, "unlift");
  auto out = sym_zero(n, x.modes + 1);
  std::vector<int> target(x.dim(), -1);
  for (long long i = 0; i < x.dim(); ++i) {
    const auto occ = fock_occupation(i, x.modes, x.cutoff);
    int total = 0;
    for (int v : occ) total += v;
    if (total > n) continue;
    std::vector<int> counts{n - total};
    counts.insert(counts.end(), occ.begin(), occ.end());
    target[i] = out.index->find(counts);
  }
  for (long long b = 0; b < x.dim(); ++b)
    for (long long a = 0; a < x.dim(); ++a)
      if (target[a] >= 0 && target[b] >= 0) out.m(target[a], target[b]) = x.m(a, b);
  return out;
}

FockOperator lifted_blur(int n, double delta, const FockOperator& x) {
  double dropped = 0.0;
  auto out = lift(blur_q(unlift(x, n), delta), x.cutoff, &dropped);
  // blurring only lowers the occupations of the modes x != 0
  if (dropped > 1e-12 * (1.0 + trace_norm(x.m))) throw std::logic_error("lifted_blur: output left the truncation");
  return out;
}

double limit_entry(const Occupation& h, const Occupation& k, const Occupation& h2, const Occupation& k2,
                   double delta) {
  if (h.size() != k.size() || h.size() != h2.size() || h.size() != k2.size())
    throw ValidationError("limit_entry: occupation vectors differ in length");
  if (!(delta > 0.0)) throw ValidationError("limit_entry: delta must be positive");
  double v = 1.0;
  for (std::size_t x = 0; x < h.size(); ++x) {
    const int l = h[x] - h2[x];
    if (l != k[x] - k2[x] || l < 0 || h2[x] < 0 || k2[x] < 0) return 0.0;
    v *= std::sqrt(binom(h[x], l) * binom(k[x], l)) * std::pow(delta, l) / std::pow(1.0 + delta, h[x] + k[x] - l);
  }
  return v;
}

FockOperator limit_operator(const Occupation& h, const Occupation& k, double delta, int cutoff) {
  auto out = fock_zero(static_cast<int>(h.size()), cutoff);
  fock_index(h, cutoff);
  fock_index(k, cutoff);
  for (long long b = 0; b < out.dim(); ++b) {
    const auto k2 = fock_occupation(b, out.modes, cutoff);
    for (long long a = 0; a < out.dim(); ++a) out.m(a, b) = limit_entry(h, k, fock_occupation(a, out.modes, cutoff), k2, delta);
  }
  return out;
}

ConvergenceStudy convergence_study(const Occupation& h, const Occupation& k, double delta,
                                   const std::vector<int>& n_grid, double threshold) {
  if (n_grid.empty() || !std::is_sorted(n_grid.begin(), n_grid.end()))
    throw ValidationError("convergence_study: n grid must be ascending and nonempty");
  int cutoff = 0, need = 0, need_k = 0;
  for (int v : h) cutoff = std::max(cutoff, v), need += v;
  for (int v : k) cutoff = std::max(cutoff, v), need_k += v;
  if (n_grid.front() < std::max(need, need_k)) throw ValidationError("convergence_study: n too small for the occupations");
  const auto x = fock_ketbra(h, k, cutoff);
  const auto lim = limit_operator(h, k, delta, cutoff);
  ConvergenceStudy s;
  for (int n : n_grid) s.rows.push_back({n, trace_norm(lifted_blur(n, delta, x).m - lim.m)});
  const double first = s.rows.front().error, last = s.rows.back().error;
  s.decreasing = make_leq("convergence-decreasing", last, first, 0.0);
  // an exactly fixed input gives errors at rounding level throughout
  if (first <= 1e-14 && last <= 1e-14) s.decreasing.status = Status::Pass;
  else if (!(last < first)) s.decreasing.status = Status::Fail;
  s.threshold = make_leq("convergence-threshold", last, threshold, 0.0);
  return s;
}

FockOperator lambda_map_fixed(double big_delta, const FockOperator& x, int nodes) {
  check_fock(x, "lambda_map");
  require_blur_delta(big_delta);
  if (nodes < 1) throw ValidationError("lambda_map: need at least one node");
  const int chunks = (nodes + kChunk - 1) / kChunk;
  std::vector<Mat> partial(chunks);
#pragma omp parallel for schedule(dynamic)
  for (int c = 0; c < chunks; ++c) {
    Mat acc = Mat::Zero(x.dim(), x.dim());
    for (int i = c * kChunk; i < std::min(nodes, (c + 1) * kChunk); ++i)
      acc += loss_damping((i + 0.5) * big_delta / nodes, x).m;
    partial[c] = std::move(acc);
  }
  FockOperator out = fock_zero(x.modes, x.cutoff);
  for (const auto& p : partial) out.m += p;
  out.m /= nodes;
  return out;
}

FockOperator lambda_map_fixed_serial(double big_delta, const FockOperator& x, int nodes) {
  check_fock(x, "lambda_map");
  require_blur_delta(big_delta);
  if (nodes < 1) throw ValidationError("lambda_map: need at least one node");
  FockOperator out = fock_zero(x.modes, x.cutoff);
  for (int c = 0; c * kChunk < nodes; ++c) {
    Mat acc = Mat::Zero(x.dim(), x.dim());
    for (int i = c * kChunk; i < std::min(nodes, (c + 1) * kChunk); ++i)
      acc += loss_damping((i + 0.5) * big_delta / nodes, x).m;
    out.m += acc;
  }
  out.m /= nodes;
  return out;
}

LambdaMapResult lambda_map(double big_delta, const FockOperator& x, int quad_nodes, double tolerance, int max_nodes) {
  LambdaMapResult r;
  r.nodes = quad_nodes;
  r.value = lambda_map_fixed(big_delta, x, quad_nodes);
  while (r.nodes < max_nodes) {
    auto next = lambda_map_fixed(big_delta, x, 2 * r.nodes);
    r.doubling_change = trace_norm(next.m - r.value.m);
    r.value = std::move(next);
    r.nodes *= 2;
    if (r.doubling_change < tolerance) {
      r.consistent = true;
      break;
    }
  }
  return r;
}

SupportReport support_test(const Vec& psi, const Mat& a, const std::vector<double>& multipliers, double tol) {
  require_psd(a, "support_test(A)");
  if (psi.size() != a.rows()) throw ValidationError("support_test: size mismatch");
  SupportReport s;
  s.multipliers = multipliers;
  const Vec u = psi / psi.norm();
  const Mat target = u * u.adjoint();
  for (double m : multipliers) s.f.push_back(trace_positive_part(hermitian_part(target - m * a)));
  for (std::size_t i = 1; i < s.f.size(); ++i)
    if (s.f[i] > s.f[i - 1] + 1e-12) s.monotone = false;
  // Numerical kernel: eigenvalues at rounding level. A kernel is trusted only when the rest of
  // the spectrum sits well above it, and the floor it implies survives the largest multiplier.
  const auto spec = hermitian_spectrum(a);
  const double top = std::max(spec.values.size() ? spec.values(0) : 0.0, 1e-300);
  const double zero = 1e-12 * top;
  double smallest_kept = top;
  Vec ker = Vec::Zero(u.size());
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    if (spec.values(i) <= zero) ker += spec.vectors.col(i) * spec.vectors.col(i).dot(u);
    else smallest_kept = std::min(smallest_kept, spec.values(i));
  }
  const double mmax = multipliers.empty() ? 0.0 : *std::max_element(multipliers.begin(), multipliers.end());
  s.kernel_overlap = ker.squaredNorm();
  const bool gap = smallest_kept >= 1e4 * zero;
  if (gap && s.kernel_overlap - mmax * zero > tol) {
    s.verdict = "NOT-IN-SUPPORT";
    s.witness = ker / ker.norm();
  } else if (!s.f.empty() && s.f.back() < tol) {
    s.verdict = "IN-SUPPORT";
    s.in_support = true;
  } else {
    s.verdict = "UNDECIDED";
  }
  s.status = s.monotone ? Status::Pass : Status::Fail;
  return s;
}

VacuumExperiment vacuum_support_experiment(const FockOperator& rho, double big_delta,
                                           const std::vector<double>& multipliers, int quad_nodes) {
  check_fock(rho, "vacuum_support_experiment");
  require_state(rho.m, "vacuum_support_experiment(rho)");
  VacuumExperiment e;
  e.averaged = lambda_map(big_delta, rho, quad_nodes);
  Vec vac = Vec::Zero(rho.dim());
  vac(0) = 1.0;
  e.support = support_test(vac, hermitian_part(e.averaged.value.m), multipliers);
  return e;
}

CoherentCounterexample coherent_counterexample(cplx alpha, double delta, int cutoff,
                                               const std::vector<double>& multipliers) {
  const auto cs = coherent_state(alpha, cutoff);
  const auto rho = fock_from_matrix(1, cutoff, cs.psi * cs.psi.adjoint());
  const auto p = loss_params(delta);
  CoherentCounterexample c;
  c.slack = cs.slack;
  c.floor_loss = 1.0 - std::exp(-p.lambda * std::norm(alpha));
  c.floor_composed = 1.0 - std::exp(-std::norm(alpha) / ((1.0 + delta) * (1.0 + delta)));
  Vec vac = Vec::Zero(cutoff + 1);
  vac(0) = 1.0;
  c.loss = support_test(vac, hermitian_part(pure_loss(p.lambda, rho).m), multipliers);
  c.composed = support_test(vac, hermitian_part(loss_damping(delta, rho).m), multipliers);
  const double mmax = multipliers.empty() ? 0.0 : *std::max_element(multipliers.begin(), multipliers.end());
  // |Tr X_+ - Tr Y_+| <= |X - Y|_1 and the truncated input is 2 sqrt(slack) from the coherent state
  const double trunc = 2.0 * mmax * std::sqrt(cs.slack);
  auto floor_record = [&](const char* name, const SupportReport& s, double floor) {
    const double lowest = s.f.empty() ? 0.0 : *std::min_element(s.f.begin(), s.f.end());
    auto r = make_leq(name, floor - trunc, lowest, 1e-10);
    r.certificates["floor"] = floor;
    r.certificates["truncation_slack"] = trunc;
    if (trunc > 0.01) {
      r.status = Status::Inconclusive;
      r.notes["reason"] = "truncation slack dominates; increase the cutoff";
    }
    return r;
  };
  c.loss_floor = floor_record("coherent-floor-loss", c.loss, c.floor_loss);
  c.composed_floor = floor_record("coherent-floor-composed", c.composed, c.floor_composed);
  return c;
}

}  // namespace steinlab
