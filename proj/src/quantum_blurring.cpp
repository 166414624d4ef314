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

#include "steinlab/quantum_blurring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "steinlab/hypergeometric.hpp"

namespace steinlab {

namespace {

constexpr long long kDenseGuard = 4096;
constexpr int kSymGuard = 3000;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log multinomial of a count vector; -inf if any entry is negative
double lmult(const std::vector<int>& c) {
  int total = 0;
  double l = 0.0;
  for (int v : c) {
    if (v < 0) return kNegInf;
    total += v;
    l -= log_factorial(v);
  }
  return l + log_factorial(total);
}

std::vector<int> minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

bool nonnegative(const std::vector<int>& a) {
  return std::all_of(a.begin(), a.end(), [](int v) { return v >= 0; });
}

void check_sym(const SymTypeOperator& x, const char* what) {
  if (!x.index || x.m.rows() != x.index->size() || x.m.cols() != x.index->size())
    throw ValidationError(std::string(what) + ": operator does not match its type basis");
}

long long dense_dim(int n, int d, const char* what) {
  const long long dim = ipow(d, n);
  if (dim > kDenseGuard) throw SizeError(std::string(what) + ": d^n exceeds the dense guard");
  return dim;
}

double logsumexp(const std::vector<double>& v) {
  double mx = kNegInf;
  for (double x : v) mx = std::max(mx, x);
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

int snap_floor(double x) {
  const double r = std::round(x);
  return std::abs(x - r) < 1e-9 ? static_cast<int>(r) : static_cast<int>(std::floor(x));
}

}  // namespace

bool SymTypeOperator::is_hermitian(double tol) const { return max_abs(m - m.adjoint()) <= tol; }

SymTypeOperator sym_zero(int n, int d) {
  if (n < 0 || d < 1) throw ValidationError("sym_zero: need n >= 0 and d >= 1");
  if (type_count(n, d) > kSymGuard) throw SizeError("sym_zero: too many types for a dense type-basis operator");
  auto idx = type_index(n, d);
  return SymTypeOperator{n, d, idx, Mat::Zero(idx->size(), idx->size())};
}

SymTypeOperator sym_from_matrix(int n, int d, Mat m) {
  auto x = sym_zero(n, d);
  if (m.rows() != x.m.rows() || m.cols() != x.m.cols()) throw ValidationError("sym_from_matrix: size mismatch");
  x.m = std::move(m);
  return x;
}

SymTypeOperator sym_ketbra(int n, int d, const TypeVector& t, const TypeVector& s) {
  auto x = sym_zero(n, d);
  const int i = x.index->find(t.counts), j = x.index->find(s.counts);
  if (i < 0 || j < 0) throw ValidationError("sym_ketbra: not a type of this level");
  x.m(i, j) = 1.0;
  return x;
}

Vec sym_basis_vector(int n, const TypeVector& t, int d) {
  const long long dim = dense_dim(n, d, "sym_basis_vector");
  if (t.n != n || t.size() != d) throw ValidationError("sym_basis_vector: type does not match n and d");
  const double amp = std::exp(-0.5 * lmult(t.counts));
  Vec v = Vec::Zero(dim);
  std::vector<int> counts(d);
  for (long long i = 0; i < dim; ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    long long rest = i;
    for (int k = 0; k < n; ++k) {
      ++counts[rest % d];
      rest /= d;
    }
    if (counts == t.counts) v(i) = amp;
  }
  return v;
}

Mat sym_isometry(int n, int d) {
  const long long dim = dense_dim(n, d, "sym_isometry");
  const auto idx = type_index(n, d);
  Mat v = Mat::Zero(dim, idx->size());
  std::vector<double> amp(idx->size());
  for (int j = 0; j < idx->size(); ++j) amp[j] = std::exp(-0.5 * lmult((*idx)[j].counts));
  std::vector<int> counts(d);
  for (long long i = 0; i < dim; ++i) {
    std::fill(counts.begin(), counts.end(), 0);
    long long rest = i;
    for (int k = 0; k < n; ++k) {
      ++counts[rest % d];
      rest /= d;
    }
    const int j = idx->find(counts);
    v(i, j) = amp[j];
  }
  return v;
}

Mat embed(const SymTypeOperator& x) {
  check_sym(x, "embed");
  const Mat v = sym_isometry(x.n, x.d);
  return v * x.m * v.adjoint();
}

SymTypeOperator unembed(const Mat& x, int n, int d) {
  const Mat v = sym_isometry(n, d);
  if (x.rows() != v.rows() || x.cols() != v.rows()) throw ValidationError("unembed: size mismatch");
  return sym_from_matrix(n, d, v.adjoint() * x * v);
}

SymOverlap sym_overlap(const TypeVector& w, const TypeVector& t) {
  if (w.size() != t.size()) throw ValidationError("sym_overlap: alphabet mismatch");
  if (w.n > t.n) throw ValidationError("sym_overlap: need n >= r");
  const auto rest = minus(t.counts, w.counts);
  if (!nonnegative(rest)) return SymOverlap{0.0, TypeVector{t.n - w.n, std::vector<int>(t.size(), 0)}};
  return SymOverlap{std::exp(0.5 * (lmult(rest) - lmult(t.counts))), TypeVector{t.n - w.n, rest}};
}

SymTypeOperator sym_partial_trace(const SymTypeOperator& x, int r) {
  check_sym(x, "sym_partial_trace");
  if (r < 0 || r > x.n) throw ValidationError("sym_partial_trace: need 0 <= r <= n");
  if (r == 0) return x;
  auto out = sym_zero(x.n - r, x.d);
  const auto& in = *x.index;
  const auto& ws = *type_index(r, x.d);
  // Tr_r |t><s| = sum_w C(r, w) f(t, w) f(s, w) |t - w><s - w|, f(t, w) = sqrt(C(n-r, t-w) / C(n, t))
  for (int k = 0; k < ws.size(); ++k) {
    const double cw = std::exp(lmult(ws[k].counts));
    std::vector<int> target(in.size(), -1);
    std::vector<double> f(in.size(), 0.0);
    for (int a = 0; a < in.size(); ++a) {
      const auto rest = minus(in[a].counts, ws[k].counts);
      if (!nonnegative(rest)) continue;
      target[a] = out.index->find(rest);
      f[a] = std::exp(0.5 * (lmult(rest) - lmult(in[a].counts)));
    }
    for (int b = 0; b < in.size(); ++b) {
      if (target[b] < 0) continue;
      for (int a = 0; a < in.size(); ++a)
        if (target[a] >= 0) out.m(target[a], target[b]) += cw * f[a] * f[b] * x.m(a, b);
    }
  }
  return out;
}

SymTypeOperator gamma(const SymTypeOperator& x, int r) {
  check_sym(x, "gamma");
  if (r < 0 || r > x.n) throw ValidationError("gamma: need 0 <= r <= n");
  if (r == 0) return x;
  const auto y = sym_partial_trace(x, r);
  auto out = sym_zero(x.n, x.d);
  const auto& small = *y.index;
  std::vector<int> target(small.size());
  std::vector<double> a(small.size());
  for (int i = 0; i < small.size(); ++i) {
    auto up = small[i].counts;
    up[0] += r;
    target[i] = out.index->find(up);
    // Pi_n (|0^r> (x) |n-r, tau>) = a(tau) |n, tau + r e_0>
    a[i] = std::exp(0.5 * (lmult(small[i].counts) - lmult(up)));
  }
  for (int i = 0; i < small.size(); ++i)
    for (int j = 0; j < small.size(); ++j) out.m(target[i], target[j]) = a[i] * a[j] * y.m(i, j);
  return out;
}

namespace {

// log of the (t', t) entry of M_{r,w}; -inf when the entry vanishes
double log_kraus_entry(const std::vector<int>& t, const std::vector<int>& w, int r, std::vector<int>* target) {
  auto rest = minus(t, w);
  if (!nonnegative(rest)) return kNegInf;
  *target = rest;
  (*target)[0] += r;
  return 0.5 * (2.0 * lmult(rest) + lmult(w) - lmult(*target) - lmult(t));
}

KrausFamily build_family(int n, int r, int d, const std::vector<double>* log_d) {
  if (n < 0 || r < 0 || r > n || d < 1) throw ValidationError("kraus_family: need 0 <= r <= n and d >= 1");
  const auto idx = type_index(n, d);
  const auto ws = type_index(r, d);
  KrausFamily k{n, r, d, ws->types(), std::vector<RMat>(ws->size())};
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < ws->size(); ++j) {
    RMat op = RMat::Zero(idx->size(), idx->size());
    std::vector<int> target;
    for (int t = 0; t < idx->size(); ++t) {
      double l = log_kraus_entry((*idx)[t].counts, (*ws)[j].counts, r, &target);
      if (l == kNegInf) continue;
      if (log_d) l -= 0.5 * (*log_d)[t];
      op(idx->find(target), t) = std::exp(l);
    }
    k.ops[j] = std::move(op);
  }
  return k;
}

}  // namespace

KrausFamily kraus_family(int n, int r, int d) { return build_family(n, r, d, nullptr); }

SymTypeOperator apply_kraus(const KrausFamily& k, const SymTypeOperator& x) {
  check_sym(x, "apply_kraus");
  if (x.n != k.n || x.d != k.d) throw ValidationError("apply_kraus: shape mismatch");
  auto out = sym_zero(x.n, x.d);
  for (const auto& op : k.ops) {
    const Mat c = op.cast<cplx>();
    out.m += c * x.m * c.adjoint();
  }
  return out;
}

RMat kraus_gram(const KrausFamily& k) {
  const Eigen::Index s = k.ops.empty() ? 0 : k.ops[0].rows();
  RMat g = RMat::Zero(s, s);
  for (const auto& op : k.ops) g += op.transpose() * op;
  return g;
}

std::vector<double> log_d_r_diag(int n, int r, int d) {
  if (n < 0 || r < 0 || r > n || d < 1) throw ValidationError("d_r_diag: need 0 <= r <= n and d >= 1");
  const auto idx = type_index(n, d);
  const auto ws = type_index(r, d);
  std::vector<double> out(idx->size());
  for (int t = 0; t < idx->size(); ++t) {
    const auto& tc = (*idx)[t].counts;
    std::vector<double> terms;
    for (int j = 0; j < ws->size(); ++j) {
      const auto& wc = (*ws)[j].counts;
      const auto rest = minus(tc, wc);
      if (!nonnegative(rest)) continue;
      auto shifted = rest;
      shifted[0] += r;
      terms.push_back(2.0 * lmult(rest) + lmult(wc) - lmult(shifted) - lmult(tc));
    }
    out[t] = logsumexp(terms);
  }
  return out;
}

std::vector<double> d_r_diag(int n, int r, int d) {
  auto l = log_d_r_diag(n, r, d);
  for (double& v : l) v = std::exp(v);
  return l;
}

KrausFamily theta_family(int n, int r, int d) {
  const auto log_d = log_d_r_diag(n, r, d);
  for (double v : log_d)
    if (!(v > kNegInf))
      throw ValidationError("theta_family: d_r vanished; the type-basis formula is inconsistent");
  return build_family(n, r, d, &log_d);
}

SymTypeOperator theta(const SymTypeOperator& x, int r) {
  check_sym(x, "theta");
  return apply_kraus(theta_family(x.n, r, x.d), x);
}

int blur_q_m(int n, double delta) { return snap_floor(delta * n); }

void require_blur_delta(double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) throw ValidationError("delta must be in (0, 1/2]");
}

SymTypeOperator blur_q(const SymTypeOperator& x, double delta) {
  check_sym(x, "blur_q");
  require_blur_delta(delta);
  const int n = x.n, m = blur_q_m(n, delta);
  const int top = std::min(m, n);
  std::vector<Mat> parts(top + 1);
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r <= top; ++r) parts[r] = hyp_pmf(n + m, m, n, r) * gamma(x, r).m;
  auto out = sym_zero(n, x.d);
  for (const auto& p : parts) out.m += p;
  return out;
}

SymTypeOperator blur_q_serial(const SymTypeOperator& x, double delta) {
  check_sym(x, "blur_q_serial");
  require_blur_delta(delta);
  const int n = x.n, m = blur_q_m(n, delta);
  auto out = sym_zero(n, x.d);
  for (int r = 0; r <= std::min(m, n); ++r)
    out.m += hyp_pmf(n + m, m, n, r) * apply_kraus(kraus_family(n, r, x.d), x).m;
  return out;
}

Mat blur_rho_m(int n, int m, const Mat& rho, const Mat& x) {
  require_state(rho, "blur_rho(rho)");
  const int d = static_cast<int>(rho.rows());
  const long long dim = dense_dim(n, d, "blur_rho");
  if (x.rows() != dim || x.cols() != dim) throw ValidationError("blur_rho: X must act on (C^d)^n");
  if (m < 0) throw ValidationError("blur_rho: m must be nonnegative");
  // Tr_m S_{n+m}(X (x) rho^m) = sum_r H(n+m, m; n, r) S_n(rho^r (x) Tr_r S_n(X))
  const Mat xs = symmetrize(x, d, n);
  Mat out = Mat::Zero(dim, dim);
  for (int r = 0; r <= std::min(m, n); ++r) {
    const double h = hyp_pmf(n + m, m, n, r);
    if (h == 0.0) continue;
    Mat part;
    if (r == 0) {
      part = xs;
    } else if (r == n) {
      part = xs.trace() * tensor_power(rho, n);
    } else {
      std::vector<int> keep(n - r);
      std::iota(keep.begin(), keep.end(), 0);
      part = symmetrize(tensor(tensor_power(rho, r), partial_trace(xs, std::vector<int>(n, d), keep)), d, n);
    }
    out += h * part;
  }
  return out;
}

Mat blur_rho(int n, double delta, const Mat& rho, const Mat& x) {
  require_blur_delta(delta);
  return blur_rho_m(n, blur_q_m(n, delta), rho, x);
}

CheckRecord check_tail_filtering(const Mat& t, const Mat& v_basis, const Mat& z) {
  require_hermitian(t, "check_tail_filtering(T)");
  if (z.rows() != t.rows() || z.cols() != t.cols() || v_basis.rows() != t.rows())
    throw ValidationError("check_tail_filtering: size mismatch");
  const Eigen::Index dim = t.rows();
  Mat p = Mat::Zero(dim, dim);
  if (v_basis.cols() > 0) {
    Eigen::HouseholderQR<Mat> qr(v_basis);
    const Mat q = qr.householderQ() * Mat::Identity(dim, v_basis.cols());
    p = q * q.adjoint();
  }
  const Mat comp = Mat::Identity(dim, dim) - p;
  const double mu = operator_norm(comp * t);
  const double z1 = trace_norm(z);
  const double rhs = (1.0 - (1.0 - mu) * (1.0 - mu)) * z1;
  auto r = make_leq("tail-filtering", trace_norm(t * z * t), rhs, 1e-10 * (1.0 + z1));
  r.certificates["mu"] = mu;
  std::string reason;
  if (std::abs(operator_norm(t) - 1.0) > 1e-10) reason = "operator norm of T is not 1";
  else if (operator_norm(comp * t * p) > 1e-10) reason = "V is not invariant under T";
  else if (max_abs(p * z * p) > 1e-12 * (1.0 + z1)) reason = "P_V Z P_V is not zero";
  else if (!(mu < 1.0)) reason = "mu is not below 1";
  if (!reason.empty()) {
    r.status = Status::Inapplicable;
    r.notes["reason"] = reason;
  }
  return r;
}

bool low_occupation(const TypeVector& t, int big_n) {
  for (int x = 1; x < t.size(); ++x)
    if (t.counts[x] > big_n) return false;
  return true;
}

CheckRecord check_output_norm(const SymTypeOperator& x, int big_n, double delta) {
  check_sym(x, "check_output_norm");
  require_blur_delta(delta);
  if (big_n < 1 || big_n > x.n) throw ValidationError("check_output_norm: need 1 <= N <= n");
  const auto& idx = *x.index;
  double block = 0.0;
  for (int a = 0; a < idx.size(); ++a)
    for (int b = 0; b < idx.size(); ++b)
      if (low_occupation(idx[a], big_n) && low_occupation(idx[b], big_n)) block = std::max(block, std::abs(x.m(a, b)));
  const double x1 = trace_norm(x.m);
  const double rhs =
      2.0 * (std::exp(-x.n * delta / 18.0) + std::sqrt(3.0) * std::exp(-big_n * delta * delta / 16.0)) * x1;
  auto r = make_leq("output-norm", trace_norm(blur_q(x, delta).m), rhs, 1e-10 * (1.0 + x1));
  if (block > 1e-12 * (1.0 + x1)) {
    r.status = Status::Inapplicable;
    r.notes["reason"] = "low-occupation block is not zero";
  }
  r.certificates["N"] = big_n;
  return r;
}

CheckRecord check_d_r_bound(int n, int r, int d, int big_n) {
  if (!(r > 0 && r < n)) throw ValidationError("check_d_r_bound: need 0 < r < n");
  if (big_n < 0 || big_n > n) throw ValidationError("check_d_r_bound: need 0 <= N <= n");
  const double eta = std::min(static_cast<double>(r) / n, 1.0 - static_cast<double>(r) / n);
  const auto idx = type_index(n, d);
  const auto dr = d_r_diag(n, r, d);
  double worst = 0.0;
  for (int t = 0; t < idx->size(); ++t) {
    const auto& c = (*idx)[t].counts;
    if (*std::max_element(c.begin() + 1, c.end()) >= big_n) worst = std::max(worst, dr[t]);
  }
  auto rec = make_leq("d_r-bound", worst, 3.0 * std::exp(-big_n * eta * eta / 2.0), 1e-12);
  rec.certificates["eta"] = eta;
  return rec;
}

GqslChainTerms check_gqsl_chain(const Mat& rho, const FreeFamily& family, int n, double delta,
                                const std::optional<Mat>& rho_n, double eta) {
  require_state(rho, "check_gqsl_chain(rho)");
  require_blur_delta(delta);
  const int d = static_cast<int>(rho.rows());
  if (family.d != d) throw ValidationError("check_gqsl_chain: family dimension differs from rho");
  if (n < 1 || n > family.max_level()) throw ValidationError("check_gqsl_chain: family level n not available");
  const Mat state = rho_n ? *rho_n : tensor_power(rho, n);
  require_state(state, "check_gqsl_chain(rho_n)");
  GqslChainTerms out;
  out.m = blur_q_m(n, delta);
  out.log_inv_c = std::log2(1.0 / family.c);
  const Mat blurred = hermitian_part(blur_rho_m(n, out.m, rho, state));
  out.blurred = d_max_to_hull(blurred, family.level(n));
  out.original = d_max_to_hull(state, family.level(n));
  const double cost = out.m * out.log_inv_c;
  auto main = make_bracketed_leq("gqsl-chain", out.blurred.lower, out.blurred.upper, out.original.lower + cost,
                                 out.original.upper + cost, 1e-6);
  main.certificates["m"] = out.m;
  main.certificates["log_inv_c"] = out.log_inv_c;
  if (out.blurred.approximate || out.original.approximate) main.notes["optimizer"] = "bisection stopped early";
  out.records.push_back(main);
  out.records.push_back(make_bracketed_leq("chain-universal-bound", out.original.lower, out.original.upper,
                                           n * out.log_inv_c, n * out.log_inv_c, 1e-6));
  if (n + out.m <= family.max_level() && ipow(d, n + out.m) <= kDenseGuard) {
    const Mat ext = out.m == 0 ? state : tensor(state, tensor_power(rho, out.m));
    out.extended = d_max_to_hull(ext, family.level(n + out.m));
    out.records.push_back(make_bracketed_leq("chain-symmetrise-trace", out.blurred.lower, out.blurred.upper,
                                             out.extended.lower, out.extended.upper, 1e-6));
    out.records.push_back(make_bracketed_leq("chain-subadditivity", out.extended.lower, out.extended.upper,
                                             out.original.lower + cost, out.original.upper + cost, 1e-6));
  }
  // smoothed triangle through the blurred state
  const Mat target = tensor_power(rho, n);
  const auto lhs = dtilde_to_hull(target, family.level(n), eta);
  const auto via = dtilde_max(target, blurred, eta);
  auto tri = make_bracketed_leq("chain-dtilde-triangle", lhs.lower, lhs.upper, via.lower + out.blurred.lower,
                                via.upper + out.blurred.upper, 1e-6);
  tri.certificates["eta"] = eta;
  tri.certificates["dtilde_to_blurred"] = via.upper;
  out.records.push_back(tri);
  // continuity of the relative entropy of resource between rho_n and rho^{(x) n}
  const double eps = std::min(1.0, trace_distance(state, target));
  const auto d_state = rel_ent_to_hull(state, family.level(n));
  const auto d_target = rel_ent_to_hull(target, family.level(n));
  const double gap_hi = std::max(d_state.upper - d_target.lower, d_target.upper - d_state.lower);
  const double gap_lo = std::max(0.0, std::max(d_state.lower - d_target.upper, d_target.lower - d_state.upper));
  const double bound = eps * n * out.log_inv_c + bosonic_g(eps);
  auto ac = make_bracketed_leq("chain-asymptotic-continuity", gap_lo, gap_hi, bound, bound, 1e-6);
  ac.certificates["eps"] = eps;
  out.records.push_back(ac);
  return out;
}

std::vector<double> blurring_proxy(const Mat& rho, const Mat& rho_n, int n, double big_delta,
                                   const std::vector<double>& multipliers) {
  require_blur_delta(big_delta);
  const int d = static_cast<int>(rho.rows());
  const long long dim = dense_dim(n, d, "blurring_proxy");
  Mat avg = Mat::Zero(dim, dim);
  const int top = blur_q_m(n, big_delta);
  for (int m = 0; m <= top; ++m) {
    // measure of {delta in (0, Delta] : floor(delta n) = m}
    const double len = std::min(big_delta, (m + 1.0) / n) - static_cast<double>(m) / n;
    if (len <= 0.0) continue;
    avg += (len / big_delta) * blur_rho_m(n, m, rho, rho_n);
  }
  const Mat target = tensor_power(rho, n);
  std::vector<double> out;
  for (double mult : multipliers) out.push_back(trace_positive_part(hermitian_part(target - mult * avg)));
  return out;
}

}  // namespace steinlab
