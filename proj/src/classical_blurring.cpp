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

#include "steinlab/classical_blurring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "steinlab/hypergeometric.hpp"

namespace steinlab {

namespace {

constexpr int kKernelGuard = 20000;  // type classes per side
constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alphabet(int n, int k, const char* what) {
  if (n < 1 || k < 1) throw ValidationError(std::string(what) + ": need n >= 1 and alphabet >= 1");
}

std::vector<double> diagonal_of(const Mat& x, const char* what) {
  const int d = static_cast<int>(x.rows());
  std::vector<double> out(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i != j && std::abs(x(i, j)) > 1e-12)
        throw ValidationError(std::string(what) + ": family is not classical (off-diagonal entries)");
    }
  for (int i = 0; i < d; ++i) out[i] = std::max(0.0, x(i, i).real());
  return out;
}

// Type law of a sequence drawn from the product of the given per-site distributions.
std::vector<double> product_type_law(const std::vector<const std::vector<double>*>& sites, int k) {
  std::vector<double> dp{1.0};
  for (int j = 0; j < static_cast<int>(sites.size()); ++j) {
    const auto& from = *type_index(j, k);
    const auto& to = *type_index(j + 1, k);
    std::vector<double> next(to.size(), 0.0);
    for (int a = 0; a < from.size(); ++a) {
      if (dp[a] == 0.0) continue;
      auto counts = from[a].counts;
      for (int x = 0; x < k; ++x) {
        const double px = (*sites[j])[x];
        if (px == 0.0) continue;
        ++counts[x];
        next[to.find(counts)] += dp[a] * px;
        --counts[x];
      }
    }
    dp.swap(next);
  }
  return dp;
}

DivergenceResult clamp_at_zero(DivergenceResult r) {
  if (r.infinite) return r;
  r.value = std::max(0.0, r.value);
  r.lower = std::max(0.0, r.lower);
  r.upper = std::max(0.0, r.upper);
  return r;
}

std::vector<Mat> as_diagonals(const std::vector<std::vector<double>>& v) {
  std::vector<Mat> out;
  out.reserve(v.size());
  for (const auto& g : v) out.push_back(diag_matrix(g));
  return out;
}

}  // namespace

double SymmetricDistribution::mass(const TypeVector& t) const {
  const int i = index->find(t.counts);
  return i < 0 ? 0.0 : weights[i];
}

SymmetricDistribution make_symmetric(int n, int alphabet_size, std::vector<double> weights) {
  check_alphabet(n, alphabet_size, "make_symmetric");
  SymmetricDistribution p{type_index(n, alphabet_size), std::move(weights)};
  if (static_cast<int>(p.weights.size()) != p.index->size())
    throw ValidationError("make_symmetric: weight count does not match the number of types");
  require_distribution(p.weights, "make_symmetric");
  return p;
}

SymmetricDistribution iid_types(const Distribution& p, int n) {
  require_distribution(p, "iid_types");
  const int k = static_cast<int>(p.size());
  check_alphabet(n, k, "iid_types");
  auto idx = type_index(n, k);
  std::vector<double> w(idx->size(), 0.0);
  for (int i = 0; i < idx->size(); ++i) {
    const auto& t = (*idx)[i];
    double l = log_multinomial(t);
    bool zero = false;
    for (int x = 0; x < k; ++x) {
      if (t.counts[x] == 0) continue;
      if (p[x] == 0.0) {
        zero = true;
        break;
      }
      l += t.counts[x] * std::log(p[x]);
    }
    w[i] = zero ? 0.0 : std::exp(l);
  }
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= s;
  return SymmetricDistribution{idx, std::move(w)};
}

double ball_mass(const SymmetricDistribution& p, const Distribution& s, double delta) {
  if (static_cast<int>(s.size()) != p.alphabet_size()) throw ValidationError("ball_mass: alphabet mismatch");
  double m = 0.0;
  for (int i = 0; i < p.index->size(); ++i)
    if (in_ball((*p.index)[i], s, delta)) m += p.weights[i];
  return std::min(1.0, m);
}

BlurKernel blur_kernel(int n, int m, int alphabet_size) {
  check_alphabet(n, alphabet_size, "blur_kernel");
  if (m < 0) throw ValidationError("blur_kernel: m must be nonnegative");
  if (type_count(n, alphabet_size) > kKernelGuard) throw SizeError("blur_kernel: too many types");
  BlurKernel b{n, m, alphabet_size, type_index(n, alphabet_size), RMat()};
  const auto& idx = *b.index;
  const int size = idx.size();
  const int big = n + m * alphabet_size;
  b.k = RMat::Zero(size, size);
#pragma omp parallel for schedule(dynamic)
  for (int u = 0; u < size; ++u) {
    TypeVector v{big, idx[u].counts};
    for (int& c : v.counts) c += m;
    for (int t = 0; t < size; ++t) b.k(t, u) = multivariate_pmf(v, idx[t]);
  }
  return b;
}

BlurKernel blur_kernel_serial(int n, int m, int alphabet_size) {
  check_alphabet(n, alphabet_size, "blur_kernel_serial");
  if (m < 0) throw ValidationError("blur_kernel_serial: m must be nonnegative");
  if (type_count(n, alphabet_size) > kKernelGuard) throw SizeError("blur_kernel_serial: too many types");
  BlurKernel b{n, m, alphabet_size, type_index(n, alphabet_size), RMat()};
  const auto& idx = *b.index;
  const int size = idx.size();
  b.k = RMat::Zero(size, size);
  for (int u = 0; u < size; ++u) {
    TypeVector v{n + m * alphabet_size, idx[u].counts};
    for (int& c : v.counts) c += m;
    for (int t = 0; t < size; ++t) b.k(t, u) = multivariate_pmf_ratio(v, idx[t]);
  }
  return b;
}

SymmetricDistribution apply_blur(const BlurKernel& kernel, const SymmetricDistribution& p) {
  if (p.n() != kernel.n || p.alphabet_size() != kernel.alphabet_size)
    throw ValidationError("apply_blur: kernel and distribution shapes differ");
  const RVec in = Eigen::Map<const RVec>(p.weights.data(), static_cast<Eigen::Index>(p.weights.size()));
  const RVec out = kernel.k * in;
  std::vector<double> w(out.data(), out.data() + out.size());
  for (double& v : w) v = std::max(0.0, v);
  const double s = std::accumulate(w.begin(), w.end(), 0.0);
  for (double& v : w) v /= s;
  return SymmetricDistribution{p.index, std::move(w)};
}

double typicality_mass(const Distribution& p, int n, double delta) {
  return ball_mass(iid_types(p, n), p, delta);
}

double delta_n(int n, int alphabet_size, double eta) {
  check_alphabet(n, alphabet_size, "delta_n");
  if (!(eta > 0.0 && eta < 1.0)) throw ValidationError("delta_n: eta must be in (0, 1)");
  return std::sqrt(alphabet_size / (2.0 * n) * std::log2((n + 1.0) / eta));
}

int blur_m(int n, double delta) {
  // guard against 2*delta*n landing a rounding error above an integer
  const double x = 2.0 * delta * n;
  const double r = std::round(x);
  return std::abs(x - r) < 1e-9 ? static_cast<int>(r) : static_cast<int>(std::ceil(x));
}

DivergenceResult d_max_smoothed_types(const SymmetricDistribution& p, const SymmetricDistribution& q, double eps) {
  if (p.index != q.index) throw ValidationError("d_max_smoothed_types: shape mismatch");
  return d_max_smoothed_classical(p.weights, q.weights, eps);
}

CheckRecord check_blurring_lemma(const SymmetricDistribution& p, const SymmetricDistribution& q,
                                 const Distribution& s, double delta, double eta) {
  if (p.index != q.index) throw ValidationError("check_blurring_lemma: shape mismatch");
  require_distribution(s, "check_blurring_lemma(s)");
  if (!(delta > 0.0)) throw ValidationError("check_blurring_lemma: delta must be positive");
  if (!(eta >= 0.0 && eta < 1.0)) throw ValidationError("check_blurring_lemma: eta must be in [0, 1)");
  const int n = p.n(), k = p.alphabet_size();
  const int m = blur_m(n, delta);
  const double p_ball = ball_mass(p, s, delta);
  const double q_ball = ball_mass(q, s, delta);
  const double g_term = n * bosonic_g((2.0 * delta + 1.0 / n) * k);
  const double rhs = q_ball > 0.0 ? -std::log2(q_ball) + g_term : kInf;
  double lhs = kInf;
  if (q_ball > 0.0) {
    const auto bq = apply_blur(blur_kernel(n, m, k), q);
    const auto d = d_max_smoothed_types(p, bq, eta);
    lhs = d.infinite ? kInf : d.value;
  }
  CheckRecord r = make_leq("blurring-lemma", lhs, rhs, 1e-8);
  if (p_ball < 1.0 - eta - 1e-12) {
    r.status = Status::Inapplicable;
    r.notes["reason"] = "p is not (1-eta)-concentrated on the delta-ball";
  }
  if (q_ball == 0.0) r.notes["trivial"] = "q has no mass on the ball; right-hand side is infinite";
  r.certificates["p_ball"] = p_ball;
  r.certificates["q_ball"] = q_ball;
  r.certificates["m"] = m;
  r.certificates["g_term"] = g_term;
  return r;
}

BlurringInstance random_blurring_instance(Rng& rng, int n, int alphabet_size, double delta, double eta) {
  check_alphabet(n, alphabet_size, "random_blurring_instance");
  auto idx = type_index(n, alphabet_size);
  BlurringInstance inst{{idx, {}}, {idx, {}}, random_distribution(alphabet_size, rng), delta, eta};
  std::vector<double> in, out;
  double in_sum = 0.0, out_sum = 0.0;
  for (int attempt = 0; in_sum == 0.0; ++attempt) {
    // no type close enough to s: recentre on a type
    if (attempt > 0) inst.s = (*idx)[uniform_int(rng, 0, idx->size() - 1)].distribution();
    in.assign(idx->size(), 0.0);
    out.assign(idx->size(), 0.0);
    in_sum = out_sum = 0.0;
    for (int i = 0; i < idx->size(); ++i) {
      const double w = -std::log(1.0 - uniform(rng));
      if (in_ball((*idx)[i], inst.s, delta)) {
        in[i] = w;
        in_sum += w;
      } else {
        out[i] = w;
        out_sum += w;
      }
    }
  }
  const double leak = out_sum > 0.0 ? eta * uniform(rng) : 0.0;
  inst.p.weights.resize(idx->size());
  for (int i = 0; i < idx->size(); ++i)
    inst.p.weights[i] = in[i] / in_sum * (1.0 - leak) + (out_sum > 0.0 ? out[i] / out_sum * leak : 0.0);
  // q: sparse random weights so that q(ball) spans many orders of magnitude
  inst.q.weights.assign(idx->size(), 0.0);
  double qs = 0.0;
  for (int i = 0; i < idx->size(); ++i)
    if (uniform(rng) < 0.5) {
      inst.q.weights[i] = std::exp(-20.0 * uniform(rng));
      qs += inst.q.weights[i];
    }
  if (qs == 0.0) {
    inst.q.weights[uniform_int(rng, 0, idx->size() - 1)] = 1.0;
    qs = 1.0;
  }
  for (double& v : inst.q.weights) v /= qs;
  return inst;
}

TypeSpaceFamily type_space_family(const FreeFamily& family, int n) {
  const auto& l1 = family.level(1);
  if (l1.empty()) throw ValidationError("type_space_family: empty level-1 set");
  std::vector<std::vector<double>> base;
  for (const auto& g : l1) base.push_back(diagonal_of(g, "type_space_family"));
  const int k = static_cast<int>(base[0].size());
  const int count = static_cast<int>(base.size());
  check_alphabet(n, k, "type_space_family");
  if (type_count(n, count) > kKernelGuard) throw SizeError("type_space_family: too many multisets");
  TypeSpaceFamily f;
  f.n = n;
  f.index = type_index(n, k);
  const auto multisets = enumerate_types(n, count);
  std::vector<std::vector<double>> laws(multisets.size());
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < static_cast<int>(multisets.size()); ++j) {
    std::vector<const std::vector<double>*> sites;
    for (int i = 0; i < count; ++i)
      for (int r = 0; r < multisets[j].counts[i]; ++r) sites.push_back(&base[i]);
    laws[j] = product_type_law(sites, k);
  }
  for (auto& law : laws) {
    bool dup = false;
    for (const auto& have : f.generators) {
      double diff = 0.0;
      for (std::size_t t = 0; t < law.size(); ++t) diff = std::max(diff, std::abs(law[t] - have[t]));
      if (diff < 1e-14) {
        dup = true;
        break;
      }
    }
    if (!dup) f.generators.push_back(std::move(law));
  }
  f.c = family.c > 0.0 ? family.c : lambda_min(family.sigma0());
  return f;
}

ClassicalSteinTerms check_classical_gsl(const Distribution& p, const FreeFamily& family, int n, double eps,
                                        double eta) {
  require_distribution(p, "check_classical_gsl(p)");
  if (!(eps > 0.0 && eta > 0.0 && eps + eta < 1.0))
    throw ValidationError("check_classical_gsl: need eps, eta > 0 and eps + eta < 1");
  const auto fam = type_space_family(family, n);
  if (fam.index->alphabet_size() != static_cast<int>(p.size()))
    throw ValidationError("check_classical_gsl: alphabet mismatch");
  const int k = static_cast<int>(p.size());
  const auto pn = iid_types(p, n);
  const auto gens = as_diagonals(fam.generators);
  const Mat rho = diag_matrix(pn.weights);

  ClassicalSteinTerms out;
  out.delta = delta_n(n, k, eta);
  out.m = blur_m(n, out.delta);
  // the chain can hold with equality, so brackets are kept well inside the 1e-8 tolerance
  HullOptions fine;
  fine.lambda_tolerance = 1e-10;
  out.lhs = clamp_at_zero(dtilde_to_hull(rho, gens, eta, fine));
  const auto smooth_raw = dtilde_to_hull(rho, gens, eps);
  out.smoothed = clamp_at_zero(smooth_raw);
  out.log_term = std::log2(1.0 / (1.0 - eps - eta));
  out.g_term = 2.0 * n * bosonic_g((2.0 * out.delta + 1.0 / n) * k);
  out.c_term = (2.0 * n * out.delta + 1.0) * k * std::log2(1.0 / fam.c);

  const double extra = out.log_term + out.g_term + out.c_term;
  const double lhs_lo = out.lhs.infinite ? kInf : out.lhs.lower;
  const double lhs_hi = out.lhs.infinite ? kInf : out.lhs.upper;
  const double rhs_lo = out.smoothed.infinite ? kInf : out.smoothed.lower + extra;
  const double rhs_hi = out.smoothed.infinite ? kInf : out.smoothed.upper + extra;
  auto main = make_bracketed_leq("classical-stein", lhs_lo, lhs_hi, rhs_lo, rhs_hi, 1e-8);
  main.certificates["smoothed_lower"] = out.smoothed.lower;
  main.certificates["smoothed_upper"] = out.smoothed.upper;
  main.certificates["log_term"] = out.log_term;
  main.certificates["g_term"] = out.g_term;
  main.certificates["c_term"] = out.c_term;
  main.certificates["delta_n"] = out.delta;
  main.certificates["m"] = out.m;
  if (out.lhs.approximate || out.smoothed.approximate) main.notes["optimizer"] = "bisection stopped early";
  out.records.push_back(main);
  if (smooth_raw.infinite) return out;

  // Proof chain: smoothing witness p', blurring it, and the triangle inequality.
  const Distribution q_w = [&] {
    Distribution q(fam.index->size(), 0.0);
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t t = 0; t < q.size(); ++t) q[t] += smooth_raw.weights[i] * fam.generators[i][t];
    return q;
  }();
  const auto witness = d_max_smoothed_classical(pn.weights, q_w, eps);
  const SymmetricDistribution p_prime{pn.index, witness.smoothed};
  out.records.push_back(make_leq("smoothing-witness", witness.value, out.smoothed.upper, 1e-9));

  auto lemma = check_blurring_lemma(pn, p_prime, p, out.delta, eta);
  lemma.name = "chain-blurring-lemma";
  out.records.push_back(lemma);

  const auto bp = apply_blur(blur_kernel(n, out.m, k), p_prime);
  const auto to_blur = d_max_smoothed_types(pn, bp, eta);
  const auto blur_to_f = d_max_to_hull(diag_matrix(bp.weights), gens, fine);
  const auto witness_to_f = d_max_to_hull(diag_matrix(p_prime.weights), gens);
  const double tb = to_blur.infinite ? kInf : to_blur.value;
  auto tri = make_bracketed_leq("chain-triangle", lhs_lo, lhs_hi, tb + (blur_to_f.infinite ? kInf : blur_to_f.lower),
                                tb + (blur_to_f.infinite ? kInf : blur_to_f.upper), 1e-8);
  out.records.push_back(tri);
  const double log_c = out.m * k * std::log2(1.0 / fam.c);
  out.records.push_back(make_bracketed_leq(
      "chain-blur-cost", blur_to_f.infinite ? kInf : blur_to_f.lower, blur_to_f.infinite ? kInf : blur_to_f.upper,
      (witness_to_f.infinite ? kInf : witness_to_f.lower) + log_c,
      (witness_to_f.infinite ? kInf : witness_to_f.upper) + log_c, 1e-8));
  return out;
}

}  // namespace steinlab
