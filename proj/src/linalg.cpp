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

#include "steinlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace steinlab {

Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

double max_abs(const Mat& x) {
  double m = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) m = std::max(m, std::abs(x(i, j)));
  return m;
}

bool is_hermitian(const Mat& x) {
  if (x.rows() != x.cols()) return false;
  const double scale = std::max(1.0, max_abs(x));
  return max_abs(x - x.adjoint()) <= tolerances().hermitian * scale;
}

void require_square(const Mat& x, const char* what) {
  if (x.rows() != x.cols() || x.rows() == 0)
    throw ValidationError(std::string(what) + ": matrix must be square and non-empty");
}

void require_hermitian(const Mat& x, const char* what) {
  require_square(x, what);
  if (!is_hermitian(x)) throw ValidationError(std::string(what) + ": not Hermitian");
}

void require_psd(const Mat& x, const char* what) {
  require_hermitian(x, what);
  if (lambda_min(x) < -tolerances().spectrum)
    throw ValidationError(std::string(what) + ": negative eigenvalue");
}

void require_state(const Mat& x, const char* what) {
  require_psd(x, what);
  if (std::abs(x.trace().real() - 1.0) > tolerances().normalization)
    throw ValidationError(std::string(what) + ": trace is not 1");
}

Mat hermitian_part(const Mat& x) { return 0.5 * (x + x.adjoint()); }

HermitianSpectrum hermitian_spectrum(const Mat& x) {
  require_square(x, "hermitian_spectrum");
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(x));
  const Eigen::Index n = x.rows();
  HermitianSpectrum s;
  s.values.resize(n);
  s.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s.values(i) = es.eigenvalues()(n - 1 - i);
    s.vectors.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  return s;
}

Mat reconstruct(const HermitianSpectrum& s) {
  return s.vectors * s.values.cast<cplx>().asDiagonal() * s.vectors.adjoint();
}

double lambda_min(const Mat& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double lambda_max(const Mat& x) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(x), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(x.rows() - 1);
}

double trace_positive_part(const Mat& x) {
  require_hermitian(x, "trace_positive_part");
  Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(x), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) s += std::max(0.0, es.eigenvalues()(i));
  return s;
}

Mat positive_part(const Mat& x) {
  require_hermitian(x, "positive_part");
  return spectral_apply(hermitian_spectrum(x), [](double v) { return std::max(v, 0.0); });
}

Mat positive_projector(const Mat& x, double threshold) {
  return spectral_apply(hermitian_spectrum(x),
                        [threshold](double v) { return v > threshold ? 1.0 : 0.0; });
}

Mat psd_sqrt(const Mat& x) {
  return spectral_apply(hermitian_spectrum(x),
                        [](double v) { return std::sqrt(std::max(v, 0.0)); });
}

double trace_norm(const Mat& x) {
  if (x.rows() == 0) return 0.0;
  if (is_hermitian(x)) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(x), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Mat> svd(x);
  return svd.singularValues().sum();
}

double operator_norm(const Mat& x) {
  if (x.rows() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(x);
  return svd.singularValues()(0);
}

double fidelity(const Mat& rho, const Mat& sigma) {
  require_psd(rho, "fidelity(rho)");
  require_psd(sigma, "fidelity(sigma)");
  if (rho.rows() != sigma.rows()) throw ValidationError("fidelity: dimension mismatch");
  Eigen::JacobiSVD<Mat> svd(psd_sqrt(rho) * psd_sqrt(sigma));
  return std::min(1.0, svd.singularValues().sum());
}

double trace_distance(const Mat& rho, const Mat& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw ValidationError("trace_distance: dimension mismatch");
  return 0.5 * trace_norm(rho - sigma);
}

Mat tensor(const Mat& x, const Mat& y) {
  Mat r(x.rows() * y.rows(), x.cols() * y.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      r.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
  return r;
}

Vec tensor(const Vec& x, const Vec& y) {
  Vec r(x.size() * y.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) r.segment(i * y.size(), y.size()) = x(i) * y;
  return r;
}

Mat tensor_power(const Mat& x, int k) {
  Mat r = Mat::Identity(1, 1);
  for (int i = 0; i < k; ++i) r = tensor(r, x);
  return r;
}

Mat projector(const Vec& v) { return v * v.adjoint(); }

Mat partial_trace(const Mat& x, const std::vector<int>& dims, const std::vector<int>& keep) {
  require_square(x, "partial_trace");
  long long total = 1;
  for (int d : dims) {
    if (d < 1) throw ValidationError("partial_trace: bad subsystem dimension");
    total *= d;
  }
  if (total != x.rows()) throw ValidationError("partial_trace: dims product != matrix dimension");
  const int k = static_cast<int>(dims.size());
  std::vector<bool> kept(k, false);
  for (int i : keep) {
    if (i < 0 || i >= k) throw ValidationError("partial_trace: keep index out of range");
    kept[i] = true;
  }
  // stride of each subsystem in the full index
  std::vector<long long> stride(k, 1);
  for (int i = k - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];
  auto offsets = [&](bool want_kept) {
    std::vector<long long> off{0};
    for (int i = 0; i < k; ++i) {
      if (kept[i] != want_kept) continue;
      std::vector<long long> next;
      next.reserve(off.size() * dims[i]);
      for (long long o : off)
        for (int v = 0; v < dims[i]; ++v) next.push_back(o + v * stride[i]);
      off.swap(next);
    }
    return off;
  };
  const auto ka = offsets(true);
  const auto tc = offsets(false);
  const auto m = static_cast<Eigen::Index>(ka.size());
  Mat r = Mat::Zero(m, m);
  for (Eigen::Index b = 0; b < m; ++b)
    for (Eigen::Index a = 0; a < m; ++a) {
      cplx s = 0.0;
      for (long long c : tc) s += x(ka[a] + c, ka[b] + c);
      r(a, b) = s;
    }
  return r;
}

std::vector<std::uint32_t> permutation_index_map(int d, int n, const std::vector<int>& perm) {
  const long long dim = ipow(d, n);
  std::vector<std::uint32_t> map(dim);
  std::vector<int> digits(n), out(n);
  for (long long idx = 0; idx < dim; ++idx) {
    long long r = idx;
    for (int i = n - 1; i >= 0; --i) {
      digits[i] = static_cast<int>(r % d);
      r /= d;
    }
    long long j = 0;
    for (int i = 0; i < n; ++i) j = j * d + digits[perm[i]];
    map[idx] = static_cast<std::uint32_t>(j);
  }
  return map;
}

Mat permute_subsystems(const Mat& x, int d, int n, const std::vector<int>& perm) {
  if (x.rows() != ipow(d, n)) throw ValidationError("permute_subsystems: dimension mismatch");
  const auto map = permutation_index_map(d, n, perm);
  Mat r(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) r(map[i], map[j]) = x(i, j);
  return r;
}

namespace {

constexpr double kSymmetrizeGuard = 1.1e7;

const std::vector<std::vector<std::uint32_t>>& permutation_cache(int d, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<std::vector<std::uint32_t>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find({d, n});
  if (it != cache.end()) return it->second;
  std::vector<std::vector<std::uint32_t>> maps;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    maps.push_back(permutation_index_map(d, n, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return cache.emplace(std::make_pair(d, n), std::move(maps)).first->second;
}

void check_symmetrize_size(const Mat& x, int d, int n) {
  if (d < 1 || n < 1) throw ValidationError("symmetrize: bad d or N");
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  if (fact * std::pow(static_cast<double>(d), n) > kSymmetrizeGuard)
    throw SizeError("symmetrize: N! * d^N exceeds the size guard");
  if (x.rows() != ipow(d, n) || x.cols() != x.rows())
    throw ValidationError("symmetrize: dimension is not d^N");
}

}  // namespace

Mat symmetrize_serial(const Mat& x, int d, int n) {
  check_symmetrize_size(x, d, n);
  const auto& maps = permutation_cache(d, n);
  Mat r = Mat::Zero(x.rows(), x.cols());
  for (const auto& map : maps)
    for (Eigen::Index j = 0; j < x.cols(); ++j)
      for (Eigen::Index i = 0; i < x.rows(); ++i) r(map[i], map[j]) += x(i, j);
  return r / static_cast<double>(maps.size());
}

Mat symmetrize(const Mat& x, int d, int n) {
  check_symmetrize_size(x, d, n);
  const auto& maps = permutation_cache(d, n);
  const Eigen::Index dim = x.rows();
  // Gather form: r(i,j) = avg_pi x(pi^{-1} i, pi^{-1} j); columns are independent.
  std::vector<std::vector<std::uint32_t>> inv(maps.size(), std::vector<std::uint32_t>(dim));
  for (std::size_t p = 0; p < maps.size(); ++p)
    for (Eigen::Index i = 0; i < dim; ++i) inv[p][maps[p][i]] = static_cast<std::uint32_t>(i);
  Mat r(dim, dim);
#pragma omp parallel for schedule(static)
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      cplx s = 0.0;
      for (std::size_t p = 0; p < inv.size(); ++p) s += x(inv[p][i], inv[p][j]);
      r(i, j) = s / static_cast<double>(maps.size());
    }
  }
  return r;
}

double permutation_residual(const Mat& x, int d, int n) {
  double res = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::swap(perm[i], perm[i + 1]);
    res = std::max(res, max_abs(permute_subsystems(x, d, n, perm) - x));
  }
  return res;
}

Vec purify_symmetric(const Mat& omega, int d, int n) {
  require_psd(omega, "purify_symmetric");
  if (omega.rows() != ipow(d, n)) throw ValidationError("purify_symmetric: dimension is not d^n");
  if (permutation_residual(omega, d, n) > 1e-9)
    throw ValidationError("purify_symmetric: input is not permutation-invariant");
  const Mat root = psd_sqrt(omega);
  const long long dn = ipow(d, n);
  Vec psi = Vec::Zero(dn * dn);
  std::vector<int> a(n), e(n);
  for (long long ia = 0; ia < dn; ++ia) {
    long long r = ia;
    for (int i = n - 1; i >= 0; --i) { a[i] = static_cast<int>(r % d); r /= d; }
    for (long long ie = 0; ie < dn; ++ie) {
      long long s = ie;
      for (int i = n - 1; i >= 0; --i) { e[i] = static_cast<int>(s % d); s /= d; }
      long long out = 0;
      for (int i = 0; i < n; ++i) out = out * d * d + a[i] * d + e[i];
      psi(out) = root(ia, ie);
    }
  }
  return psi;
}

}  // namespace steinlab
