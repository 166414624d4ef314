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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "steinlab/divergences.hpp"

namespace steinlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDecideSlack = 1e-13;

bool all_diagonal(const Mat& a0, const std::vector<Mat>& b) {
  auto diag = [](const Mat& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      for (Eigen::Index i = 0; i < m.rows(); ++i)
        if (i != j && m(i, j) != cplx(0.0)) return false;
    return true;
  };
  if (!diag(a0)) return false;
  for (const auto& m : b)
    if (!diag(m)) return false;
  return true;
}

// Spectral data of A with smoothing parameter beta.
struct SpectralEval {
  double exact = 0.0;
  double smooth = 0.0;
  RVec z;      // dual weights on the eigenbasis
  Mat basis;   // empty for diagonal problems
};

class SpectralProblem {
 public:
  SpectralProblem(SpectralKind kind, const Mat& a0, const std::vector<Mat>& b)
      : kind_(kind), diag_(all_diagonal(a0, b)), dim_(a0.rows()) {
    if (diag_) {
      a0d_ = a0.diagonal().real();
      for (const auto& m : b) bd_.push_back(m.diagonal().real());
    } else {
      a0m_ = hermitian_part(a0);
      for (const auto& m : b) bm_.push_back(hermitian_part(m));
    }
  }

  int size() const { return diag_ ? static_cast<int>(bd_.size()) : static_cast<int>(bm_.size()); }

  // A(w) in the problem representation.
  struct Point {
    RVec d;
    Mat m;
  };

  Point point(const std::vector<double>& w) const {
    Point p;
    if (diag_) {
      p.d = a0d_;
      for (int i = 0; i < size(); ++i)
        if (w[i] != 0.0) p.d -= w[i] * bd_[i];
    } else {
      p.m = a0m_;
      for (int i = 0; i < size(); ++i)
        if (w[i] != 0.0) p.m -= w[i] * bm_[i];
    }
    return p;
  }

  // p - gamma (b_i - b_j)
  Point shifted(const Point& p, int i, int j, double gamma) const {
    Point q;
    if (diag_) q.d = p.d - gamma * (bd_[i] - bd_[j]);
    else q.m = p.m - gamma * (bm_[i] - bm_[j]);
    return q;
  }

  SpectralEval eval(const Point& p, double beta) const {
    SpectralEval e;
    RVec vals;
    if (diag_) {
      vals = p.d;
    } else {
      Eigen::SelfAdjointEigenSolver<Mat> es(p.m);
      vals = es.eigenvalues();
      e.basis = es.eigenvectors();
    }
    const Eigen::Index n = vals.size();
    e.z.resize(n);
    if (kind_ == SpectralKind::MaxEigen) {
      const double mx = vals.maxCoeff();
      double s = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        e.z(j) = std::exp(beta * (vals(j) - mx));
        s += e.z(j);
      }
      e.z /= s;
      e.exact = mx;
      e.smooth = mx + std::log(s) / beta;
    } else {
      e.exact = 0.0;
      e.smooth = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double x = beta * vals(j);
        e.exact += std::max(vals(j), 0.0);
        // softplus and sigmoid, overflow safe
        const double sp = x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
        e.smooth += sp / beta;
        e.z(j) = x > 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
      }
    }
    return e;
  }

  double score(const SpectralEval& e, int i) const {
    if (diag_) return e.z.dot(bd_[i]);
    // Tr(Z b) with Z = V diag(z) V^dag
    const Mat t = e.basis.adjoint() * bm_[i] * e.basis;
    double s = 0.0;
    for (Eigen::Index j = 0; j < e.z.size(); ++j) s += e.z(j) * t(j, j).real();
    return s;
  }

  std::vector<double> scores(const SpectralEval& e) const {
    std::vector<double> s(size());
    if (diag_) {
      for (int i = 0; i < size(); ++i) s[i] = e.z.dot(bd_[i]);
      return s;
    }
    const Mat z = e.basis * e.z.cast<cplx>().asDiagonal() * e.basis.adjoint();
    for (int i = 0; i < size(); ++i) s[i] = z.cwiseProduct(bm_[i].conjugate()).sum().real();
    return s;
  }

  double score_a0(const SpectralEval& e) const {
    if (diag_) return e.z.dot(a0d_);
    const Mat t = e.basis.adjoint() * a0m_ * e.basis;
    double s = 0.0;
    for (Eigen::Index j = 0; j < e.z.size(); ++j) s += e.z(j) * t(j, j).real();
    return s;
  }

  Mat dual_operator(const SpectralEval& e) const {
    if (diag_) return e.z.cast<cplx>().asDiagonal();
    return e.basis * e.z.cast<cplx>().asDiagonal() * e.basis.adjoint();
  }

  double smoothing_error(double beta) const {
    if (kind_ == SpectralKind::MaxEigen) return std::log(static_cast<double>(dim_)) / beta;
    return static_cast<double>(dim_) * std::log(2.0) / beta;
  }

  double scale() const {
    double s = 0.0;
    if (diag_) {
      s = a0d_.cwiseAbs().maxCoeff();
      for (const auto& v : bd_) s = std::max(s, v.cwiseAbs().maxCoeff());
    } else {
      s = max_abs(a0m_);
      for (const auto& m : bm_) s = std::max(s, max_abs(m));
    }
    return std::max(s, 1e-300);
  }

 private:
  SpectralKind kind_;
  bool diag_;
  Eigen::Index dim_;
  RVec a0d_;
  std::vector<RVec> bd_;
  Mat a0m_;
  std::vector<Mat> bm_;
};

// Relative entropy D(rho || sigma) for a fixed rho, in bits.
class RelEntObjective {
 public:
  explicit RelEntObjective(const Mat& rho) : rho_(rho) {
    const auto s = hermitian_spectrum(rho);
    neg_entropy_ = 0.0;
    for (Eigen::Index i = 0; i < s.values.size(); ++i)
      if (s.values(i) > 0.0) neg_entropy_ += s.values(i) * std::log2(s.values(i));
  }

  double value(const Mat& sigma) const {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(sigma));
    const Mat r = es.eigenvectors().adjoint() * rho_ * es.eigenvectors();
    double d = neg_entropy_;
    for (Eigen::Index j = 0; j < r.rows(); ++j) {
      const double m = r(j, j).real();
      const double s = es.eigenvalues()(j);
      if (s <= 1e-300) {
        if (m > 1e-14) return kInf;
        continue;
      }
      d -= m * std::log2(s);
    }
    return d;
  }

  // Y with d/dw_i D(rho || sum w sigma) = -Re Tr(Y sigma_i).
  Mat gradient_operator(const Mat& sigma) const {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitian_part(sigma));
    const auto& v = es.eigenvectors();
    const auto& s = es.eigenvalues();
    const Mat r = v.adjoint() * rho_ * v;
    const Eigen::Index n = r.rows();
    Mat w(n, n);
    // rho has no weight on (numerical) kernel directions of sigma, so those terms vanish
    const double floor = 1e-13 * std::max(s.maxCoeff(), 1e-300);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index k = 0; k < n; ++k) {
        const double sj = s(j), sk = s(k);
        if (sj <= floor || sk <= floor) {
          w(j, k) = 0.0;
          continue;
        }
        double gam;
        if (std::abs(sj - sk) <= 1e-12 * std::max(sj, sk)) gam = 1.0 / sj;
        else gam = (std::log(sj) - std::log(sk)) / (sj - sk);
        w(j, k) = gam * r(k, j);
      }
    return v * w.transpose() * v.adjoint() / std::log(2.0);
  }

 private:
  Mat rho_;
  double neg_entropy_;
};

template <class F>
double golden_min(F f, double a, double b, int iters, double* fbest) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc <= fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  double x = fc <= fd ? c : d;
  double fx = std::min(fc, fd);
  // endpoints matter for convex functions minimized at the boundary
  const double fa = f(a), fb = f(b);
  if (fa < fx) { x = a; fx = fa; }
  if (fb < fx) { x = b; fx = fb; }
  *fbest = fx;
  return x;
}

void check_generators(const Mat& rho, const std::vector<Mat>& gens, const char* what) {
  require_state(rho, what);
  if (gens.empty()) throw ValidationError(std::string(what) + ": no generators");
  for (const auto& g : gens) {
    if (g.rows() != rho.rows()) throw ValidationError(std::string(what) + ": dimension mismatch");
    require_state(g, what);
  }
}

}  // namespace

Mat mixture(const std::vector<Mat>& generators, const std::vector<double>& w) {
  Mat m = Mat::Zero(generators.at(0).rows(), generators.at(0).cols());
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (w[i] != 0.0) m += w[i] * generators[i];
  return m;
}

SpectralBounds minimize_spectral(SpectralKind kind, const Mat& a0, const std::vector<Mat>& b,
                                 double decide_below, double gap, int max_iterations,
                                 std::vector<double> start) {
  SpectralProblem prob(kind, a0, b);
  const int g = prob.size();
  std::vector<double> w = start;
  if (static_cast<int>(w.size()) != g) w.assign(g, 1.0 / g);
  auto pt = prob.point(w);

  SpectralBounds out;
  out.upper = kInf;
  out.lower = -kInf;
  double beta = 1.0 / (1e-2 * prob.scale());
  auto e = prob.eval(pt, beta);
  auto record = [&](const SpectralEval& ev, const std::vector<double>& sc) {
    if (ev.exact < out.upper) {
      out.upper = ev.exact;
      out.weights = w;
    }
    const double low = prob.score_a0(ev) - *std::max_element(sc.begin(), sc.end());
    if (low > out.lower) {
      out.lower = low;
      out.dual = prob.dual_operator(ev);
    }
  };
  auto sc = prob.scores(e);
  record(e, sc);
  int it = 0;
  for (; it < max_iterations; ++it) {
    if (out.upper <= decide_below || out.lower > decide_below || out.upper - out.lower <= gap) break;
    const int s = static_cast<int>(std::max_element(sc.begin(), sc.end()) - sc.begin());
    int a = -1;
    double fw_gap = sc[s];
    for (int i = 0; i < g; ++i) {
      fw_gap -= w[i] * sc[i];
      if (w[i] > 0.0 && (a < 0 || sc[i] < sc[a])) a = i;
    }
    if (fw_gap <= 0.5 * prob.smoothing_error(beta) || a == s) {
      beta *= 4.0;
      if (beta > 1e16 / prob.scale()) break;
      e = prob.eval(pt, beta);
      sc = prob.scores(e);
      record(e, sc);
      continue;
    }
    // pairwise step: move mass from a to s; derivative is -(score_s - score_a)
    const double gmax = w[a];
    auto deriv = [&](double gamma) {
      const auto ev = prob.eval(prob.shifted(pt, s, a, gamma), beta);
      return -(prob.score(ev, s) - prob.score(ev, a));
    };
    double gamma;
    if (deriv(gmax) <= 0.0) {
      gamma = gmax;
    } else {
      double lo = 0.0, hi = gmax;
      for (int k = 0; k < 50; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (deriv(mid) <= 0.0) lo = mid;
        else hi = mid;
      }
      gamma = lo;
    }
    if (gamma <= 0.0) {
      beta *= 4.0;
      if (beta > 1e16 / prob.scale()) break;
    } else {
      w[s] += gamma;
      w[a] -= gamma;
      if (a != s && w[a] < 1e-15) w[a] = 0.0;
      pt = prob.shifted(pt, s, a, gamma);
    }
    e = prob.eval(pt, beta);
    sc = prob.scores(e);
    record(e, sc);
  }
  out.iterations = it;
  return out;
}

DivergenceResult rel_ent_to_hull(const Mat& rho, const std::vector<Mat>& gens, const HullOptions& opt) {
  check_generators(rho, gens, "rel_ent_to_hull");
  const int g = static_cast<int>(gens.size());
  if (g == 1) {
    auto r = umegaki(rho, gens[0]);
    r.weights = {1.0};
    return r;
  }
  std::vector<double> w(g, 1.0 / g);
  Mat sigma = mixture(gens, w);
  RelEntObjective obj(rho);
  double f = obj.value(sigma);
  if (std::isinf(f)) return DivergenceResult::infinity();
  DivergenceResult r;
  if (lambda_min(sigma) <= 1e-12) r.notes.push_back("no full-rank mixture in the hull; +inf risk");
  double gap = kInf;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    const Mat y = obj.gradient_operator(sigma);
    std::vector<double> grad(g);
    for (int i = 0; i < g; ++i) grad[i] = -y.cwiseProduct(gens[i].conjugate()).sum().real();
    const int s = static_cast<int>(std::min_element(grad.begin(), grad.end()) - grad.begin());
    double wg = 0.0;
    for (int i = 0; i < g; ++i) wg += w[i] * grad[i];
    gap = wg - grad[s];
    if (gap <= opt.gap_tolerance) break;
    // direction: towards vertex s, or away from the worst active vertex
    std::vector<double> dir(g);
    double gmax = 1.0;
    int away = -1;
    if (opt.away_steps) {
      for (int i = 0; i < g; ++i)
        if (w[i] > 0.0 && (away < 0 || grad[i] > grad[away])) away = i;
      if (away >= 0 && grad[away] - wg > gap && w[away] < 1.0) {
        for (int i = 0; i < g; ++i) dir[i] = w[i];
        dir[away] -= 1.0;
        gmax = w[away] / (1.0 - w[away]);
      } else {
        away = -1;
      }
    }
    if (away < 0) {
      for (int i = 0; i < g; ++i) dir[i] = -w[i];
      dir[s] += 1.0;
    }
    Mat sdir = mixture(gens, dir);
    double fbest;
    const double gamma = golden_min([&](double t) { return obj.value(sigma + t * sdir); }, 0.0, gmax, 80, &fbest);
    if (!(fbest < f)) {
      // a vanishing away weight is a drop step; anything else has stalled
      if (away >= 0 && w[away] < 1e-12) {
        w[away] = 0.0;
        continue;
      }
      break;
    }
    for (int i = 0; i < g; ++i) {
      w[i] = std::max(0.0, w[i] + gamma * dir[i]);
      if (w[i] < 1e-15) w[i] = 0.0;
    }
    if (away >= 0 && gamma >= gmax * (1 - 1e-12)) w[away] = 0.0;
    const double tot = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= tot;
    sigma = mixture(gens, w);
    f = obj.value(sigma);
  }
  r.value = r.upper = f;
  r.lower = f - std::max(gap, 0.0);
  r.certificate = std::max(gap, 0.0);
  r.approximate = gap > opt.gap_tolerance;
  r.weights = w;
  r.iterations = it;
  return r;
}

DivergenceResult d_max_to_hull(const Mat& rho, const std::vector<Mat>& gens, const HullOptions& opt) {
  check_generators(rho, gens, "d_max_to_hull");
  const int g = static_cast<int>(gens.size());
  std::vector<double> w(g, 1.0 / g);
  auto start = d_max(rho, mixture(gens, w));
  if (start.infinite) return DivergenceResult::infinity();
  double hi = start.value;
  for (int i = 0; i < g; ++i) {
    const auto di = d_max(rho, gens[i]);
    if (!di.infinite && di.value < hi) {
      hi = di.value;
      w.assign(g, 0.0);
      w[i] = 1.0;
    }
  }
  // Diagonal inputs: dividing row t by p_t makes the decision slack relative, which matters on
  // type spaces whose weights span many orders of magnitude.
  bool diagonal = is_diagonal(rho);
  for (const auto& gm : gens) diagonal = diagonal && is_diagonal(gm);
  std::vector<Eigen::Index> support;
  if (diagonal)
    for (Eigen::Index t = 0; t < rho.rows(); ++t)
      if (rho(t, t).real() > 0.0) support.push_back(t);
  auto rescaled = [&](double mid) {
    std::vector<Mat> b(gens.size());
    const auto k = static_cast<Eigen::Index>(support.size());
    for (std::size_t i = 0; i < gens.size(); ++i) {
      b[i] = Mat::Zero(k, k);
      for (Eigen::Index j = 0; j < k; ++j) {
        const Eigen::Index t = support[j];
        b[i](j, j) = std::min(std::exp2(mid) * gens[i](t, t).real() / rho(t, t).real(), 1e300);
      }
    }
    return b;
  };
  double lo = 0.0;
  // The bisection bracket moves on slack-level decisions; the reported upper bound is always
  // the exact D_max of a mixture that was actually found.
  double best = hi;
  std::vector<double> best_w = w;
  DivergenceResult r;
  while (hi - lo > opt.lambda_tolerance && hi > 0.0) {
    const double mid = 0.5 * (lo + hi);
    const auto sb = diagonal ? minimize_spectral(SpectralKind::MaxEigen, Mat::Identity(support.size(), support.size()),
                                                 rescaled(mid), kDecideSlack, 1e-15, opt.max_iterations, w)
                             : minimize_spectral(SpectralKind::MaxEigen, std::exp2(-mid) * rho, gens, kDecideSlack,
                                                 1e-15, opt.max_iterations, w);
    r.iterations += sb.iterations;
    if (sb.upper <= kDecideSlack) {
      w = sb.weights;
      const auto dm = d_max(rho, mixture(gens, w));
      if (!dm.infinite && dm.value < best) {
        best = dm.value;
        best_w = w;
      }
      hi = std::min(mid, best);
    } else if (sb.lower > kDecideSlack) {
      lo = mid;
    } else {
      r.approximate = true;
      break;
    }
  }
  best = std::max(best, 0.0);
  r.value = r.upper = best;
  r.lower = std::min(lo, best);
  r.certificate = best - r.lower;
  r.weights = best_w;
  if (best - r.lower > opt.lambda_tolerance) r.approximate = true;
  return r;
}

DivergenceResult dtilde_to_hull(const Mat& rho, const std::vector<Mat>& gens, double eps,
                                const HullOptions& opt) {
  check_generators(rho, gens, "dtilde_to_hull");
  if (eps < 0.0 || eps >= 1.0) throw ValidationError("dtilde_to_hull: eps out of range");
  if (eps == 0.0) return d_max_to_hull(rho, gens, opt);
  const int g = static_cast<int>(gens.size());
  std::vector<double> w(g, 1.0 / g);
  auto phi_at = [&](const std::vector<double>& ww, double lam) {
    return trace_positive_part(hermitian_part(rho - std::exp2(lam) * mixture(gens, ww)));
  };
  double lo = std::log2(1.0 - eps);
  const auto du = dtilde_max(rho, mixture(gens, w), eps);
  if (du.infinite) return DivergenceResult::infinity();
  double hi = du.upper;
  for (int i = 0; i < g; ++i) {
    const auto di = dtilde_max(rho, gens[i], eps);
    if (!di.infinite && di.upper < hi) {
      hi = di.upper;
      w.assign(g, 0.0);
      w[i] = 1.0;
    }
  }
  DivergenceResult r;
  if (phi_at(w, lo) <= eps) hi = lo;
  while (hi - lo > opt.lambda_tolerance) {
    const double mid = 0.5 * (lo + hi);
    std::vector<Mat> scaled(gens.size());
    for (int i = 0; i < g; ++i) scaled[i] = std::exp2(mid) * gens[i];
    const auto sb = minimize_spectral(SpectralKind::PositivePart, rho, scaled, eps, 1e-15,
                                      opt.max_iterations, w);
    r.iterations += sb.iterations;
    if (sb.upper <= eps) {
      hi = mid;
      w = sb.weights;
    } else if (sb.lower > eps) {
      lo = mid;
    } else {
      r.approximate = true;
      break;
    }
  }
  r.value = r.upper = hi;
  r.lower = lo;
  r.certificate = hi - lo;
  r.weights = w;
  return r;
}

}  // namespace steinlab
