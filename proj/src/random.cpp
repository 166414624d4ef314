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

#include "steinlab/random.hpp"

#include <cmath>

#include <Eigen/QR>

namespace steinlab {

double uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  return u(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> u(lo, hi);
  return u(rng);
}

Mat random_ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

Mat random_hermitian(int dim, Rng& rng) {
  const Mat g = random_ginibre(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

Mat random_state(int dim, Rng& rng, int rank) {
  if (rank <= 0 || rank > dim) rank = dim;
  const Mat g = random_ginibre(dim, rank, rng);
  Mat r = g * g.adjoint();
  r /= r.trace().real();
  return hermitian_part(r);
}

Vec random_pure(int dim, Rng& rng) {
  Vec v = random_ginibre(dim, 1, rng).col(0);
  return v / v.norm();
}

Mat random_unitary(int dim, Rng& rng) {
  Eigen::HouseholderQR<Mat> qr(random_ginibre(dim, dim, rng));
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  for (int i = 0; i < dim; ++i) {
    const cplx d = r(i, i);
    if (std::abs(d) > 0) q.col(i) *= d / std::abs(d);
  }
  return q;
}

std::vector<double> random_distribution(int k, Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(k);
  double s = 0.0;
  for (auto& v : p) {
    v = e(rng);
    s += v;
  }
  for (auto& v : p) v /= s;
  return p;
}

}  // namespace steinlab
