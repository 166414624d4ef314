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

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "steinlab/linalg.hpp"

namespace steinlab {

using Rng = std::mt19937_64;

Mat random_ginibre(int rows, int cols, Rng& rng);
Mat random_hermitian(int dim, Rng& rng);
// Ginibre-induced mixed state; rank <= 0 means full rank.
Mat random_state(int dim, Rng& rng, int rank = 0);
Vec random_pure(int dim, Rng& rng);
Mat random_unitary(int dim, Rng& rng);
std::vector<double> random_distribution(int k, Rng& rng);
double uniform(Rng& rng, double lo = 0.0, double hi = 1.0);
int uniform_int(Rng& rng, int lo, int hi);  // inclusive

}  // namespace steinlab
