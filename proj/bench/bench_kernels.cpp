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

// Parallel kernels against their serial references. Set OMP_NUM_THREADS to vary the thread count.

#include <benchmark/benchmark.h>

#include "steinlab/classical_blurring.hpp"
#include "steinlab/fock.hpp"
#include "steinlab/linalg.hpp"
#include "steinlab/quantum_blurring.hpp"
#include "steinlab/random.hpp"

using namespace steinlab;

namespace {

void BM_BlurKernel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(blur_kernel(n, n / 2, 3));
}

void BM_BlurKernelSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(blur_kernel_serial(n, n / 2, 3));
}

Mat random_operator(int n, int d) {
  Rng rng(7);
  const int dim = ipow(d, n);
  return random_ginibre(dim, dim, rng);
}

void BM_Symmetrize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mat x = random_operator(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(symmetrize(x, 2, n));
}

void BM_SymmetrizeSerial(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mat x = random_operator(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(symmetrize_serial(x, 2, n));
}

SymTypeOperator random_sym(int n, int d) {
  Rng rng(11);
  const int s = type_index(n, d)->size();
  return sym_from_matrix(n, d, random_state(s, rng));
}

void BM_BlurQ(benchmark::State& state) {
  const auto x = random_sym(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(blur_q(x, 0.5));
}

void BM_BlurQSerial(benchmark::State& state) {
  const auto x = random_sym(static_cast<int>(state.range(0)), 3);
  for (auto _ : state) benchmark::DoNotOptimize(blur_q_serial(x, 0.5));
}

FockOperator random_fock(int cutoff) {
  Rng rng(13);
  return fock_from_matrix(1, cutoff, random_state(cutoff + 1, rng));
}

void BM_LambdaMap(benchmark::State& state) {
  const auto x = random_fock(12);
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lambda_map_fixed(0.5, x, nodes));
}

void BM_LambdaMapSerial(benchmark::State& state) {
  const auto x = random_fock(12);
  const int nodes = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(lambda_map_fixed_serial(0.5, x, nodes));
}

}  // namespace

BENCHMARK(BM_BlurKernel)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlurKernelSerial)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Symmetrize)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SymmetrizeSerial)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlurQ)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BlurQSerial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LambdaMap)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LambdaMapSerial)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
