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

#include "steinlab/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "steinlab/linalg.hpp"

namespace steinlab {

namespace {
constexpr double kTypeGuard = 1e7;
constexpr int kLogFactTable = 1 << 18;
}  // namespace

std::vector<double> TypeVector::distribution() const {
  std::vector<double> p(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / n;
  return p;
}

TypeVector make_type(std::vector<int> counts) {
  TypeVector t;
  t.n = 0;
  for (int c : counts) {
    if (c < 0) throw ValidationError("make_type: negative count");
    t.n += c;
  }
  t.counts = std::move(counts);
  return t;
}

TypeVector e0(int n, int alphabet_size) {
  std::vector<int> c(alphabet_size, 0);
  c[0] = n;
  return make_type(std::move(c));
}

BigCount binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigCount r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= (n - k + i);
    r /= i;
  }
  return r;
}

BigCount type_count(int n, int alphabet_size) { return binomial(n + alphabet_size - 1, alphabet_size - 1); }

std::vector<TypeVector> enumerate_types(int n, int alphabet_size) {
  if (n < 0 || alphabet_size < 1) throw ValidationError("enumerate_types: need n >= 0, alphabet >= 1");
  if (type_count(n, alphabet_size) > BigCount(static_cast<long long>(kTypeGuard)))
    throw SizeError("enumerate_types: number of types exceeds the guard");
  std::vector<TypeVector> out;
  std::vector<int> c(alphabet_size, 0);
  // descending lexicographic: first coordinate runs from n down to 0
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == alphabet_size - 1) {
      c[pos] = left;
      out.push_back(TypeVector{n, c});
      return;
    }
    for (int v = left; v >= 0; --v) {
      c[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, n);
  return out;
}

BigCount multinomial(const TypeVector& t) {
  BigCount num = 1;
  for (int i = 2; i <= t.n; ++i) num *= i;
  BigCount den = 1;
  for (int c : t.counts)
    for (int i = 2; i <= c; ++i) den *= i;
  return num / den;
}

BigCount multinomial_iterative(const TypeVector& t) {
  BigCount r = 1;
  int left = t.n;
  for (int c : t.counts) {
    r *= binomial(left, c);
    left -= c;
  }
  return r;
}

double log_factorial(int k) {
  static std::once_flag once;
  static std::vector<double> table;
  std::call_once(once, [] {
    table.resize(kLogFactTable);
    for (int i = 0; i < kLogFactTable; ++i) table[i] = std::lgamma(static_cast<double>(i) + 1.0);
  });
  if (k < 0) throw ValidationError("log_factorial: negative argument");
  if (k < kLogFactTable) return table[k];
  return std::lgamma(static_cast<double>(k) + 1.0);
}

double log_binomial(int n, int k) {
  if (k < 0 || k > n || n < 0) return -std::numeric_limits<double>::infinity();
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

double log_multinomial(const TypeVector& t) {
  double r = log_factorial(t.n);
  for (int c : t.counts) r -= log_factorial(c);
  return r;
}

TypeVector type_of_sequence(const std::vector<int>& x, int alphabet_size) {
  std::vector<int> c(alphabet_size, 0);
  for (int s : x) {
    if (s < 0 || s >= alphabet_size) throw ValidationError("type_of_sequence: symbol out of range");
    ++c[s];
  }
  return TypeVector{static_cast<int>(x.size()), c};
}

double infinity_distance(const std::vector<double>& s, const TypeVector& t) {
  if (static_cast<int>(s.size()) != t.size()) throw ValidationError("infinity_distance: alphabet mismatch");
  double d = 0.0;
  for (int x = 0; x < t.size(); ++x) d = std::max(d, std::abs(s[x] - t.freq(x)));
  return d;
}

double infinity_distance(const TypeVector& s, const TypeVector& t) {
  return infinity_distance(s.distribution(), t);
}

bool leq_elementwise(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw ValidationError("leq_elementwise: size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

bool in_ball(const TypeVector& t, const std::vector<double>& s, double delta) {
  if (static_cast<int>(s.size()) != t.size()) throw ValidationError("in_ball: alphabet mismatch");
  for (int x = 0; x < t.size(); ++x)
    if (std::abs(t.counts[x] - t.n * s[x]) > t.n * delta + 1e-12 * t.n) return false;
  return true;
}

bool in_ball(const TypeVector& t, const TypeVector& s, double delta) {
  if (s.size() != t.size()) throw ValidationError("in_ball: alphabet mismatch");
  // |c_t/n - c_s/m| <= delta  <=>  |c_t m - c_s n| <= delta n m, integer left side
  const long long nm = static_cast<long long>(t.n) * s.n;
  for (int x = 0; x < t.size(); ++x) {
    const long long lhs = std::llabs(static_cast<long long>(t.counts[x]) * s.n -
                                     static_cast<long long>(s.counts[x]) * t.n);
    if (static_cast<double>(lhs) > delta * static_cast<double>(nm) * (1.0 + 1e-14)) return false;
  }
  return true;
}

std::vector<TypeVector> type_ball(int n, const std::vector<double>& s, double delta) {
  std::vector<TypeVector> out;
  for (auto& t : enumerate_types(n, static_cast<int>(s.size())))
    if (in_ball(t, s, delta)) out.push_back(t);
  return out;
}

std::vector<TypeVector> type_ball(int n, const TypeVector& s, double delta) {
  std::vector<TypeVector> out;
  for (auto& t : enumerate_types(n, s.size()))
    if (in_ball(t, s, delta)) out.push_back(t);
  return out;
}

TypeIndex::TypeIndex(int n, int alphabet_size)
    : n_(n), k_(alphabet_size), types_(enumerate_types(n, alphabet_size)) {
  for (int i = 0; i < static_cast<int>(types_.size()); ++i) lookup_.emplace(types_[i].counts, i);
}

int TypeIndex::find(const std::vector<int>& counts) const {
  auto it = lookup_.find(counts);
  return it == lookup_.end() ? -1 : it->second;
}

std::shared_ptr<const TypeIndex> type_index(int n, int alphabet_size) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const TypeIndex>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, alphabet_size}];
  if (!slot) slot = std::make_shared<const TypeIndex>(n, alphabet_size);
  return slot;
}

}  // namespace steinlab
