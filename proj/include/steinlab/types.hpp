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
#include <map>
#include <memory>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace steinlab {

using BigCount = boost::multiprecision::cpp_int;

struct TypeVector {
  int n = 0;
  std::vector<int> counts;

  int size() const { return static_cast<int>(counts.size()); }
  double freq(int x) const { return static_cast<double>(counts[x]) / n; }
  std::vector<double> distribution() const;
  bool operator==(const TypeVector& o) const { return n == o.n && counts == o.counts; }
  bool operator<(const TypeVector& o) const { return counts < o.counts; }
};

TypeVector make_type(std::vector<int> counts);
// All mass on symbol 0.
TypeVector e0(int n, int alphabet_size);

std::vector<TypeVector> enumerate_types(int n, int alphabet_size);
BigCount type_count(int n, int alphabet_size);

BigCount binomial(int n, int k);
BigCount multinomial(const TypeVector& t);
// Product of binomials, independent of the factorial-ratio path.
BigCount multinomial_iterative(const TypeVector& t);

// Natural-log factorial from a cached table.
double log_factorial(int k);
double log_binomial(int n, int k);  // -inf outside 0<=k<=n
double log_multinomial(const TypeVector& t);

TypeVector type_of_sequence(const std::vector<int>& x, int alphabet_size);
double infinity_distance(const std::vector<double>& s, const TypeVector& t);
double infinity_distance(const TypeVector& s, const TypeVector& t);
bool leq_elementwise(const std::vector<int>& a, const std::vector<int>& b);
bool in_ball(const TypeVector& t, const std::vector<double>& s, double delta);
bool in_ball(const TypeVector& t, const TypeVector& s, double delta);
std::vector<TypeVector> type_ball(int n, const std::vector<double>& s, double delta);
std::vector<TypeVector> type_ball(int n, const TypeVector& s, double delta);

// Ordered set of types with O(log) lookup. Shared read-only.
class TypeIndex {
 public:
  TypeIndex(int n, int alphabet_size);
  int n() const { return n_; }
  int alphabet_size() const { return k_; }
  int size() const { return static_cast<int>(types_.size()); }
  const TypeVector& operator[](int i) const { return types_[i]; }
  const std::vector<TypeVector>& types() const { return types_; }
  // -1 when the counts are not a type of this index.
  int find(const std::vector<int>& counts) const;

 private:
  int n_, k_;
  std::vector<TypeVector> types_;
  std::map<std::vector<int>, int> lookup_;
};

std::shared_ptr<const TypeIndex> type_index(int n, int alphabet_size);

}  // namespace steinlab
