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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "steinlab/linalg.hpp"
#include "steinlab/types.hpp"

using namespace steinlab;

namespace {

// all sequences of length n over k symbols
std::vector<std::vector<int>> all_sequences(int n, int k) {
  std::vector<std::vector<int>> out;
  const long long total = ipow(k, n);
  for (long long idx = 0; idx < total; ++idx) {
    std::vector<int> x(n);
    long long r = idx;
    for (int i = n - 1; i >= 0; --i) {
      x[i] = static_cast<int>(r % k);
      r /= k;
    }
    out.push_back(x);
  }
  return out;
}

}  // namespace

TEST_CASE("enumerate_types") {
  const auto t22 = enumerate_types(2, 2);
  REQUIRE(t22.size() == 3);
  CHECK(t22[0].counts == std::vector<int>{2, 0});
  CHECK(t22[1].counts == std::vector<int>{1, 1});
  CHECK(t22[2].counts == std::vector<int>{0, 2});
  CHECK(enumerate_types(7, 1).size() == 1);
  CHECK(enumerate_types(5, 3).size() == 21);
  // stars and bars via distinct types of all sequences
  for (int k = 1; k <= 3; ++k)
    for (int n = 1; n <= 6; ++n) {
      std::set<std::vector<int>> seen;
      for (auto& x : all_sequences(n, k)) seen.insert(type_of_sequence(x, k).counts);
      CHECK(seen.size() == enumerate_types(n, k).size());
    }
  for (int k = 1; k <= 4; ++k)
    for (int n = 1; n <= 40; ++n) {
      const auto ts = enumerate_types(n, k);
      CHECK(BigCount(ts.size()) == binomial(n + k - 1, k - 1));
      CHECK(static_cast<double>(ts.size()) <= std::pow(n + 1.0, k - 1) + 0.5);
      for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i - 1].counts > ts[i].counts);
    }
}

TEST_CASE("multinomial") {
  CHECK(multinomial(make_type({2, 0})) == 1);
  CHECK(multinomial(make_type({2, 1})) == 3);
  for (int k = 1; k <= 3; ++k)
    for (int n = 1; n <= 8; ++n) {
      BigCount total = 0;
      for (auto& t : enumerate_types(n, k)) {
        total += multinomial(t);
        CHECK(multinomial(t) == multinomial_iterative(t));
      }
      CHECK(total == BigCount(ipow(k, n)));
    }
  // sequence counting for one class
  int cnt = 0;
  for (auto& x : all_sequences(5, 3))
    if (type_of_sequence(x, 3).counts == std::vector<int>{2, 2, 1}) ++cnt;
  CHECK(multinomial(make_type({2, 2, 1})) == cnt);
  for (auto& t : enumerate_types(30, 3))
    CHECK(std::abs(log_multinomial(t) - std::log(static_cast<double>(multinomial(t)))) < 1e-10);
}

TEST_CASE("sequence types, distances, balls") {
  CHECK(type_of_sequence({0, 1, 0}, 2).counts == std::vector<int>{2, 1});
  CHECK_THROWS_AS(type_of_sequence({0, 2}, 2), ValidationError);
  CHECK(infinity_distance(std::vector<double>{1.0, 0.0}, make_type({0, 1})) == 1.0);
  CHECK(leq_elementwise({1, 2}, {1, 3}));
  CHECK(!leq_elementwise({2, 0}, {1, 3}));
  const auto ball = type_ball(4, std::vector<double>{0.5, 0.5}, 0.25);
  REQUIRE(ball.size() == 3);
  CHECK(ball[0].counts == std::vector<int>{3, 1});
  CHECK(ball[1].counts == std::vector<int>{2, 2});
  CHECK(ball[2].counts == std::vector<int>{1, 3});
  // exact rational center gives the same ball on the boundary case
  const auto ball2 = type_ball(4, make_type({1, 1}), 0.25);
  CHECK(ball2.size() == 3);
  // exhaustive agreement with the definition
  for (auto& t : enumerate_types(9, 3)) {
    const std::vector<double> s{0.3, 0.5, 0.2};
    CHECK(in_ball(t, s, 0.15) == (infinity_distance(s, t) <= 0.15 + 1e-12));
  }
}

TEST_CASE("type index") {
  TypeIndex idx(6, 3);
  CHECK(idx.size() == 28);
  for (int i = 0; i < idx.size(); ++i) CHECK(idx.find(idx[i].counts) == i);
  CHECK(idx.find({7, 0, 0}) == -1);
  CHECK(type_index(6, 3) == type_index(6, 3));
}
