// Copyright 2026 The dpaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpaudit/histogram.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"

namespace dpaudit {
namespace {

TEST_CASE("histogram stores counts and rejects negatives") {
  const Histogram db({3, 0, 7});
  CHECK(db.domain_size() == 3);
  CHECK(db.count(0) == 3);
  CHECK(db.count(1) == 0);
  CHECK(db.count(2) == 7);
  CHECK(db.total() == 10);
  CHECK_THROWS_AS(Histogram({1, -1, 2}), std::invalid_argument);
}

TEST_CASE("out-of-range cell access throws") {
  const Histogram db({3, 0, 7});
  CHECK_THROWS_AS(db.count(-1), std::domain_error);
  CHECK_THROWS_AS(db.count(3), std::domain_error);
}

TEST_CASE("empty histogram is allowed and has total zero") {
  const Histogram db(std::vector<int64_t>{});
  CHECK(db.domain_size() == 0);
  CHECK(db.total() == 0);
}

TEST_CASE("count queries evaluate to the cell count") {
  const Histogram db({3, 0, 7});
  CHECK(evaluate(Query::Count(0), db) == 3.0);
  CHECK(evaluate(Query::Count(2), db) == 7.0);
  CHECK_THROWS_AS(evaluate(Query::Count(3), db), std::domain_error);
}

TEST_CASE("difference queries evaluate to the count difference") {
  const Histogram db({3, 0, 7});
  CHECK(evaluate(Query::Diff(2, 0), db) == 4.0);
  CHECK(evaluate(Query::Diff(0, 2), db) == -4.0);
  CHECK_THROWS_AS(evaluate(Query::Diff(0, 5), db), std::domain_error);
}

TEST_CASE("a cell differenced with itself is rejected") {
  CHECK_THROWS_AS(Query::Diff(1, 1), std::invalid_argument);
}

TEST_CASE("shifted queries add the offset to every answer") {
  const Histogram db({3, 0, 7});
  const Query q = Query::Diff(2, 0).shifted(1.5);
  CHECK(evaluate(q, db) == 5.5);
  CHECK(q.shift() == 1.5);
  // Shifts compose additively.
  CHECK(evaluate(q.shifted(-1.5), db) == 4.0);
  CHECK_THROWS_AS(
      Query::Count(0).shifted(std::numeric_limits<double>::infinity()),
      std::invalid_argument);
  CHECK_THROWS_AS(
      Query::Count(0).shifted(std::numeric_limits<double>::quiet_NaN()),
      std::invalid_argument);
}

TEST_CASE("every query has unit sensitivity") {
  CHECK(Query::Count(4).sensitivity() == 1.0);
  CHECK(Query::Diff(1, 0).sensitivity() == 1.0);
  CHECK(Query::Diff(1, 0).shifted(100.0).sensitivity() == 1.0);
}

TEST_CASE("neighbor detection requires L1 distance exactly one") {
  const Histogram base({3, 1, 4});
  CHECK(are_neighbors(base, Histogram({3, 2, 4})));
  CHECK(are_neighbors(base, Histogram({3, 0, 4})));
  CHECK(are_neighbors(Histogram({3, 2, 4}), base));
  CHECK_FALSE(are_neighbors(base, base));
  CHECK_FALSE(are_neighbors(base, Histogram({4, 2, 4})));
  CHECK_FALSE(are_neighbors(base, Histogram({3, 3, 4})));
  CHECK_FALSE(are_neighbors(base, Histogram({3, 1})));
}

TEST_CASE("neighboring answers differ by at most the sensitivity") {
  const Histogram a({3, 1, 4});
  const Histogram b({3, 2, 4});
  REQUIRE(are_neighbors(a, b));
  const std::vector<Query> queries = {Query::Count(0), Query::Count(1),
                                      Query::Diff(1, 2),
                                      Query::Diff(0, 1).shifted(2.0)};
  for (const Query& q : queries) {
    CHECK(std::abs(evaluate(q, a) - evaluate(q, b)) <= q.sensitivity());
  }
}

TEST_CASE("global sensitivity is the per-query maximum") {
  const std::vector<Query> queries = {Query::Count(0), Query::Diff(1, 2),
                                      Query::Count(3).shifted(-7.0)};
  CHECK(global_sensitivity(queries) == 1.0);
  CHECK_THROWS_AS(global_sensitivity(std::vector<Query>{}),
                  std::invalid_argument);
}

TEST_CASE("neighbor pairs enforce adjacency at construction") {
  const NeighborPair pair(Histogram({1, 0}), Histogram({0, 0}));
  CHECK(pair.left().count(0) == 1);
  CHECK(pair.right().count(0) == 0);
  CHECK_THROWS_AS(NeighborPair(Histogram({1, 0}), Histogram({1, 0})),
                  std::invalid_argument);
  CHECK_THROWS_AS(NeighborPair(Histogram({2, 0}), Histogram({0, 0})),
                  std::invalid_argument);
}

}  // namespace
}  // namespace dpaudit
