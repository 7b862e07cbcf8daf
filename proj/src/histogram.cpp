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
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace dpaudit {

Histogram::Histogram(std::vector<int64_t> counts) : counts_(std::move(counts)) {
  for (size_t i = 0; i < counts_.size(); ++i) {
    if (counts_[i] < 0) {
      throw std::invalid_argument("Histogram: count must be non-negative, got " +
                                  std::to_string(counts_[i]) + " at cell " +
                                  std::to_string(i));
    }
  }
}

int64_t Histogram::count(int32_t index) const {
  if (index < 0 || index >= domain_size()) {
    throw std::domain_error("Histogram: cell " + std::to_string(index) +
                            " outside domain of size " +
                            std::to_string(domain_size()));
  }
  return counts_[static_cast<size_t>(index)];
}

int64_t Histogram::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), int64_t{0});
}

Query Query::Count(int32_t index) {
  return Query(QueryKind::kCount, index, -1, 0.0);
}

Query Query::Diff(int32_t index_a, int32_t index_b) {
  if (index_a == index_b) {
    throw std::invalid_argument(
        "Query::Diff: cells must be distinct, both are " +
        std::to_string(index_a));
  }
  return Query(QueryKind::kDiff, index_a, index_b, 0.0);
}

Query Query::shifted(double offset) const {
  if (!std::isfinite(offset)) {
    throw std::invalid_argument("Query::shifted: offset must be finite");
  }
  return Query(kind_, index_a_, index_b_, shift_ + offset);
}

double evaluate(const Query& query, const Histogram& db) {
  switch (query.kind()) {
    case QueryKind::kCount:
      return static_cast<double>(db.count(query.index_a())) + query.shift();
    case QueryKind::kDiff:
      return static_cast<double>(db.count(query.index_a()) -
                                 db.count(query.index_b())) +
             query.shift();
  }
  std::abort();  // unreachable
}

bool are_neighbors(const Histogram& a, const Histogram& b) {
  if (a.domain_size() != b.domain_size()) return false;
  int64_t l1 = 0;
  for (int32_t i = 0; i < a.domain_size(); ++i) {
    l1 += std::abs(a.counts()[static_cast<size_t>(i)] -
                   b.counts()[static_cast<size_t>(i)]);
    if (l1 > 1) return false;
  }
  return l1 == 1;
}

double global_sensitivity(std::span<const Query> queries) {
  if (queries.empty()) {
    throw std::invalid_argument("global_sensitivity: empty query list");
  }
  double max_s = 0.0;
  for (const Query& q : queries) max_s = std::max(max_s, q.sensitivity());
  return max_s;
}

NeighborPair::NeighborPair(Histogram left, Histogram right)
    : left_(std::move(left)), right_(std::move(right)) {
  if (!are_neighbors(left_, right_)) {
    throw std::invalid_argument(
        "NeighborPair: histograms must share a domain and differ by exactly "
        "one entry");
  }
}

}  // namespace dpaudit
