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

#ifndef DPAUDIT_HISTOGRAM_HPP_
#define DPAUDIT_HISTOGRAM_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace dpaudit {

// Histogram over a fixed finite domain. counts[i] is the number of database
// entries in cell i; counts are non-negative by construction.
class Histogram {
 public:
  explicit Histogram(std::vector<int64_t> counts);

  int32_t domain_size() const { return static_cast<int32_t>(counts_.size()); }

  // Count of one cell; throws std::domain_error when index is out of range.
  int64_t count(int32_t index) const;

  // Number of database entries (sum over all cells).
  int64_t total() const;

  const std::vector<int64_t>& counts() const { return counts_; }

 private:
  std::vector<int64_t> counts_;
};

enum class QueryKind : uint8_t {
  kCount,  // count of one cell
  kDiff,   // difference of two distinct cells
};

// Counting query against a histogram, optionally shifted by a constant.
//
// Both kinds change by at most 1 between neighboring histograms, and a
// constant shift cancels in any difference of query values, so sensitivity
// is 1 regardless of kind or shift.
class Query {
 public:
  static Query Count(int32_t index);
  // Requires index_a != index_b; a difference of a cell with itself is
  // identically zero and is rejected rather than silently accepted.
  static Query Diff(int32_t index_a, int32_t index_b);

  // Same query with `offset` added to every answer.
  Query shifted(double offset) const;

  QueryKind kind() const { return kind_; }
  int32_t index_a() const { return index_a_; }
  // Subtrahend cell; meaningful only for kDiff.
  int32_t index_b() const { return index_b_; }
  double shift() const { return shift_; }

  double sensitivity() const { return 1.0; }

 private:
  Query(QueryKind kind, int32_t index_a, int32_t index_b, double shift)
      : kind_(kind), index_a_(index_a), index_b_(index_b), shift_(shift) {}

  QueryKind kind_;
  int32_t index_a_;
  int32_t index_b_;
  double shift_;
};

// True query answer on `db`; throws std::domain_error when any referenced
// cell is outside the domain.
double evaluate(const Query& query, const Histogram& db);

// Whether the histograms share a domain and differ by exactly one entry
// (L1 distance 1).
bool are_neighbors(const Histogram& a, const Histogram& b);

// Maximum per-query sensitivity. Throws std::invalid_argument on an empty
// query list; there is no meaningful scale for zero queries.
double global_sensitivity(std::span<const Query> queries);

// Pair of neighboring histograms; the constructor enforces adjacency so
// downstream privacy arguments can assume it.
class NeighborPair {
 public:
  NeighborPair(Histogram left, Histogram right);

  const Histogram& left() const { return left_; }
  const Histogram& right() const { return right_; }

 private:
  Histogram left_;
  Histogram right_;
};

}  // namespace dpaudit

#endif  // DPAUDIT_HISTOGRAM_HPP_
