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

#ifndef DPAUDIT_ATTACK_HPP_
#define DPAUDIT_ATTACK_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpaudit/histogram.hpp"
#include "dpaudit/parallel.hpp"
#include "dpaudit/rng.hpp"

namespace dpaudit {

// Output of the ordered-partition attack. Blocks are maximal groups of
// domain cells with identical larger() sets, ordered by strictly shrinking
// larger() sets, i.e. by increasing true count.
//
// larger(v) is the superlevel set {u : count(u) >= count(v) + noisy
// threshold}, derived from which difference queries the threshold mechanism
// answered Top. Because every larger() set is a superlevel set of the count
// vector at some cut, distinct sets are always strictly nested, so the block
// order is total.
struct OrderedPartition {
  // Disjoint, non-empty, cover the domain; each block's cells sorted
  // ascending.
  std::vector<std::vector<int32_t>> blocks;
  // larger() set shared by all cells of the corresponding block, sorted
  // ascending.
  std::vector<std::vector<int32_t>> larger_sets;
  // Cell index -> position of its block in `blocks`.
  std::vector<int32_t> block_of;

  int32_t num_blocks() const { return static_cast<int32_t>(blocks.size()); }
  int32_t domain_size() const { return static_cast<int32_t>(block_of.size()); }

  // The larger() map for one cell.
  const std::vector<int32_t>& larger(int32_t cell) const;

  // Checks the structural invariants (disjoint cover, per-block shared
  // larger() sets, strict nesting across consecutive blocks); throws
  // std::logic_error naming the first violation.
  void validate() const;
};

// The ordered-partition attack: answers every ordered difference query
// between distinct cells with the noiseless-query threshold mechanism
// (epsilon1 = epsilon, epsilon2 = +inf) at threshold
// ceil(ln(1/delta) / epsilon), then groups cells by their larger() sets.
// Requires domain size >= 2, epsilon > 0, delta in (0, 1). Consumes exactly
// one noise draw from rng (the shared noisy threshold).
OrderedPartition partition_attack(const Histogram& db, double epsilon,
                                  double delta, Rng& rng);

// Fraction of n_trials in which the attack's first m + 1 blocks equal the
// true level sets S_0, ..., S_m, where m = k - 2 * ceil(ln(1/delta)/epsilon).
// Requires every level set S_0..S_k non-empty (throws std::invalid_argument
// naming the first missing level) and k > 2 * alpha.
double reconstruction_theorem_check(const Histogram& db, int32_t k,
                                    double epsilon, double delta,
                                    int64_t n_trials, Rng& rng,
                                    ExecPolicy policy = default_exec_policy());

struct AccuracyMetrics {
  double overall = 0.0;
  // Exact-match fraction among cells with true count in [0, 5]; absent when
  // the histogram has no such cells.
  std::optional<double> small;
};

// Exact-match fractions of guessed against true counts. Throws
// std::invalid_argument on length mismatch or an empty domain.
AccuracyMetrics accuracy_metrics(const Histogram& true_db,
                                 std::span<const int64_t> guessed);

struct ReconstructionReport {
  std::vector<int64_t> guessed_counts;
  double overall_accuracy = 0.0;
  std::optional<double> small_count_accuracy;
  double epsilon_used = 0.0;
  // Key of the generator stream that produced this trial's draws.
  uint64_t trial_seed = 0;
};

// End-to-end reconstruction: split the budget as epsilon1 =
// split_fraction * epsilon (drives the partition attack) and epsilon2 =
// (1 - split_fraction) * epsilon; per block, release the true block total
// plus Laplace(1/epsilon2) noise, spread it uniformly over the block, round
// half away from zero and clamp at 0.
ReconstructionReport reconstruct(const Histogram& db, double epsilon,
                                 double delta, double split_fraction,
                                 Rng& rng);

namespace internal {

// Deterministic core of the attack at an injected noisy threshold; test
// hook and implementation detail of partition_attack.
OrderedPartition partition_with_threshold(const Histogram& db,
                                          double noisy_threshold);

}  // namespace internal

}  // namespace dpaudit

#endif  // DPAUDIT_ATTACK_HPP_
