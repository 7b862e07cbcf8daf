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

#include "dpaudit/attack.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dpaudit/laplace.hpp"

namespace dpaudit {

namespace {

void ValidateAttackParams(const Histogram& db, double epsilon, double delta) {
  if (db.domain_size() < 2) {
    throw std::invalid_argument("partition_attack: domain size must be >= 2");
  }
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw std::invalid_argument("partition_attack: epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("partition_attack: delta must lie in (0, 1)");
  }
}

int64_t AttackThreshold(double epsilon, double delta) {
  return static_cast<int64_t>(std::ceil(std::log(1.0 / delta) / epsilon));
}

// Sorted level sets S_0..S_k; missing levels are empty vectors.
std::vector<std::vector<int32_t>> LevelSets(const Histogram& db, int32_t k) {
  std::vector<std::vector<int32_t>> levels(static_cast<size_t>(k) + 1);
  for (int32_t cell = 0; cell < db.domain_size(); ++cell) {
    const int64_t c = db.counts()[static_cast<size_t>(cell)];
    if (c <= k) levels[static_cast<size_t>(c)].push_back(cell);
  }
  return levels;
}

}  // namespace

const std::vector<int32_t>& OrderedPartition::larger(int32_t cell) const {
  if (cell < 0 || cell >= domain_size()) {
    throw std::domain_error("OrderedPartition::larger: cell " +
                            std::to_string(cell) + " outside domain");
  }
  return larger_sets[static_cast<size_t>(block_of[static_cast<size_t>(cell)])];
}

void OrderedPartition::validate() const {
  if (blocks.size() != larger_sets.size()) {
    throw std::logic_error("OrderedPartition: blocks/larger_sets size mismatch");
  }
  std::vector<char> seen(block_of.size(), 0);
  for (size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) {
      throw std::logic_error("OrderedPartition: empty block " +
                             std::to_string(b));
    }
    for (int32_t cell : blocks[b]) {
      if (cell < 0 || cell >= domain_size() ||
          seen[static_cast<size_t>(cell)]++ != 0) {
        throw std::logic_error("OrderedPartition: blocks are not disjoint");
      }
      if (block_of[static_cast<size_t>(cell)] != static_cast<int32_t>(b)) {
        throw std::logic_error("OrderedPartition: block_of inconsistent");
      }
    }
  }
  for (char s : seen) {
    if (!s) throw std::logic_error("OrderedPartition: blocks do not cover domain");
  }
  for (size_t b = 0; b + 1 < larger_sets.size(); ++b) {
    const auto& big = larger_sets[b];
    const auto& small = larger_sets[b + 1];
    const bool strict_superset =
        big.size() > small.size() &&
        std::includes(big.begin(), big.end(), small.begin(), small.end());
    if (!strict_superset) {
      throw std::logic_error(
          "OrderedPartition: larger() sets not strictly nested at block " +
          std::to_string(b));
    }
  }
}

namespace internal {

OrderedPartition partition_with_threshold(const Histogram& db,
                                          double noisy_threshold) {
  const int32_t k = db.domain_size();
  const std::vector<int64_t>& counts = db.counts();

  // Cells in ascending count order (ties by cell index for determinism).
  std::vector<int32_t> by_count(static_cast<size_t>(k));
  for (int32_t i = 0; i < k; ++i) by_count[static_cast<size_t>(i)] = i;
  std::sort(by_count.begin(), by_count.end(), [&](int32_t a, int32_t b) {
    const int64_t ca = counts[static_cast<size_t>(a)];
    const int64_t cb = counts[static_cast<size_t>(b)];
    return ca != cb ? ca < cb : a < b;
  });
  std::vector<double> sorted_counts(static_cast<size_t>(k));
  for (int32_t i = 0; i < k; ++i) {
    sorted_counts[static_cast<size_t>(i)] = static_cast<double>(
        counts[static_cast<size_t>(by_count[static_cast<size_t>(i)])]);
  }

  // larger(v) = {u : count(u) >= count(v) + threshold} is the suffix of the
  // count order starting at the first cell meeting the cut, so its size
  // determines it. Walking cells in ascending count order makes the sizes
  // non-increasing, which groups blocks and orders them in one pass.
  OrderedPartition out;
  out.block_of.assign(static_cast<size_t>(k), -1);
  int64_t prev_size = -1;
  for (int32_t pos = 0; pos < k; ++pos) {
    const int32_t cell = by_count[static_cast<size_t>(pos)];
    const double cut =
        static_cast<double>(counts[static_cast<size_t>(cell)]) +
        noisy_threshold;
    const auto first_at_cut = std::lower_bound(sorted_counts.begin(),
                                               sorted_counts.end(), cut);
    const int64_t larger_size = sorted_counts.end() - first_at_cut;
    if (larger_size != prev_size) {
      out.blocks.emplace_back();
      std::vector<int32_t> larger(by_count.end() - larger_size,
                                  by_count.end());
      std::sort(larger.begin(), larger.end());
      out.larger_sets.push_back(std::move(larger));
      prev_size = larger_size;
    }
    out.blocks.back().push_back(cell);
    out.block_of[static_cast<size_t>(cell)] =
        static_cast<int32_t>(out.blocks.size()) - 1;
  }
  for (auto& block : out.blocks) std::sort(block.begin(), block.end());
  out.validate();
  return out;
}

}  // namespace internal

OrderedPartition partition_attack(const Histogram& db, double epsilon,
                                  double delta, Rng& rng) {
  ValidateAttackParams(db, epsilon, delta);
  const double theta = static_cast<double>(AttackThreshold(epsilon, delta));
  const LaplaceDist threshold_noise(0.0, 1.0 / epsilon);
  const double noisy_threshold = theta + threshold_noise.sample(rng);
  return internal::partition_with_threshold(db, noisy_threshold);
}

double reconstruction_theorem_check(const Histogram& db, int32_t k,
                                    double epsilon, double delta,
                                    int64_t n_trials, Rng& rng,
                                    ExecPolicy policy) {
  ValidateAttackParams(db, epsilon, delta);
  if (k < 1) {
    throw std::invalid_argument(
        "reconstruction_theorem_check: k must be >= 1");
  }
  if (n_trials < 1) {
    throw std::invalid_argument(
        "reconstruction_theorem_check: n_trials must be >= 1");
  }
  const std::vector<std::vector<int32_t>> levels = LevelSets(db, k);
  for (int32_t i = 0; i <= k; ++i) {
    if (levels[static_cast<size_t>(i)].empty()) {
      throw std::invalid_argument(
          "reconstruction_theorem_check: support level S_" +
          std::to_string(i) + " is empty");
    }
  }
  const int64_t alpha = AttackThreshold(epsilon, delta);
  if (static_cast<int64_t>(k) <= 2 * alpha) {
    throw std::invalid_argument(
        "reconstruction_theorem_check: k = " + std::to_string(k) +
        " must exceed 2*alpha = " + std::to_string(2 * alpha));
  }
  const int32_t m = k - static_cast<int32_t>(2 * alpha);

  const Rng base = rng.split();
  const int64_t hits = count_successes(
      n_trials,
      [&](int64_t trial) {
        Rng trial_rng = base.child(static_cast<uint64_t>(trial));
        const OrderedPartition part =
            partition_attack(db, epsilon, delta, trial_rng);
        if (part.num_blocks() <= m) return false;
        for (int32_t i = 0; i <= m; ++i) {
          if (part.blocks[static_cast<size_t>(i)] !=
              levels[static_cast<size_t>(i)]) {
            return false;
          }
        }
        return true;
      },
      policy);
  return static_cast<double>(hits) / static_cast<double>(n_trials);
}

AccuracyMetrics accuracy_metrics(const Histogram& true_db,
                                 std::span<const int64_t> guessed) {
  const size_t n = true_db.counts().size();
  if (guessed.size() != n) {
    throw std::invalid_argument(
        "accuracy_metrics: guessed length " + std::to_string(guessed.size()) +
        " does not match domain size " + std::to_string(n));
  }
  if (n == 0) {
    throw std::invalid_argument("accuracy_metrics: empty domain");
  }
  int64_t match = 0;
  int64_t small_total = 0;
  int64_t small_match = 0;
  for (size_t i = 0; i < n; ++i) {
    const int64_t truth = true_db.counts()[i];
    const bool hit = guessed[i] == truth;
    match += hit ? 1 : 0;
    if (truth >= 0 && truth <= 5) {
      ++small_total;
      small_match += hit ? 1 : 0;
    }
  }
  AccuracyMetrics out;
  out.overall = static_cast<double>(match) / static_cast<double>(n);
  if (small_total > 0) {
    out.small =
        static_cast<double>(small_match) / static_cast<double>(small_total);
  }
  return out;
}

ReconstructionReport reconstruct(const Histogram& db, double epsilon,
                                 double delta, double split_fraction,
                                 Rng& rng) {
  ValidateAttackParams(db, epsilon, delta);
  if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
    throw std::invalid_argument(
        "reconstruct: split_fraction must lie in (0, 1)");
  }
  const double epsilon1 = split_fraction * epsilon;
  const double epsilon2 = (1.0 - split_fraction) * epsilon;

  Rng trial_rng = rng.split();
  ReconstructionReport report;
  report.epsilon_used = epsilon;
  report.trial_seed = trial_rng.key();

  const OrderedPartition part =
      partition_attack(db, epsilon1, delta, trial_rng);
  const LaplaceDist block_noise(0.0, 1.0 / epsilon2);
  report.guessed_counts.assign(db.counts().size(), 0);
  for (size_t b = 0; b < part.blocks.size(); ++b) {
    const auto& block = part.blocks[b];
    int64_t total = 0;
    for (int32_t cell : block) total += db.counts()[static_cast<size_t>(cell)];
    const double noisy_total =
        static_cast<double>(total) + block_noise.sample(trial_rng);
    const double average = noisy_total / static_cast<double>(block.size());
    const int64_t guess = std::max<int64_t>(0, std::llround(average));
    for (int32_t cell : block) {
      report.guessed_counts[static_cast<size_t>(cell)] = guess;
    }
  }
  const AccuracyMetrics metrics = accuracy_metrics(db, report.guessed_counts);
  report.overall_accuracy = metrics.overall;
  report.small_count_accuracy = metrics.small;
  return report;
}

}  // namespace dpaudit
