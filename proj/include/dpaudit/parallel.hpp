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

#ifndef DPAUDIT_PARALLEL_HPP_
#define DPAUDIT_PARALLEL_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace dpaudit {

enum class ExecPolicy {
  kSerial,
  kParallel,  // OpenMP when compiled in; falls back to serial otherwise
};

inline ExecPolicy default_exec_policy() {
#ifdef _OPENMP
  return ExecPolicy::kParallel;
#else
  return ExecPolicy::kSerial;
#endif
}

// Deterministic map-reduce over [0, n).
//
// The index range is cut into fixed blocks of `block_size`. Each block folds
// its items serially (in index order) into a block-local partial, and the
// partials are merged in block order afterwards. Work distribution therefore
// changes which thread computes a block but never the arithmetic, so results
// are bit-identical between kSerial and kParallel and across thread counts.
//
// per_item: void(int64_t i, Partial&).  merge: void(Partial& into, const Partial&).
template <typename Partial, typename PerItem, typename Merge>
Partial blocked_reduce(int64_t n, int64_t block_size, Partial init,
                       PerItem per_item, Merge merge,
                       ExecPolicy policy = default_exec_policy()) {
  if (n <= 0) return init;
  block_size = std::max<int64_t>(1, block_size);
  const int64_t n_blocks = (n + block_size - 1) / block_size;
  std::vector<Partial> partials(static_cast<size_t>(n_blocks), init);
  auto run_block = [&](int64_t block) {
    Partial& p = partials[static_cast<size_t>(block)];
    const int64_t lo = block * block_size;
    const int64_t hi = std::min(n, lo + block_size);
    for (int64_t i = lo; i < hi; ++i) per_item(i, p);
  };
#ifdef _OPENMP
  if (policy == ExecPolicy::kParallel) {
#pragma omp parallel for schedule(dynamic)
    for (int64_t block = 0; block < n_blocks; ++block) run_block(block);
  } else {
    for (int64_t block = 0; block < n_blocks; ++block) run_block(block);
  }
#else
  (void)policy;
  for (int64_t block = 0; block < n_blocks; ++block) run_block(block);
#endif
  Partial out = std::move(partials[0]);
  for (int64_t block = 1; block < n_blocks; ++block) {
    merge(out, partials[static_cast<size_t>(block)]);
  }
  return out;
}

// Block size for trial loops: big enough to amortize scheduling, small
// enough that a handful of threads still load-balance a short run.
inline constexpr int64_t kTrialBlockSize = 1024;

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
  int64_t n = 0;
};

// Sample mean of f(i) over i in [0, n) with its standard error.
template <typename F>
MeanAndError mean_and_std_error(int64_t n, F f,
                                ExecPolicy policy = default_exec_policy()) {
  struct Sums {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  const Sums total = blocked_reduce(
      n, kTrialBlockSize, Sums{},
      [&f](int64_t i, Sums& s) {
        const double x = f(i);
        s.sum += x;
        s.sum_sq += x * x;
      },
      [](Sums& into, const Sums& from) {
        into.sum += from.sum;
        into.sum_sq += from.sum_sq;
      },
      policy);
  MeanAndError out;
  out.n = n;
  if (n <= 0) return out;
  out.mean = total.sum / static_cast<double>(n);
  if (n >= 2) {
    const double nn = static_cast<double>(n);
    const double var =
        std::max(0.0, (total.sum_sq - nn * out.mean * out.mean) / (nn - 1.0));
    out.std_error = std::sqrt(var / nn);
  }
  return out;
}

// Number of i in [0, n) with pred(i) true.
template <typename Pred>
int64_t count_successes(int64_t n, Pred pred,
                        ExecPolicy policy = default_exec_policy()) {
  return blocked_reduce(
      n, kTrialBlockSize, int64_t{0},
      [&pred](int64_t i, int64_t& c) { c += pred(i) ? 1 : 0; },
      [](int64_t& into, const int64_t& from) { into += from; }, policy);
}

}  // namespace dpaudit

#endif  // DPAUDIT_PARALLEL_HPP_
