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

#ifndef DPAUDIT_MECHANISMS_HPP_
#define DPAUDIT_MECHANISMS_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dpaudit/histogram.hpp"
#include "dpaudit/rng.hpp"

namespace dpaudit {

enum class Answer : uint8_t {
  kBot,  // below threshold
  kTop,  // at or above threshold
};

enum class SvtAnswerMode : uint8_t {
  kBinary,      // Top/Bot only
  kNoisyValue,  // additionally release the noisy answer for Top positions
};

// Parameters of the sparse vector technique. Noise scales derive from
// (epsilon, sensitivity, cutoff); see svt().
struct SvtParams {
  double threshold = 0.0;
  int32_t cutoff = 1;
  double epsilon = 1.0;
  double sensitivity = 1.0;
  SvtAnswerMode answer_mode = SvtAnswerMode::kBinary;

  // Throws std::invalid_argument unless epsilon > 0, sensitivity > 0,
  // cutoff >= 1 and threshold is finite.
  void validate() const;
};

// Parameters of generalized private threshold testing. epsilon2 may be
// +infinity, in which case queries are compared exactly (zero noise).
struct GpttParams {
  double threshold = 0.0;
  double epsilon1 = 1.0;
  double epsilon2 = 1.0;
  double sensitivity = 1.0;

  bool noiseless_queries() const;

  // Throws std::invalid_argument unless epsilon1 > 0 and finite,
  // epsilon2 > 0 (possibly infinite), sensitivity > 0 and threshold finite.
  void validate() const;
};

// Answer vector of a threshold mechanism. The vector may be shorter than the
// query list when SVT aborts; if aborted_at is set, answers ends at the
// cutoff-th Top and answers.back() == kTop.
struct ThresholdVector {
  std::vector<Answer> answers;
  // SVT kNoisyValue mode only: the released noisy answer at Top positions,
  // NaN at Bot positions. Empty in binary mode and for GPTT.
  std::vector<double> noisy_values;
  // Index of the query whose Top answer hit the cutoff, if any.
  std::optional<int32_t> aborted_at;

  int32_t top_count() const;
};

// Full GPTT transcript, exposed for white-box tests and the audit module.
// Invariant: answers.answers[i] == kTop iff noisy_queries[i] >= noisy_threshold.
struct GpttTranscript {
  double noisy_threshold = 0.0;
  std::vector<double> noisy_queries;
  ThresholdVector answers;
};

// Batched Laplace mechanism: each value plus an independent draw from
// Laplace(0, summed_sensitivity / epsilon). The sensitivity here is the L1
// sensitivity of the whole value vector, not the per-query maximum used by
// the threshold mechanisms.
std::vector<double> laplace_mechanism(std::span<const double> values,
                                      double summed_sensitivity,
                                      double epsilon, Rng& rng);

// Sparse vector technique. Perturbs the threshold once with
// Laplace(2*sensitivity/epsilon), each query answer with
// Laplace(2*sensitivity*cutoff/epsilon), emits kTop when the noisy answer is
// >= the noisy threshold (ties go to Top), and stops after the cutoff-th Top.
// Throws std::invalid_argument if any query's sensitivity exceeds
// params.sensitivity.
ThresholdVector svt(const Histogram& db, std::span<const Query> queries,
                    const SvtParams& params, Rng& rng);

// Generalized private threshold testing. One noisy threshold
// (scale sensitivity/epsilon1), per-query noise of scale sensitivity/epsilon2
// (exactly zero when epsilon2 is infinite), kBot iff noisy query < noisy
// threshold. No cutoff: every query is answered.
GpttTranscript gptt(const Histogram& db, std::span<const Query> queries,
                    const GpttParams& params, Rng& rng);

enum class GpttVariant : uint8_t {
  kLeeClifton,  // epsilon1 = eps/4,  epsilon2 = 3*eps/4
  kChen,        // epsilon1 = epsilon2 = eps/2
  kStoddard,    // epsilon1 = eps,    epsilon2 = +infinity
};

struct EpsilonSplit {
  double epsilon1 = 0.0;
  double epsilon2 = 0.0;
};

// Budget split used by the named published instantiation.
EpsilonSplit gptt_instantiation(GpttVariant variant, double epsilon);

// Parses "lee_clifton", "chen" or "stoddard"; anything else throws
// std::invalid_argument.
GpttVariant gptt_variant_from_name(std::string_view name);
std::string_view gptt_variant_name(GpttVariant variant);

// Amplified GPTT: answers the t-fold replicated query stream against a
// single shared noisy threshold and returns the per-original-query majority
// vote. t must be odd so the majority is always defined.
ThresholdVector gptt_amplified(const Histogram& db,
                               std::span<const Query> queries,
                               const GpttParams& params, int32_t copies,
                               Rng& rng);

// Concrete instantiation (constant 1) of the SVT utility guarantee
// (cutoff * sensitivity / epsilon) * (ln(num_queries) + ln(2/delta)).
// Intended for relative and monotonicity checks only.
double svt_utility_bound(int32_t num_queries, int32_t cutoff,
                         double sensitivity, double epsilon, double delta);

// Utility radius (sensitivity / epsilon1) * ln(1/delta): with noiseless
// queries, all answers are correct up to this margin around the threshold
// with probability at least 1 - delta.
double gptt_utility_alpha(double sensitivity, double epsilon1, double delta);

namespace internal {

// Test hooks that inject a fixed noisy threshold, bypassing threshold noise.
// Not part of the public mechanism API; used by deterministic attack tests
// and the audit module's conditional computations.
GpttTranscript gptt_with_threshold(const Histogram& db,
                                   std::span<const Query> queries,
                                   const GpttParams& params,
                                   double noisy_threshold, Rng& rng);

ThresholdVector gptt_amplified_with_threshold(const Histogram& db,
                                              std::span<const Query> queries,
                                              const GpttParams& params,
                                              int32_t copies,
                                              double noisy_threshold, Rng& rng);

}  // namespace internal

}  // namespace dpaudit

#endif  // DPAUDIT_MECHANISMS_HPP_
