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

#include "dpaudit/mechanisms.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "dpaudit/laplace.hpp"

namespace dpaudit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void CheckQuerySensitivities(std::span<const Query> queries,
                             double sensitivity) {
  for (size_t i = 0; i < queries.size(); ++i) {
    if (queries[i].sensitivity() > sensitivity) {
      throw std::invalid_argument(
          "query " + std::to_string(i) + " has sensitivity " +
          std::to_string(queries[i].sensitivity()) +
          " exceeding the mechanism bound " + std::to_string(sensitivity));
    }
  }
}

}  // namespace

void SvtParams::validate() const {
  if (!std::isfinite(threshold)) {
    throw std::invalid_argument("SvtParams: threshold must be finite");
  }
  if (cutoff < 1) {
    throw std::invalid_argument("SvtParams: cutoff must be >= 1, got " +
                                std::to_string(cutoff));
  }
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw std::invalid_argument("SvtParams: epsilon must be positive, got " +
                                std::to_string(epsilon));
  }
  if (!std::isfinite(sensitivity) || sensitivity <= 0.0) {
    throw std::invalid_argument("SvtParams: sensitivity must be positive");
  }
}

bool GpttParams::noiseless_queries() const {
  return std::isinf(epsilon2) && epsilon2 > 0.0;
}

void GpttParams::validate() const {
  if (!std::isfinite(threshold)) {
    throw std::invalid_argument("GpttParams: threshold must be finite");
  }
  if (!std::isfinite(epsilon1) || epsilon1 <= 0.0) {
    throw std::invalid_argument("GpttParams: epsilon1 must be positive and finite");
  }
  if (std::isnan(epsilon2) || epsilon2 <= 0.0) {
    throw std::invalid_argument(
        "GpttParams: epsilon2 must be positive (possibly infinite)");
  }
  if (!std::isfinite(sensitivity) || sensitivity <= 0.0) {
    throw std::invalid_argument("GpttParams: sensitivity must be positive");
  }
}

int32_t ThresholdVector::top_count() const {
  int32_t n = 0;
  for (Answer a : answers) n += (a == Answer::kTop) ? 1 : 0;
  return n;
}

std::vector<double> laplace_mechanism(std::span<const double> values,
                                      double summed_sensitivity,
                                      double epsilon, Rng& rng) {
  if (!std::isfinite(summed_sensitivity) || summed_sensitivity <= 0.0) {
    throw std::invalid_argument("laplace_mechanism: sensitivity must be positive");
  }
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw std::invalid_argument("laplace_mechanism: epsilon must be positive");
  }
  const LaplaceDist noise(0.0, summed_sensitivity / epsilon);
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(v + noise.sample(rng));
  return out;
}

ThresholdVector svt(const Histogram& db, std::span<const Query> queries,
                    const SvtParams& params, Rng& rng) {
  params.validate();
  CheckQuerySensitivities(queries, params.sensitivity);

  const LaplaceDist threshold_noise(0.0, 2.0 * params.sensitivity / params.epsilon);
  const LaplaceDist query_noise(
      0.0, 2.0 * params.sensitivity * static_cast<double>(params.cutoff) /
               params.epsilon);
  const double noisy_threshold = params.threshold + threshold_noise.sample(rng);

  ThresholdVector out;
  const bool keep_values = params.answer_mode == SvtAnswerMode::kNoisyValue;
  int32_t tops = 0;
  for (size_t i = 0; i < queries.size(); ++i) {
    const double noisy = evaluate(queries[i], db) + query_noise.sample(rng);
    if (noisy >= noisy_threshold) {
      out.answers.push_back(Answer::kTop);
      if (keep_values) out.noisy_values.push_back(noisy);
      if (++tops >= params.cutoff) {
        out.aborted_at = static_cast<int32_t>(i);
        break;
      }
    } else {
      out.answers.push_back(Answer::kBot);
      if (keep_values) out.noisy_values.push_back(kNaN);
    }
  }
  return out;
}

namespace internal {

GpttTranscript gptt_with_threshold(const Histogram& db,
                                   std::span<const Query> queries,
                                   const GpttParams& params,
                                   double noisy_threshold, Rng& rng) {
  params.validate();
  CheckQuerySensitivities(queries, params.sensitivity);

  GpttTranscript out;
  out.noisy_threshold = noisy_threshold;
  out.noisy_queries.reserve(queries.size());
  out.answers.answers.reserve(queries.size());
  if (params.noiseless_queries()) {
    // Exactly zero query noise; no rng draws are consumed.
    for (const Query& q : queries) {
      out.noisy_queries.push_back(evaluate(q, db));
    }
  } else {
    const LaplaceDist query_noise(0.0, params.sensitivity / params.epsilon2);
    for (const Query& q : queries) {
      out.noisy_queries.push_back(evaluate(q, db) + query_noise.sample(rng));
    }
  }
  for (double noisy : out.noisy_queries) {
    out.answers.answers.push_back(noisy < noisy_threshold ? Answer::kBot
                                                          : Answer::kTop);
  }
  return out;
}

ThresholdVector gptt_amplified_with_threshold(const Histogram& db,
                                              std::span<const Query> queries,
                                              const GpttParams& params,
                                              int32_t copies,
                                              double noisy_threshold,
                                              Rng& rng) {
  params.validate();
  CheckQuerySensitivities(queries, params.sensitivity);
  if (copies < 1 || copies % 2 == 0) {
    throw std::invalid_argument(
        "gptt_amplified: copies must be odd and >= 1, got " +
        std::to_string(copies));
  }

  // Equivalent to answering the copies-fold replicated query stream against
  // the shared threshold: copy j of query i uses the (i*copies + j)-th noise
  // draw, which is the replicated stream's natural order.
  ThresholdVector out;
  out.answers.reserve(queries.size());
  for (const Query& q : queries) {
    const double truth = evaluate(q, db);
    int32_t tops = 0;
    if (params.noiseless_queries()) {
      // All copies compare identically; the majority is the single answer.
      tops = truth >= noisy_threshold ? copies : 0;
    } else {
      const LaplaceDist query_noise(0.0, params.sensitivity / params.epsilon2);
      for (int32_t j = 0; j < copies; ++j) {
        if (truth + query_noise.sample(rng) >= noisy_threshold) ++tops;
      }
    }
    out.answers.push_back(2 * tops > copies ? Answer::kTop : Answer::kBot);
  }
  return out;
}

}  // namespace internal

GpttTranscript gptt(const Histogram& db, std::span<const Query> queries,
                    const GpttParams& params, Rng& rng) {
  params.validate();
  const LaplaceDist threshold_noise(0.0, params.sensitivity / params.epsilon1);
  const double noisy_threshold = params.threshold + threshold_noise.sample(rng);
  return internal::gptt_with_threshold(db, queries, params, noisy_threshold,
                                       rng);
}

ThresholdVector gptt_amplified(const Histogram& db,
                               std::span<const Query> queries,
                               const GpttParams& params, int32_t copies,
                               Rng& rng) {
  params.validate();
  if (copies < 1 || copies % 2 == 0) {
    throw std::invalid_argument(
        "gptt_amplified: copies must be odd and >= 1, got " +
        std::to_string(copies));
  }
  const LaplaceDist threshold_noise(0.0, params.sensitivity / params.epsilon1);
  const double noisy_threshold = params.threshold + threshold_noise.sample(rng);
  return internal::gptt_amplified_with_threshold(db, queries, params, copies,
                                                 noisy_threshold, rng);
}

EpsilonSplit gptt_instantiation(GpttVariant variant, double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw std::invalid_argument("gptt_instantiation: epsilon must be positive");
  }
  switch (variant) {
    case GpttVariant::kLeeClifton:
      return {epsilon / 4.0, 3.0 * epsilon / 4.0};
    case GpttVariant::kChen:
      return {epsilon / 2.0, epsilon / 2.0};
    case GpttVariant::kStoddard:
      return {epsilon, std::numeric_limits<double>::infinity()};
  }
  throw std::invalid_argument("gptt_instantiation: unknown variant");
}

GpttVariant gptt_variant_from_name(std::string_view name) {
  if (name == "lee_clifton") return GpttVariant::kLeeClifton;
  if (name == "chen") return GpttVariant::kChen;
  if (name == "stoddard") return GpttVariant::kStoddard;
  throw std::invalid_argument("unknown GPTT variant: " + std::string(name) +
                              " (expected lee_clifton, chen or stoddard)");
}

std::string_view gptt_variant_name(GpttVariant variant) {
  switch (variant) {
    case GpttVariant::kLeeClifton:
      return "lee_clifton";
    case GpttVariant::kChen:
      return "chen";
    case GpttVariant::kStoddard:
      return "stoddard";
  }
  return "unknown";
}

double svt_utility_bound(int32_t num_queries, int32_t cutoff,
                         double sensitivity, double epsilon, double delta) {
  if (num_queries < 1 || cutoff < 1) {
    throw std::invalid_argument("svt_utility_bound: counts must be >= 1");
  }
  if (!(sensitivity > 0.0) || !(epsilon > 0.0)) {
    throw std::invalid_argument(
        "svt_utility_bound: sensitivity and epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("svt_utility_bound: delta must lie in (0,1)");
  }
  return (static_cast<double>(cutoff) * sensitivity / epsilon) *
         (std::log(static_cast<double>(num_queries)) + std::log(2.0 / delta));
}

double gptt_utility_alpha(double sensitivity, double epsilon1, double delta) {
  if (!(sensitivity > 0.0) || !(epsilon1 > 0.0)) {
    throw std::invalid_argument(
        "gptt_utility_alpha: sensitivity and epsilon1 must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("gptt_utility_alpha: delta must lie in (0,1)");
  }
  return (sensitivity / epsilon1) * std::log(1.0 / delta);
}

}  // namespace dpaudit
