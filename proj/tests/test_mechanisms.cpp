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

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "dpaudit/histogram.hpp"
#include "dpaudit/laplace.hpp"
#include "dpaudit/quadrature.hpp"
#include "dpaudit/rng.hpp"

namespace dpaudit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Large epsilon shrinks every noise scale to ~1e-6, so any query several
// units from the threshold is answered by its sign with certainty for all
// practical purposes.
constexpr double kNearNoiseless = 1e6;

Histogram TestDb() { return Histogram({10, 0, 12, 3, 14}); }

std::vector<Query> CountAll(const Histogram& db) {
  std::vector<Query> qs;
  for (int32_t i = 0; i < db.domain_size(); ++i) qs.push_back(Query::Count(i));
  return qs;
}

TEST_CASE("laplace_mechanism adds centered noise of the requested scale") {
  const std::vector<double> values = {5.0, -2.0};
  Rng rng(11);
  const int n = 20000;
  double sum0 = 0.0, sum_sq0 = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::vector<double> out = laplace_mechanism(values, 4.0, 2.0, rng);
    REQUIRE(out.size() == 2);
    sum0 += out[0];
    sum_sq0 += out[0] * out[0];
  }
  const double mean = sum0 / n;
  const double var = sum_sq0 / n - mean * mean;
  CHECK(mean == doctest::Approx(5.0).epsilon(0.02));
  // Scale 4/2 = 2, variance 2 * 2^2 = 8.
  CHECK(var == doctest::Approx(8.0).epsilon(0.1));
}

TEST_CASE("laplace_mechanism is deterministic in the seed") {
  const std::vector<double> values = {1.0, 2.0, 3.0};
  Rng a(7), b(7);
  CHECK(laplace_mechanism(values, 1.0, 0.5, a) ==
        laplace_mechanism(values, 1.0, 0.5, b));
}

TEST_CASE("laplace_mechanism rejects bad scale parameters") {
  const std::vector<double> values = {1.0};
  Rng rng(1);
  CHECK_THROWS_AS(laplace_mechanism(values, 0.0, 1.0, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(laplace_mechanism(values, 1.0, 0.0, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(laplace_mechanism(values, 1.0, -2.0, rng),
                  std::invalid_argument);
}

TEST_CASE("svt answers by sign when noise is negligible") {
  const Histogram db = TestDb();  // counts 10, 0, 12, 3, 14
  SvtParams params;
  params.threshold = 6.0;
  params.cutoff = 10;  // never reached
  params.epsilon = kNearNoiseless;
  Rng rng(21);
  const ThresholdVector out = svt(db, CountAll(db), params, rng);
  REQUIRE(out.answers.size() == 5);
  CHECK(out.answers[0] == Answer::kTop);
  CHECK(out.answers[1] == Answer::kBot);
  CHECK(out.answers[2] == Answer::kTop);
  CHECK(out.answers[3] == Answer::kBot);
  CHECK(out.answers[4] == Answer::kTop);
  CHECK(!out.aborted_at.has_value());
  CHECK(out.top_count() == 3);
  CHECK(out.noisy_values.empty());
}

TEST_CASE("svt stops at the cutoff-th Top") {
  const Histogram db = TestDb();
  SvtParams params;
  params.threshold = 6.0;
  params.cutoff = 2;
  params.epsilon = kNearNoiseless;
  Rng rng(22);
  const ThresholdVector out = svt(db, CountAll(db), params, rng);
  // 10 Top, 0 Bot, 12 Top: second Top hits the cutoff at index 2.
  REQUIRE(out.answers.size() == 3);
  CHECK(out.answers.back() == Answer::kTop);
  REQUIRE(out.aborted_at.has_value());
  CHECK(*out.aborted_at == 2);
  CHECK(out.top_count() == 2);
}

TEST_CASE("svt noisy-value mode releases values exactly at Top positions") {
  const Histogram db = TestDb();
  SvtParams params;
  params.threshold = 6.0;
  params.cutoff = 10;
  params.epsilon = kNearNoiseless;
  params.answer_mode = SvtAnswerMode::kNoisyValue;
  Rng rng(23);
  const ThresholdVector out = svt(db, CountAll(db), params, rng);
  REQUIRE(out.noisy_values.size() == out.answers.size());
  const std::array<double, 5> truth = {10, 0, 12, 3, 14};
  for (size_t i = 0; i < out.answers.size(); ++i) {
    if (out.answers[i] == Answer::kTop) {
      CHECK(out.noisy_values[i] == doctest::Approx(truth[i]).epsilon(1e-3));
    } else {
      CHECK(std::isnan(out.noisy_values[i]));
    }
  }
}

TEST_CASE("svt Top probability matches the two-sided Laplace convolution") {
  // threshold 0, one query of value 1, epsilon 2, cutoff 1: both noise
  // scales are 1, so P(Top) = P(Lap - Lap <= 1) = 1 - 3/(4e).
  const Histogram db({1});
  const std::vector<Query> qs = {Query::Count(0)};
  SvtParams params;
  params.threshold = 0.0;
  params.epsilon = 2.0;
  Rng rng(24);
  const int n = 200000;
  int tops = 0;
  for (int i = 0; i < n; ++i) {
    Rng trial = rng.child(static_cast<uint64_t>(i));
    if (svt(db, qs, params, trial).answers[0] == Answer::kTop) ++tops;
  }
  const double expect = 1.0 - 3.0 / (4.0 * std::exp(1.0));
  CHECK(static_cast<double>(tops) / n ==
        doctest::Approx(expect).epsilon(0.015));
}

TEST_CASE("svt query noise scale grows with the cutoff") {
  // With the threshold far below every answer, each released noisy value is
  // an unconditioned draw of value + Lap(2*sensitivity*cutoff/epsilon).
  const Histogram db({5});
  const std::vector<Query> qs = {Query::Count(0)};
  SvtParams params;
  params.threshold = -1000.0;
  params.cutoff = 3;
  params.epsilon = 1.0;
  params.answer_mode = SvtAnswerMode::kNoisyValue;
  Rng rng(25);
  const int n = 20000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    Rng trial = rng.child(static_cast<uint64_t>(i));
    const ThresholdVector out = svt(db, qs, params, trial);
    REQUIRE(out.answers[0] == Answer::kTop);
    sum += out.noisy_values[0];
    sum_sq += out.noisy_values[0] * out.noisy_values[0];
  }
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  CHECK(mean == doctest::Approx(5.0).epsilon(0.05));
  // Scale 2*1*3/1 = 6, variance 72.
  CHECK(var == doctest::Approx(72.0).epsilon(0.1));
}

TEST_CASE("svt transcript probabilities respect the epsilon budget") {
  // The correctly calibrated mechanism must bound every transcript's
  // probability ratio across one neighboring step by e^epsilon.
  const NeighborPair pair(Histogram({1, 0}), Histogram({0, 0}));
  const std::vector<Query> qs = {Query::Count(0), Query::Count(1)};
  SvtParams params;
  params.threshold = 0.5;
  params.epsilon = 1.0;
  const int n = 200000;
  // Transcripts with cutoff 1: [Top], [Bot, Top], [Bot, Bot].
  const auto transcript_index = [](const ThresholdVector& out) {
    if (out.answers[0] == Answer::kTop) return 0;
    return out.answers[1] == Answer::kTop ? 1 : 2;
  };
  std::array<std::array<int, 3>, 2> hits = {};
  for (int side = 0; side < 2; ++side) {
    const Histogram& db = side == 0 ? pair.left() : pair.right();
    Rng rng(26 + side);
    for (int i = 0; i < n; ++i) {
      Rng trial = rng.child(static_cast<uint64_t>(i));
      hits[side][transcript_index(svt(db, qs, params, trial))] += 1;
    }
  }
  for (int t = 0; t < 3; ++t) {
    const double p = static_cast<double>(hits[0][t]) / n;
    const double q = static_cast<double>(hits[1][t]) / n;
    REQUIRE(p > 0.02);
    REQUIRE(q > 0.02);
    CHECK(p / q <= std::exp(params.epsilon) * 1.1);
    CHECK(q / p <= std::exp(params.epsilon) * 1.1);
  }
}

TEST_CASE("svt utility failures stay below delta") {
  // All query answers sit farther than the utility radius from the
  // threshold, so any wrong answer is a utility failure. The observed
  // failure rate must stay below delta (the true rate here is ~0.4%).
  const Histogram db({8, 0, 9, 0, 10});
  const std::vector<Query> qs = {
      Query::Count(0), Query::Count(1).shifted(-8.0), Query::Count(2),
      Query::Count(3).shifted(-9.0), Query::Count(4)};
  SvtParams params;
  params.threshold = 0.0;
  params.epsilon = 1.0;
  params.cutoff = 1;
  const double delta = 0.05;
  const double alpha = svt_utility_bound(
      static_cast<int32_t>(qs.size()), params.cutoff, params.sensitivity,
      params.epsilon, delta);
  REQUIRE(alpha < 8.0);  // every |answer| exceeds the radius
  Rng rng(27);
  const int n = 10000;
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    Rng trial = rng.child(static_cast<uint64_t>(i));
    const ThresholdVector out = svt(db, qs, params, trial);
    bool bad = false;
    for (size_t j = 0; j < out.answers.size(); ++j) {
      const double truth = evaluate(qs[j], db);
      if (out.answers[j] == Answer::kTop && truth < params.threshold - alpha) {
        bad = true;
      }
      if (out.answers[j] == Answer::kBot && truth > params.threshold + alpha) {
        bad = true;
      }
    }
    if (bad) ++failures;
  }
  CHECK(static_cast<double>(failures) / n < delta);
}

TEST_CASE("svt parameter validation") {
  SvtParams params;
  params.epsilon = 0.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = SvtParams{};
  params.cutoff = 0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = SvtParams{};
  params.sensitivity = -1.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = SvtParams{};
  params.threshold = kInf;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = SvtParams{};
  CHECK_NOTHROW(params.validate());
}

TEST_CASE("svt rejects queries whose sensitivity exceeds the declared bound") {
  const Histogram db({1});
  const std::vector<Query> qs = {Query::Count(0)};
  SvtParams params;
  params.sensitivity = 0.5;  // below the unit query sensitivity
  Rng rng(28);
  CHECK_THROWS_AS(svt(db, qs, params, rng), std::invalid_argument);
}

TEST_CASE("gptt answers every query with no cutoff") {
  const Histogram db = TestDb();
  GpttParams params;
  params.threshold = 6.0;
  params.epsilon1 = kNearNoiseless;
  params.epsilon2 = kNearNoiseless;
  Rng rng(31);
  const GpttTranscript out = gptt(db, CountAll(db), params, rng);
  REQUIRE(out.answers.answers.size() == 5);
  CHECK(out.answers.answers[0] == Answer::kTop);
  CHECK(out.answers.answers[1] == Answer::kBot);
  CHECK(out.answers.answers[2] == Answer::kTop);
  CHECK(out.answers.answers[3] == Answer::kBot);
  CHECK(out.answers.answers[4] == Answer::kTop);
  CHECK(!out.answers.aborted_at.has_value());
  CHECK(out.answers.noisy_values.empty());
}

TEST_CASE("gptt transcript is internally consistent") {
  const Histogram db = TestDb();
  GpttParams params;
  params.threshold = 6.0;
  params.epsilon1 = 0.3;
  params.epsilon2 = 0.7;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const GpttTranscript out = gptt(db, CountAll(db), params, rng);
    REQUIRE(out.noisy_queries.size() == out.answers.answers.size());
    for (size_t i = 0; i < out.noisy_queries.size(); ++i) {
      const bool top = out.noisy_queries[i] >= out.noisy_threshold;
      CHECK((out.answers.answers[i] == Answer::kTop) == top);
    }
  }
}

TEST_CASE("gptt with infinite epsilon2 answers by exact comparison") {
  const Histogram db = TestDb();
  GpttParams params;
  params.threshold = 6.0;
  params.epsilon1 = 2.0;
  params.epsilon2 = kInf;
  CHECK(params.noiseless_queries());
  Rng rng(32);
  const GpttTranscript out = gptt(db, CountAll(db), params, rng);
  const std::array<double, 5> truth = {10, 0, 12, 3, 14};
  for (size_t i = 0; i < 5; ++i) {
    CHECK(out.noisy_queries[i] == truth[i]);  // exactly, no noise draw
  }
}

TEST_CASE("gptt with infinite epsilon2 consumes only the threshold draw") {
  const Histogram db = TestDb();
  GpttParams params;
  params.threshold = 6.0;
  params.epsilon1 = 2.0;
  params.epsilon2 = kInf;
  Rng used(33);
  (void)gptt(db, CountAll(db), params, used);
  Rng manual(33);
  (void)LaplaceDist(params.threshold, params.sensitivity / params.epsilon1)
      .sample(manual);
  CHECK(used.next_u64() == manual.next_u64());
}

TEST_CASE("gptt equal-to-threshold comparisons resolve to Top") {
  const Histogram db({6});
  const std::vector<Query> qs = {Query::Count(0)};
  GpttParams params;
  params.threshold = 6.0;
  params.epsilon1 = 1.0;
  params.epsilon2 = kInf;
  Rng rng(34);
  // Inject a noisy threshold exactly equal to the exact query value.
  const GpttTranscript out =
      internal::gptt_with_threshold(db, qs, params, 6.0, rng);
  CHECK(out.answers.answers[0] == Answer::kTop);
}

TEST_CASE("gptt Top probability matches a quadrature oracle") {
  // threshold 0, query value 1, epsilon1 0.5, epsilon2 2.0:
  // P(Top) = integral f_{Lap(0,2)}(z) * sf_{Lap(1,1/2)}(z) dz.
  const Histogram db({1});
  const std::vector<Query> qs = {Query::Count(0)};
  GpttParams params;
  params.threshold = 0.0;
  params.epsilon1 = 0.5;
  params.epsilon2 = 2.0;
  const LaplaceDist threshold_noise(0.0, 2.0);
  const LaplaceDist query_noise(1.0, 0.5);
  const std::vector<double> kinks = {0.0, 1.0};
  const double expect = integrate(
      [&](double z) { return threshold_noise.pdf(z) * query_noise.sf(z); },
      -60.0, 60.0, kinks);
  Rng rng(35);
  const int n = 200000;
  int tops = 0;
  for (int i = 0; i < n; ++i) {
    Rng trial = rng.child(static_cast<uint64_t>(i));
    if (gptt(db, qs, params, trial).answers.answers[0] == Answer::kTop) {
      ++tops;
    }
  }
  CHECK(static_cast<double>(tops) / n == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("gptt utility radius bounds threshold misses with noiseless queries") {
  const Histogram db({10, 2});
  const std::vector<Query> qs = {Query::Count(0), Query::Count(1)};
  GpttParams params;
  params.threshold = 6.0;
  params.epsilon1 = 1.0;
  params.epsilon2 = kInf;
  const double delta = 0.05;
  const double alpha =
      gptt_utility_alpha(params.sensitivity, params.epsilon1, delta);
  REQUIRE(alpha < 4.0);  // both queries are at distance 4 from the threshold
  Rng rng(36);
  const int n = 10000;
  int failures = 0;
  for (int i = 0; i < n; ++i) {
    Rng trial = rng.child(static_cast<uint64_t>(i));
    const GpttTranscript out = gptt(db, qs, params, trial);
    const bool bad = out.answers.answers[0] != Answer::kTop ||
                     out.answers.answers[1] != Answer::kBot;
    if (bad) ++failures;
  }
  // A miss requires the noisy threshold to leave [6 - 4, 6 + 4], which is
  // rarer than leaving the alpha-interval; delta bounds both.
  CHECK(static_cast<double>(failures) / n < delta);
}

TEST_CASE("gptt parameter validation") {
  GpttParams params;
  params.epsilon1 = kInf;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = GpttParams{};
  params.epsilon2 = 0.0;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = GpttParams{};
  params.epsilon2 = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = GpttParams{};
  params.epsilon2 = kInf;
  CHECK_NOTHROW(params.validate());
  CHECK(params.noiseless_queries());
  params = GpttParams{};
  CHECK_FALSE(params.noiseless_queries());
  CHECK_NOTHROW(params.validate());
}

TEST_CASE("published budget splits") {
  const EpsilonSplit lc = gptt_instantiation(GpttVariant::kLeeClifton, 2.0);
  CHECK(lc.epsilon1 == 0.5);
  CHECK(lc.epsilon2 == 1.5);
  const EpsilonSplit ch = gptt_instantiation(GpttVariant::kChen, 2.0);
  CHECK(ch.epsilon1 == 1.0);
  CHECK(ch.epsilon2 == 1.0);
  const EpsilonSplit st = gptt_instantiation(GpttVariant::kStoddard, 2.0);
  CHECK(st.epsilon1 == 2.0);
  CHECK(st.epsilon2 == kInf);
  CHECK_THROWS_AS(gptt_instantiation(GpttVariant::kChen, 0.0),
                  std::invalid_argument);
}

TEST_CASE("variant names round-trip") {
  for (GpttVariant v : {GpttVariant::kLeeClifton, GpttVariant::kChen,
                        GpttVariant::kStoddard}) {
    CHECK(gptt_variant_from_name(gptt_variant_name(v)) == v);
  }
  CHECK(gptt_variant_name(GpttVariant::kLeeClifton) == "lee_clifton");
  CHECK(gptt_variant_name(GpttVariant::kChen) == "chen");
  CHECK(gptt_variant_name(GpttVariant::kStoddard) == "stoddard");
  CHECK_THROWS_AS(gptt_variant_from_name("svt"), std::invalid_argument);
  CHECK_THROWS_AS(gptt_variant_from_name(""), std::invalid_argument);
}

TEST_CASE("amplified gptt with one copy matches plain gptt") {
  const Histogram db = TestDb();
  GpttParams params;
  params.threshold = 6.0;
  params.epsilon1 = 0.8;
  params.epsilon2 = 1.2;
  for (uint64_t seed = 100; seed < 110; ++seed) {
    Rng a(seed), b(seed);
    const ThresholdVector amp =
        gptt_amplified(db, CountAll(db), params, 1, a);
    const GpttTranscript plain = gptt(db, CountAll(db), params, b);
    CHECK(amp.answers == plain.answers.answers);
  }
}

TEST_CASE("amplified gptt majority sharpens noisy answers") {
  // Query value 1 vs injected threshold 0.5: a single comparison is correct
  // with probability 1 - exp(-0.5)/2 ~ 0.697; the majority over many copies
  // is correct far more often.
  const Histogram db({1});
  const std::vector<Query> qs = {Query::Count(0)};
  GpttParams params;
  params.threshold = 0.0;
  params.epsilon1 = 1.0;
  params.epsilon2 = 1.0;
  const auto correct_rate = [&](int32_t copies, uint64_t seed) {
    Rng rng(seed);
    const int n = 20000;
    int correct = 0;
    for (int i = 0; i < n; ++i) {
      Rng trial = rng.child(static_cast<uint64_t>(i));
      const ThresholdVector out = internal::gptt_amplified_with_threshold(
          db, qs, params, copies, 0.5, trial);
      if (out.answers[0] == Answer::kTop) ++correct;
    }
    return static_cast<double>(correct) / n;
  };
  const double single = correct_rate(1, 37);
  const double many = correct_rate(31, 137);
  CHECK(single ==
        doctest::Approx(1.0 - 0.5 * std::exp(-0.5)).epsilon(0.02));
  CHECK(many > single + 0.1);
  CHECK(many > 0.95);
}

TEST_CASE("amplified gptt with noiseless queries is exact for any copies") {
  const Histogram db = TestDb();
  GpttParams params;
  params.threshold = 6.0;
  params.epsilon1 = 1.0;
  params.epsilon2 = kInf;
  Rng rng(38);
  const ThresholdVector out =
      internal::gptt_amplified_with_threshold(db, CountAll(db), params, 101,
                                              6.0, rng);
  CHECK(out.answers == std::vector<Answer>{Answer::kTop, Answer::kBot,
                                           Answer::kTop, Answer::kBot,
                                           Answer::kTop});
}

TEST_CASE("amplified gptt rejects even or non-positive copy counts") {
  const Histogram db = TestDb();
  const std::vector<Query> qs = CountAll(db);
  const GpttParams params;
  Rng rng(39);
  CHECK_THROWS_AS(gptt_amplified(db, qs, params, 0, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(gptt_amplified(db, qs, params, 2, rng),
                  std::invalid_argument);
  CHECK_THROWS_AS(gptt_amplified(db, qs, params, -3, rng),
                  std::invalid_argument);
  // The failed calls must not have consumed any randomness.
  Rng fresh(39);
  CHECK(rng.next_u64() == fresh.next_u64());
}

TEST_CASE("svt_utility_bound formula and monotonicity") {
  CHECK(svt_utility_bound(100, 1, 1.0, 1.0, 0.1) ==
        doctest::Approx(std::log(100.0) + std::log(20.0)).epsilon(1e-12));
  CHECK(svt_utility_bound(10, 3, 2.0, 0.5, 0.05) ==
        doctest::Approx((3.0 * 2.0 / 0.5) *
                        (std::log(10.0) + std::log(40.0))).epsilon(1e-12));
  CHECK(svt_utility_bound(10, 2, 1.0, 1.0, 0.1) >
        svt_utility_bound(10, 1, 1.0, 1.0, 0.1));
  CHECK(svt_utility_bound(10, 1, 1.0, 2.0, 0.1) <
        svt_utility_bound(10, 1, 1.0, 1.0, 0.1));
  CHECK(svt_utility_bound(100, 1, 1.0, 1.0, 0.1) >
        svt_utility_bound(10, 1, 1.0, 1.0, 0.1));
  CHECK_THROWS_AS(svt_utility_bound(0, 1, 1.0, 1.0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(svt_utility_bound(10, 1, 1.0, 1.0, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(svt_utility_bound(10, 1, 1.0, 1.0, 1.5),
                  std::invalid_argument);
}

TEST_CASE("gptt_utility_alpha formula") {
  CHECK(gptt_utility_alpha(1.0, 0.5, 0.05) ==
        doctest::Approx(2.0 * std::log(20.0)).epsilon(1e-12));
  CHECK(gptt_utility_alpha(2.0, 1.0, 0.1) ==
        doctest::Approx(2.0 * std::log(10.0)).epsilon(1e-12));
  CHECK_THROWS_AS(gptt_utility_alpha(1.0, 0.0, 0.05), std::invalid_argument);
  CHECK_THROWS_AS(gptt_utility_alpha(1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("mechanism transcripts are deterministic in the seed") {
  const Histogram db = TestDb();
  const std::vector<Query> qs = CountAll(db);
  SvtParams sp;
  sp.threshold = 6.0;
  sp.epsilon = 0.4;
  sp.cutoff = 2;
  GpttParams gp;
  gp.threshold = 6.0;
  gp.epsilon1 = 0.4;
  gp.epsilon2 = 0.6;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng a(seed), b(seed);
    CHECK(svt(db, qs, sp, a).answers == svt(db, qs, sp, b).answers);
    Rng c(seed), d(seed);
    const GpttTranscript t1 = gptt(db, qs, gp, c);
    const GpttTranscript t2 = gptt(db, qs, gp, d);
    CHECK(t1.noisy_threshold == t2.noisy_threshold);
    CHECK(t1.noisy_queries == t2.noisy_queries);
  }
}

}  // namespace
}  // namespace dpaudit
