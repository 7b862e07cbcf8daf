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

#include "dpaudit/audit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "dpaudit/laplace.hpp"
#include "dpaudit/quadrature.hpp"

namespace dpaudit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLn2 = 0.69314718055994530942;

// Truncation half-width: the threshold-noise mass outside [-T, T] is below
// kTailTol, and the conditional factors are at most 1, so truncating there
// costs at most kTailTol in absolute terms.
constexpr double kTailTol = 1e-14;

void RequireFiniteEpsilon2(double epsilon2, const char* who) {
  if (!std::isfinite(epsilon2) || epsilon2 <= 0.0) {
    throw std::invalid_argument(
        std::string(who) +
        ": requires finite epsilon2 > 0 (the infinite case has the closed "
        "form exact_output_probability_hard)");
  }
}

std::pair<double, double> IntegrationRange(double epsilon1) {
  const double T = std::log(2.0 / kTailTol) / epsilon1;
  // Keep the cdf kinks at z in {0, 1} strictly inside the range even for
  // large epsilon1; widening past T only adds sub-kTailTol mass.
  return {std::min(-T, -2.0), std::max(T, 3.0)};
}

// ln g(z): log conditional probability that one (Bot-target, Top-target)
// query pair answers as audited, given noisy threshold z.
double LogPairFactor(const LaplaceDist& query_noise, double z,
                     WhichDatabase which) {
  // D: the Bot-target query answers 0, the Top-target query answers 1.
  // D': the answers swap, which swaps the two cdf arguments.
  return which == WhichDatabase::kD
             ? query_noise.log_cdf(z) + query_noise.log_sf(z - 1.0)
             : query_noise.log_cdf(z - 1.0) + query_noise.log_sf(z);
}

NeighborPair MakeCounterexampleDatabases() {
  return NeighborPair(Histogram({1, 0}), Histogram({0, 0}));
}

int32_t ValidatedCopies(int32_t copies) {
  if (copies < 0) {
    throw std::invalid_argument("CounterexampleSpec: copies must be >= 0");
  }
  return copies;
}

std::vector<Query> MakeCounterexampleQueries(int32_t copies) {
  std::vector<Query> queries;
  queries.reserve(2 * static_cast<size_t>(copies));
  // Answers 0 on D, 1 on D'.
  const Query bot_target = Query::Diff(1, 0).shifted(1.0);
  // Answers 1 on D, 0 on D'.
  const Query top_target = Query::Count(0);
  for (int32_t i = 0; i < copies; ++i) queries.push_back(bot_target);
  for (int32_t i = 0; i < copies; ++i) queries.push_back(top_target);
  return queries;
}

}  // namespace

CounterexampleSpec::CounterexampleSpec(int32_t copies, double epsilon1,
                                       double epsilon2)
    : copies_(ValidatedCopies(copies)),
      epsilon1_(epsilon1),
      epsilon2_(epsilon2),
      databases_(MakeCounterexampleDatabases()),
      queries_(MakeCounterexampleQueries(copies_)) {
  if (!std::isfinite(epsilon1) || epsilon1 <= 0.0) {
    throw std::invalid_argument(
        "CounterexampleSpec: epsilon1 must be positive and finite");
  }
  if (std::isnan(epsilon2) || epsilon2 <= 0.0) {
    throw std::invalid_argument(
        "CounterexampleSpec: epsilon2 must be positive (possibly infinite)");
  }
  // Check the concrete realization against the intended answer pattern.
  for (int32_t i = 0; i < 2 * copies; ++i) {
    const double on_d = evaluate(queries_[i], databases_.left());
    const double on_dprime = evaluate(queries_[i], databases_.right());
    const double want_d = i < copies ? 0.0 : 1.0;
    if (on_d != want_d || on_dprime != 1.0 - want_d) {
      throw std::logic_error("CounterexampleSpec: realization mismatch");
    }
  }
}

std::vector<Answer> CounterexampleSpec::target_output() const {
  std::vector<Answer> out(2 * static_cast<size_t>(copies_), Answer::kTop);
  for (int32_t i = 0; i < copies_; ++i) out[i] = Answer::kBot;
  return out;
}

GpttParams CounterexampleSpec::gptt_params() const {
  GpttParams params;
  params.threshold = kThreshold;
  params.epsilon1 = epsilon1_;
  params.epsilon2 = epsilon2_;
  params.sensitivity = kSensitivity;
  return params;
}

double exact_log_output_probability(const CounterexampleSpec& spec,
                                    WhichDatabase which) {
  RequireFiniteEpsilon2(spec.epsilon2(), "exact_output_probability");
  const LaplaceDist threshold_noise(0.0, 1.0 / spec.epsilon1());
  const LaplaceDist query_noise(0.0, 1.0 / spec.epsilon2());
  const double t = static_cast<double>(spec.copies());
  const auto [lo, hi] = IntegrationRange(spec.epsilon1());
  const double kinks[] = {0.0, 1.0};
  const auto log_integrand = [&](double z) {
    double v = threshold_noise.log_pdf(z);
    if (t > 0.0) v += t * LogPairFactor(query_noise, z, which);
    return v;
  };
  return log_integrate(log_integrand, lo, hi, kinks, 1e-9);
}

double exact_output_probability(const CounterexampleSpec& spec,
                                WhichDatabase which) {
  return std::exp(exact_log_output_probability(spec, which));
}

std::pair<double, double> exact_output_probability_hard(double epsilon1) {
  if (!std::isfinite(epsilon1) || epsilon1 <= 0.0) {
    throw std::invalid_argument(
        "exact_output_probability_hard: epsilon1 must be positive and finite");
  }
  // P[threshold noise in (0, 1]] = cdf(1) - cdf(0) = (1 - e^{-eps1}) / 2.
  // Ties go to Top, so the threshold exactly at 1 still yields the target.
  const double prob_d = 0.5 * (-std::expm1(-epsilon1));
  return {prob_d, 0.0};
}

double log_kappa(double z, double epsilon2) {
  RequireFiniteEpsilon2(epsilon2, "kappa");
  if (!std::isfinite(z)) {
    throw std::invalid_argument("kappa: z must be finite");
  }
  const LaplaceDist q(0.0, 1.0 / epsilon2);
  return q.log_cdf(z) + q.log_sf(z - 1.0) - q.log_cdf(z - 1.0) - q.log_sf(z);
}

double kappa(double z, double epsilon2) {
  return std::exp(log_kappa(z, epsilon2));
}

double kappa_min_interval(double epsilon2, double half_width) {
  RequireFiniteEpsilon2(epsilon2, "kappa_min_interval");
  if (!std::isfinite(half_width) || half_width <= 0.0) {
    throw std::invalid_argument(
        "kappa_min_interval: half_width must be positive and finite");
  }
  constexpr int kGrid = 4096;
  const double lo = -half_width;
  const double step = 2.0 * half_width / kGrid;
  double best_z = lo;
  double best = log_kappa(lo, epsilon2);
  for (int i = 1; i <= kGrid; ++i) {
    const double z = lo + step * static_cast<double>(i);
    const double v = log_kappa(z, epsilon2);
    if (v < best) {
      best = v;
      best_z = z;
    }
  }
  // Golden-section refinement in the bracket around the best grid point.
  double a = std::max(lo, best_z - step);
  double b = std::min(half_width, best_z + step);
  constexpr double kGolden = 0.61803398874989485;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = log_kappa(x1, epsilon2);
  double f2 = log_kappa(x2, epsilon2);
  for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = log_kappa(x1, epsilon2);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = log_kappa(x2, epsilon2);
    }
  }
  best = std::min({best, f1, f2});
  return std::exp(best);
}

double proof_interval_half_width(double epsilon1, double alpha) {
  if (!std::isfinite(epsilon1) || epsilon1 <= 0.0) {
    throw std::invalid_argument(
        "proof_interval_half_width: epsilon1 must be positive and finite");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument(
        "proof_interval_half_width: alpha must lie in (0, 1]");
  }
  return std::abs(LaplaceDist(0.0, 1.0 / epsilon1).quantile(alpha / 4.0));
}

double proof_log_ratio_lower_bound(const CounterexampleSpec& spec,
                                   double alpha) {
  RequireFiniteEpsilon2(spec.epsilon2(), "proof_log_ratio_lower_bound");
  const double w = proof_interval_half_width(spec.epsilon1(), alpha);
  const double kappa_min = kappa_min_interval(spec.epsilon2(), w);
  return static_cast<double>(spec.copies()) * std::log(kappa_min) - kLn2;
}

namespace internal {

namespace {

// Streaming log-sum-exp accumulator for weights and squared weights.
struct LogSums {
  double max_w = -kInf;
  double sum_w = 0.0;  // sum of exp(lw - max_w)
  double max_w2 = -kInf;
  double sum_w2 = 0.0;

  static void Add(double& mx, double& sm, double lw) {
    if (lw == -kInf) return;
    if (lw <= mx) {
      sm += std::exp(lw - mx);
    } else {
      sm = sm * std::exp(mx - lw) + 1.0;
      mx = lw;
    }
  }

  static void MergeOne(double& mx, double& sm, double o_mx, double o_sm) {
    if (o_mx == -kInf) return;
    if (o_mx <= mx) {
      sm += o_sm * std::exp(o_mx - mx);
    } else {
      sm = sm * std::exp(mx - o_mx) + o_sm;
      mx = o_mx;
    }
  }

  void add(double lw) {
    Add(max_w, sum_w, lw);
    Add(max_w2, sum_w2, 2.0 * lw);
  }

  void merge(const LogSums& other) {
    MergeOne(max_w, sum_w, other.max_w, other.sum_w);
    MergeOne(max_w2, sum_w2, other.max_w2, other.sum_w2);
  }
};

}  // namespace

LogMcMoments mc_log_moments(const CounterexampleSpec& spec,
                            WhichDatabase which, int64_t n_trials,
                            const Rng& trial_base, ExecPolicy policy) {
  if (n_trials < 1) {
    throw std::invalid_argument("mc_log_moments: n_trials must be >= 1");
  }
  const LaplaceDist threshold_noise(0.0, 1.0 / spec.epsilon1());
  const double t = static_cast<double>(spec.copies());
  const bool hard = !std::isfinite(spec.epsilon2());
  const LaplaceDist query_noise(0.0,
                                hard ? 1.0 : 1.0 / spec.epsilon2());

  const auto log_weight = [&](int64_t i) {
    Rng trial_rng = trial_base.child(static_cast<uint64_t>(i));
    const double z = threshold_noise.sample(trial_rng);
    if (t == 0.0) return 0.0;
    if (hard) {
      // All Bot targets need z > 0, all Top targets need z <= 1; under D'
      // the swapped conditions are contradictory, so the weight is 0.
      const bool hit = which == WhichDatabase::kD ? (z > 0.0 && z <= 1.0)
                                                  : (z > 1.0 && z <= 0.0);
      return hit ? 0.0 : -kInf;
    }
    return t * LogPairFactor(query_noise, z, which);
  };

  const LogSums sums = blocked_reduce(
      n_trials, kTrialBlockSize, LogSums{},
      [&](int64_t i, LogSums& s) { s.add(log_weight(i)); },
      [](LogSums& into, const LogSums& from) { into.merge(from); }, policy);

  LogMcMoments out;
  out.n_trials = n_trials;
  if (sums.max_w == -kInf) {
    out.log_mean = -kInf;
    out.rel_std_error = 0.0;
    return out;
  }
  const double n = static_cast<double>(n_trials);
  const double log_sum_w = sums.max_w + std::log(sums.sum_w);
  const double log_sum_w2 = sums.max_w2 + std::log(sums.sum_w2);
  out.log_mean = log_sum_w - std::log(n);
  if (n_trials >= 2) {
    // rel_se^2 = (n * sum(w^2)/sum(w)^2 - 1) / (n - 1), exact algebra of the
    // usual sample-variance standard error divided by the mean.
    const double r = std::exp(log_sum_w2 - 2.0 * log_sum_w);
    out.rel_std_error = std::sqrt(std::max(0.0, (n * r - 1.0) / (n - 1.0)));
  }
  return out;
}

}  // namespace internal

AuditResult mc_output_probability(const CounterexampleSpec& spec,
                                  WhichDatabase which, int64_t n_trials,
                                  Rng& rng, ExecPolicy policy) {
  const Rng base = rng.split();
  const internal::LogMcMoments m =
      internal::mc_log_moments(spec, which, n_trials, base, policy);
  const double p = std::exp(m.log_mean);
  AuditResult out;
  out.method = AuditMethod::kMonteCarlo;
  out.prob_d = which == WhichDatabase::kD ? p : kNaN;
  out.prob_dprime = which == WhichDatabase::kDprime ? p : kNaN;
  out.log_ratio = kNaN;
  out.std_error = p * m.rel_std_error;
  out.n_trials = n_trials;
  return out;
}

AuditResult audit_quadrature(const CounterexampleSpec& spec) {
  const double log_d = exact_log_output_probability(spec, WhichDatabase::kD);
  const double log_dprime =
      exact_log_output_probability(spec, WhichDatabase::kDprime);
  AuditResult out;
  out.method = AuditMethod::kQuadrature;
  out.prob_d = std::exp(log_d);
  out.prob_dprime = std::exp(log_dprime);
  out.log_ratio = log_d - log_dprime;
  return out;
}

AuditResult audit_monte_carlo(const CounterexampleSpec& spec, int64_t n_trials,
                              Rng& rng, ExecPolicy policy) {
  const Rng base_d = rng.split();
  const Rng base_dprime = rng.split();
  const internal::LogMcMoments d = internal::mc_log_moments(
      spec, WhichDatabase::kD, n_trials, base_d, policy);
  const internal::LogMcMoments dprime = internal::mc_log_moments(
      spec, WhichDatabase::kDprime, n_trials, base_dprime, policy);
  AuditResult out;
  out.method = AuditMethod::kMonteCarlo;
  out.prob_d = std::exp(d.log_mean);
  out.prob_dprime = std::exp(dprime.log_mean);
  out.log_ratio = d.log_mean - dprime.log_mean;  // -inf - -inf => NaN, as documented
  out.std_error = std::sqrt(d.rel_std_error * d.rel_std_error +
                            dprime.rel_std_error * dprime.rel_std_error);
  out.n_trials = n_trials;
  return out;
}

std::optional<int32_t> min_t_violating(double epsilon_target, double epsilon1,
                                       double epsilon2, int32_t t_max) {
  if (!std::isfinite(epsilon_target) || epsilon_target <= 0.0) {
    throw std::invalid_argument(
        "min_t_violating: epsilon_target must be positive and finite");
  }
  RequireFiniteEpsilon2(epsilon2, "min_t_violating");
  if (t_max < 1) {
    throw std::invalid_argument("min_t_violating: t_max must be >= 1");
  }
  const auto log_ratio = [&](int32_t t) {
    const CounterexampleSpec spec(t, epsilon1, epsilon2);
    return exact_log_output_probability(spec, WhichDatabase::kD) -
           exact_log_output_probability(spec, WhichDatabase::kDprime);
  };
  // Exponential search for the first bracket (lo, hi] with lr(hi) > target,
  // then binary search inside it; lr grows monotonically in t.
  int32_t lo = 0;
  int32_t hi = 1;
  double lr_hi = log_ratio(hi);
  while (lr_hi <= epsilon_target && hi < t_max) {
    lo = hi;
    hi = hi <= t_max / 2 ? 2 * hi : t_max;
    lr_hi = log_ratio(hi);
  }
  if (lr_hi <= epsilon_target) return std::nullopt;
  while (hi - lo > 1) {
    const int32_t mid = lo + (hi - lo) / 2;
    if (log_ratio(mid) > epsilon_target) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace dpaudit
