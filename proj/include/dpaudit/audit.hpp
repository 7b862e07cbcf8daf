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

#ifndef DPAUDIT_AUDIT_HPP_
#define DPAUDIT_AUDIT_HPP_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "dpaudit/histogram.hpp"
#include "dpaudit/mechanisms.hpp"
#include "dpaudit/parallel.hpp"
#include "dpaudit/rng.hpp"

namespace dpaudit {

// The worst-case instance for GPTT's privacy claim: two neighboring
// databases and 2t unit-sensitivity queries at threshold 0 such that the
// first t queries answer 0 on D and 1 on D', while the last t queries answer
// 1 on D and 0 on D'. The audited event is the output (Bot x t, Top x t).
//
// Concrete realization over a two-cell domain: D has counts (1, 0), D' has
// counts (0, 0); the first t queries are Diff(cell1, cell0) shifted by +1 and
// the last t are Count(cell0). The constructor checks this realization
// against the intended answer pattern.
class CounterexampleSpec {
 public:
  // copies >= 0; copies == 0 is the degenerate empty-query instance whose
  // output probability is exactly 1, kept as a calibration point.
  // epsilon1 must be positive and finite; epsilon2 positive, possibly +inf.
  CounterexampleSpec(int32_t copies, double epsilon1, double epsilon2);

  static constexpr double kSensitivity = 1.0;
  static constexpr double kThreshold = 0.0;

  int32_t copies() const { return copies_; }
  double epsilon1() const { return epsilon1_; }
  double epsilon2() const { return epsilon2_; }

  // left() is D, right() is D'.
  const NeighborPair& databases() const { return databases_; }
  const std::vector<Query>& queries() const { return queries_; }
  // (Bot x t, Top x t).
  std::vector<Answer> target_output() const;
  GpttParams gptt_params() const;

 private:
  int32_t copies_;
  double epsilon1_;
  double epsilon2_;
  NeighborPair databases_;
  std::vector<Query> queries_;
};

enum class WhichDatabase : uint8_t { kD, kDprime };

enum class AuditMethod : uint8_t { kQuadrature, kMonteCarlo };

// Probability of the audited output vector under one or both databases.
// Producers document which fields they fill; unfilled probabilities are NaN.
struct AuditResult {
  double prob_d = 0.0;
  double prob_dprime = 0.0;
  // ln(prob_d) - ln(prob_dprime), computed in log space so it stays finite
  // when the probabilities themselves underflow.
  double log_ratio = 0.0;
  AuditMethod method = AuditMethod::kQuadrature;
  // Monte Carlo only. For mc_output_probability this is the standard error
  // of the filled probability; for audit_monte_carlo it is the standard
  // error of log_ratio (delta method).
  std::optional<double> std_error;
  std::optional<int64_t> n_trials;
};

// P[output vector | database] by adaptive quadrature of
//   integral of f_eps1(z) * g(z)^t dz
// where g(z) = F_eps2(z) * (1 - F_eps2(z - 1)) for D and the swapped
// g'(z) = F_eps2(z - 1) * (1 - F_eps2(z)) for D'. Accurate to absolute error
// 1e-10 or relative error 1e-8, whichever is looser. Requires finite
// epsilon2 (use exact_output_probability_hard for the infinite case).
double exact_output_probability(const CounterexampleSpec& spec,
                                WhichDatabase which);

// ln of the same integral, evaluated fully in log space; finite even when
// the probability underflows (large t).
double exact_log_output_probability(const CounterexampleSpec& spec,
                                    WhichDatabase which);

// Closed form for the two-query epsilon2 = +inf counterexample:
// (P[noisy threshold in (0, 1]], 0). The second component is exactly zero:
// under D' the target output would need the threshold to be both > 1 and
// <= 0.
std::pair<double, double> exact_output_probability_hard(double epsilon1);

// Pointwise integrand ratio
//   kappa(z) = [F(z)(1 - F(z - 1))] / [F(z - 1)(1 - F(z))]
// with F the cdf of Laplace(0, 1/epsilon2); > 1 for all finite z.
double kappa(double z, double epsilon2);
double log_kappa(double z, double epsilon2);

// Minimum of kappa over [-half_width, half_width] (grid scan plus local
// refinement). Requires half_width > 0.
double kappa_min_interval(double epsilon2, double half_width);

// Half-width |quantile(Laplace(0, 1/epsilon1), alpha/4)| of the threshold
// interval used in the amplification argument; the noisy threshold lands
// inside [-w, w] with probability 1 - alpha/2.
double proof_interval_half_width(double epsilon1, double alpha);

// Lower bound t * ln(kappa_min) - ln 2 on the log-ratio, with kappa_min
// taken over the proof interval for the given alpha. Requires finite
// epsilon2.
double proof_log_ratio_lower_bound(const CounterexampleSpec& spec,
                                   double alpha);

// Rao-Blackwellized Monte Carlo estimate of P[output vector | database]:
// per trial the shared noisy threshold is sampled once and the exact
// conditional probability of the output vector given that threshold is
// accumulated (an indicator when epsilon2 is infinite). Weights are
// accumulated in log space, so estimates of vanishingly small probabilities
// keep their relative precision.
//
// Fills the probability field for `which` (the other is NaN), method,
// std_error (of that probability) and n_trials. Consumes one draw from rng.
AuditResult mc_output_probability(const CounterexampleSpec& spec,
                                  WhichDatabase which, int64_t n_trials,
                                  Rng& rng,
                                  ExecPolicy policy = default_exec_policy());

// Quadrature evaluation of both probabilities plus the log ratio.
AuditResult audit_quadrature(const CounterexampleSpec& spec);

// Monte Carlo evaluation of both probabilities (independent trial streams
// per database) plus the log ratio; std_error is the delta-method standard
// error of log_ratio. n_trials is the per-database trial count.
AuditResult audit_monte_carlo(const CounterexampleSpec& spec,
                              int64_t n_trials, Rng& rng,
                              ExecPolicy policy = default_exec_policy());

// Smallest t <= t_max whose quadrature log-ratio exceeds epsilon_target, or
// nullopt if none does. Exponential search for a bracket, then binary
// search, relying on the monotone growth of the log-ratio in t. Requires
// finite epsilon2.
std::optional<int32_t> min_t_violating(double epsilon_target, double epsilon1,
                                       double epsilon2, int32_t t_max);

namespace internal {

// Log-space first and second moments of the Monte Carlo weights:
// log_mean = ln(mean weight), rel_std_error = std_error / mean (finite even
// when the mean underflows in linear space).
struct LogMcMoments {
  double log_mean = 0.0;
  double rel_std_error = 0.0;
  int64_t n_trials = 0;
};

LogMcMoments mc_log_moments(const CounterexampleSpec& spec,
                            WhichDatabase which, int64_t n_trials,
                            const Rng& trial_base, ExecPolicy policy);

}  // namespace internal

}  // namespace dpaudit

#endif  // DPAUDIT_AUDIT_HPP_
