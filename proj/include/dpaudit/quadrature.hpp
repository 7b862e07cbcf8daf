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

#ifndef DPAUDIT_QUADRATURE_HPP_
#define DPAUDIT_QUADRATURE_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace dpaudit {

// log(exp(x) + exp(y)) without overflow; either argument may be -inf.
inline double log_sum_exp(double x, double y) {
  if (x == -std::numeric_limits<double>::infinity()) return y;
  if (y == -std::numeric_limits<double>::infinity()) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(std::min(x, y) - m));
}

struct QuadratureControl {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  // Bisection depth per segment; 2^48 subintervals is far past the point
  // where interval widths hit the double grid, so hitting this cap means
  // the integrand is broken, not the tolerance.
  int max_depth = 48;
};

namespace quad_internal {

template <typename F>
double SimpsonRecurse(const F& f, double a, double fa, double m, double fm,
                      double b, double fb, double whole, double abs_tol,
                      double rel_tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double sum = left + right;
  const double err = (sum - whole) / 15.0;
  if (depth <= 0 ||
      std::abs(err) <= std::max(abs_tol, rel_tol * std::abs(sum))) {
    return sum + err;  // Richardson extrapolation term
  }
  return SimpsonRecurse(f, a, fa, lm, flm, m, fm, left, 0.5 * abs_tol, rel_tol,
                        depth - 1) +
         SimpsonRecurse(f, m, fm, rm, frm, b, fb, right, 0.5 * abs_tol,
                        rel_tol, depth - 1);
}

template <typename F>
double IntegrateSegment(const F& f, double a, double b,
                        const QuadratureControl& ctrl) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return SimpsonRecurse(f, a, fa, m, fm, b, fb, whole, ctrl.abs_tol,
                        ctrl.rel_tol, ctrl.max_depth);
}

// Log-space three-point Simpson estimate: log((h/6)(e^la + 4 e^lm + e^lb)).
inline double LogSimpson(double h, double la, double lm, double lb) {
  const double body =
      log_sum_exp(log_sum_exp(la, std::log(4.0) + lm), lb);
  if (body == -std::numeric_limits<double>::infinity()) return body;
  return std::log(h / 6.0) + body;
}

template <typename F>
double LogSimpsonRecurse(const F& log_f, double a, double la, double m,
                         double lm, double b, double lb, double whole,
                         double rel_tol, int depth) {
  const double lmid = 0.5 * (a + m);
  const double rmid = 0.5 * (m + b);
  const double llm = log_f(lmid);
  const double lrm = log_f(rmid);
  const double left = LogSimpson(m - a, la, llm, lm);
  const double right = LogSimpson(b - m, lm, lrm, lb);
  const double sum = log_sum_exp(left, right);
  const double inf = std::numeric_limits<double>::infinity();
  if (sum == -inf && whole == -inf) return -inf;
  if (depth <= 0 || std::abs(std::expm1(whole - sum)) <= rel_tol) {
    return sum;
  }
  return log_sum_exp(
      LogSimpsonRecurse(log_f, a, la, lmid, llm, m, lm, left, rel_tol,
                        depth - 1),
      LogSimpsonRecurse(log_f, m, lm, rmid, lrm, b, lb, right, rel_tol,
                        depth - 1));
}

template <typename F>
double LogIntegrateSegment(const F& log_f, double a, double b, double rel_tol,
                           int max_depth) {
  const double m = 0.5 * (a + b);
  const double la = log_f(a);
  const double lm = log_f(m);
  const double lb = log_f(b);
  const double whole = LogSimpson(b - a, la, lm, lb);
  return LogSimpsonRecurse(log_f, a, la, m, lm, b, lb, whole, rel_tol,
                           max_depth);
}

inline std::vector<double> SegmentEdges(double a, double b,
                                        std::span<const double> breakpoints) {
  if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b)) {
    throw std::invalid_argument("integrate: requires finite bounds with a < b");
  }
  std::vector<double> edges;
  edges.reserve(breakpoints.size() + 2);
  edges.push_back(a);
  for (double x : breakpoints) {
    if (x > a && x < b) edges.push_back(x);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace quad_internal

// Adaptive Simpson integral of f over [a, b]. Interior breakpoints force
// segment boundaries; placing integrand kinks there keeps each segment
// smooth, which is what the error estimate assumes. A segment is accepted
// once its Richardson error estimate drops below
// max(abs_tol / n_segments, rel_tol * |segment|).
template <typename F>
double integrate(const F& f, double a, double b,
                 std::span<const double> breakpoints = {},
                 const QuadratureControl& ctrl = {}) {
  const std::vector<double> edges = quad_internal::SegmentEdges(a, b, breakpoints);
  QuadratureControl per_segment = ctrl;
  per_segment.abs_tol = ctrl.abs_tol / static_cast<double>(edges.size() - 1);
  double total = 0.0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    total += quad_internal::IntegrateSegment(f, edges[i], edges[i + 1],
                                             per_segment);
  }
  return total;
}

// Log-space adaptive Simpson: returns log of the integral of exp(log_f)
// over [a, b]. All sums run through log_sum_exp, so integrals far below
// the smallest positive double still come back as finite logs. Only a
// relative tolerance is meaningful in log space.
template <typename F>
double log_integrate(const F& log_f, double a, double b,
                     std::span<const double> breakpoints = {},
                     double rel_tol = 1e-9, int max_depth = 48) {
  const std::vector<double> edges = quad_internal::SegmentEdges(a, b, breakpoints);
  double total = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    total = log_sum_exp(total, quad_internal::LogIntegrateSegment(
                                   log_f, edges[i], edges[i + 1], rel_tol,
                                   max_depth));
  }
  return total;
}

}  // namespace dpaudit

#endif  // DPAUDIT_QUADRATURE_HPP_
