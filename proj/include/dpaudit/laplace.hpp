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

#ifndef DPAUDIT_LAPLACE_HPP_
#define DPAUDIT_LAPLACE_HPP_

#include "dpaudit/rng.hpp"

namespace dpaudit {

// Laplace distribution with density exp(-|x - location| / scale) / (2 scale).
//
// The log-space accessors (log_pdf, log_cdf, log_sf) stay finite far into the
// tails; the audit integrands multiply hundreds of tail factors together and
// would underflow to zero in linear space.
class LaplaceDist {
 public:
  // Requires a finite location and a finite scale > 0.
  LaplaceDist(double location, double scale);

  double location() const { return location_; }
  double scale() const { return scale_; }

  double pdf(double x) const;
  double log_pdf(double x) const;

  double cdf(double x) const;
  double log_cdf(double x) const;

  // Survival function P(X > x); computed directly so the upper tail keeps
  // full relative precision instead of cancelling inside 1 - cdf(x).
  double sf(double x) const;
  double log_sf(double x) const;

  // Inverse cdf. Requires p strictly inside (0, 1).
  double quantile(double p) const;

  // Inverse-cdf sampling. One uniform draw per sample, so sample streams
  // are reproducible from the generator state alone.
  double sample(Rng& rng) const { return quantile(rng.next_uniform()); }

 private:
  double location_;
  double scale_;
};

}  // namespace dpaudit

#endif  // DPAUDIT_LAPLACE_HPP_
