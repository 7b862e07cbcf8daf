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

#include "dpaudit/laplace.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dpaudit {

namespace {
constexpr double kLogHalf = -0.69314718055994530942;  // log(1/2)
}  // namespace

LaplaceDist::LaplaceDist(double location, double scale)
    : location_(location), scale_(scale) {
  if (!std::isfinite(location)) {
    throw std::invalid_argument("LaplaceDist: location must be finite, got " +
                                std::to_string(location));
  }
  if (!std::isfinite(scale) || scale <= 0.0) {
    throw std::invalid_argument("LaplaceDist: scale must be finite and > 0, got " +
                                std::to_string(scale));
  }
}

double LaplaceDist::pdf(double x) const {
  return std::exp(-std::abs(x - location_) / scale_) / (2.0 * scale_);
}

double LaplaceDist::log_pdf(double x) const {
  return -std::abs(x - location_) / scale_ - std::log(2.0 * scale_);
}

double LaplaceDist::cdf(double x) const {
  const double z = (x - location_) / scale_;
  return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

double LaplaceDist::sf(double x) const {
  const double z = (x - location_) / scale_;
  return z < 0.0 ? 1.0 - 0.5 * std::exp(z) : 0.5 * std::exp(-z);
}

double LaplaceDist::log_cdf(double x) const {
  const double z = (x - location_) / scale_;
  return z < 0.0 ? kLogHalf + z : std::log1p(-0.5 * std::exp(-z));
}

double LaplaceDist::log_sf(double x) const {
  const double z = (x - location_) / scale_;
  return z < 0.0 ? std::log1p(-0.5 * std::exp(z)) : kLogHalf - z;
}

double LaplaceDist::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("LaplaceDist::quantile: p must lie in (0, 1), got " +
                                std::to_string(p));
  }
  // Branch on the median so each side uses a log of a quantity near its
  // natural scale; no cancellation for p close to 0 or 1.
  return p < 0.5 ? location_ + scale_ * std::log(2.0 * p)
                 : location_ - scale_ * std::log(2.0 * (1.0 - p));
}

}  // namespace dpaudit
