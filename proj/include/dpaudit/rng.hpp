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

#ifndef DPAUDIT_RNG_HPP_
#define DPAUDIT_RNG_HPP_

#include <cstdint>

namespace dpaudit {

// Counter-based pseudo-random generator (splitmix64 output function).
//
// Every draw is a pure function of (key, counter), which buys two properties
// the experiment code depends on:
//   * replayability: a generator rebuilt from the same seed replays the same
//     stream on every platform, independent of std::* distribution internals;
//   * splittability: child(s) derives a stream that is independent of the
//     parent's draw position, so trial i can use child(i) and produce the
//     same numbers no matter which thread runs it or in which order.
class Rng {
 public:
  explicit Rng(uint64_t seed) : key_(Mix64(seed ^ kSeedSalt)) {}

  uint64_t next_u64() {
    counter_ += 1;
    return Mix64(key_ + counter_ * kGamma);
  }

  // Uniform draw strictly inside (0, 1); both endpoints are unreachable,
  // so log(u) and log1p(-u) are always finite.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Stream derived from (key, stream) only. Draws already taken from this
  // generator do not influence the child, and vice versa.
  Rng child(uint64_t stream) const {
    return Rng(FromKey{}, Mix64(Mix64(key_ ^ kChildSalt) + stream * kGamma));
  }

  // Consumes one draw and returns a generator decoupled from this one.
  // Lets an operation grab a private stream family without constraining
  // how the caller uses the generator afterwards.
  Rng split() { return child(next_u64()); }

  uint64_t key() const { return key_; }

 private:
  struct FromKey {};
  Rng(FromKey, uint64_t key) : key_(key) {}

  static uint64_t Mix64(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }

  static constexpr uint64_t kGamma = 0x9E3779B97F4A7C15ULL;      // 2^64 / phi
  static constexpr uint64_t kSeedSalt = 0x5FB7E02A8D3C4F19ULL;
  static constexpr uint64_t kChildSalt = 0xC2B2AE3D27D4EB4FULL;

  uint64_t key_ = 0;
  uint64_t counter_ = 0;
};

}  // namespace dpaudit

#endif  // DPAUDIT_RNG_HPP_
