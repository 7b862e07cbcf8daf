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

#ifndef DPAUDIT_DATAGEN_HPP_
#define DPAUDIT_DATAGEN_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "dpaudit/histogram.hpp"
#include "dpaudit/rng.hpp"

namespace dpaudit {

struct DatasetMeta {
  std::string name;
  int32_t domain_size = 0;
  // Total number of entries (sum of counts).
  int64_t scale = 0;
  // Largest k such that every level set S_0..S_k is non-empty; -1 when no
  // cell has count 0.
  int64_t support_k = 0;
};

// Raised by histogram CSV ingestion; line is 1-based, 0 when the failure is
// not tied to a line (e.g. the file cannot be opened).
class CsvError : public std::runtime_error {
 public:
  CsvError(const std::string& path, int64_t line, const std::string& message)
      : std::runtime_error(path + ":" + std::to_string(line) + ": " + message),
        line_(line) {}

  int64_t line() const { return line_; }

 private:
  int64_t line_;
};

// `total` i.i.d. draws from the Zipf law P(cell r) proportional to
// (r+1)^{-exponent}, accumulated into a histogram. Inverse-cdf over the
// normalized finite-domain weights: exact, no rejection, one uniform draw
// per entry, so a fixed seed reproduces the histogram bit for bit.
Histogram zipfian_histogram(int32_t domain_size, int64_t total,
                            double exponent, Rng& rng);

// Deterministic histogram with exactly one cell of count i for each
// i in [0, k], followed by extra_cells cells of count k + 10 (padding far
// above the attacked range).
Histogram staircase_histogram(int32_t k, int32_t extra_cells);

DatasetMeta compute_meta(const Histogram& db, const std::string& name);

// CSV format: header line "index,count", then one row per cell with
// zero-based contiguous indices and non-negative integer counts. Written
// files use LF line endings; CRLF is accepted on read.
void write_histogram_csv(const Histogram& db, const std::string& path);
std::pair<Histogram, DatasetMeta> read_histogram_csv(const std::string& path);

}  // namespace dpaudit

#endif  // DPAUDIT_DATAGEN_HPP_
