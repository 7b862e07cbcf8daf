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

#include "dpaudit/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <unordered_set>
#include <vector>

namespace dpaudit {

namespace {

bool ParseInt64(std::string_view text, int64_t& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

}  // namespace

Histogram zipfian_histogram(int32_t domain_size, int64_t total,
                            double exponent, Rng& rng) {
  if (domain_size < 1) {
    throw std::invalid_argument("zipfian_histogram: domain_size must be >= 1");
  }
  if (total < 1) {
    throw std::invalid_argument("zipfian_histogram: total must be >= 1");
  }
  if (!std::isfinite(exponent) || exponent <= 0.0) {
    throw std::invalid_argument("zipfian_histogram: exponent must be positive");
  }
  std::vector<double> cumulative(static_cast<size_t>(domain_size));
  double acc = 0.0;
  for (int32_t r = 0; r < domain_size; ++r) {
    acc += std::pow(static_cast<double>(r) + 1.0, -exponent);
    cumulative[static_cast<size_t>(r)] = acc;
  }
  std::vector<int64_t> counts(static_cast<size_t>(domain_size), 0);
  for (int64_t n = 0; n < total; ++n) {
    const double u = rng.next_uniform() * acc;
    const auto it =
        std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const size_t cell = std::min(
        static_cast<size_t>(it - cumulative.begin()),
        static_cast<size_t>(domain_size) - 1);
    ++counts[cell];
  }
  return Histogram(std::move(counts));
}

Histogram staircase_histogram(int32_t k, int32_t extra_cells) {
  if (k < 1) {
    throw std::invalid_argument("staircase_histogram: k must be >= 1");
  }
  if (extra_cells < 0) {
    throw std::invalid_argument(
        "staircase_histogram: extra_cells must be >= 0");
  }
  std::vector<int64_t> counts;
  counts.reserve(static_cast<size_t>(k) + 1 + static_cast<size_t>(extra_cells));
  for (int32_t i = 0; i <= k; ++i) counts.push_back(i);
  for (int32_t i = 0; i < extra_cells; ++i) counts.push_back(k + 10);
  return Histogram(std::move(counts));
}

DatasetMeta compute_meta(const Histogram& db, const std::string& name) {
  DatasetMeta meta;
  meta.name = name;
  meta.domain_size = db.domain_size();
  meta.scale = db.total();
  std::unordered_set<int64_t> present(db.counts().begin(), db.counts().end());
  int64_t level = 0;
  while (present.contains(level)) ++level;
  meta.support_k = level - 1;
  return meta;
}

void write_histogram_csv(const Histogram& db, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw CsvError(path, 0, "cannot open file for writing");
  }
  out << "index,count\n";
  for (int32_t i = 0; i < db.domain_size(); ++i) {
    out << i << ',' << db.counts()[static_cast<size_t>(i)] << '\n';
  }
  out.flush();
  if (!out.good()) {
    throw CsvError(path, 0, "write failed");
  }
}

std::pair<Histogram, DatasetMeta> read_histogram_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CsvError(path, 0, "cannot open file");
  }
  std::string line;
  int64_t line_no = 0;
  if (!std::getline(in, line)) {
    throw CsvError(path, 1, "no rows");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "index,count") {
    throw CsvError(path, line_no, "expected header 'index,count'");
  }
  std::vector<int64_t> counts;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const size_t comma = line.find(',');
    if (comma == std::string::npos) {
      throw CsvError(path, line_no, "malformed row (missing comma)");
    }
    int64_t index = 0;
    int64_t count = 0;
    if (!ParseInt64(std::string_view(line).substr(0, comma), index) ||
        !ParseInt64(std::string_view(line).substr(comma + 1), count)) {
      throw CsvError(path, line_no, "malformed row");
    }
    if (index != static_cast<int64_t>(counts.size())) {
      throw CsvError(path, line_no,
                     "non-contiguous index (expected " +
                         std::to_string(counts.size()) + ", got " +
                         std::to_string(index) + ")");
    }
    if (count < 0) {
      throw CsvError(path, line_no, "negative count");
    }
    counts.push_back(count);
  }
  if (counts.empty()) {
    throw CsvError(path, line_no, "no rows");
  }

  std::string name = path;
  const size_t slash = name.find_last_of("/\\");
  if (slash != std::string::npos) name = name.substr(slash + 1);
  const size_t dot = name.find_last_of('.');
  if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);

  Histogram db(std::move(counts));
  DatasetMeta meta = compute_meta(db, name);
  return {std::move(db), std::move(meta)};
}

}  // namespace dpaudit
