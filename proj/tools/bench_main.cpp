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
//
// Times the serial reference against the parallel execution of the two
// Monte Carlo kernels and checks that both produce bit-identical results
// (the reduction is blocked, so thread count never changes the arithmetic).

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "dpaudit/attack.hpp"
#include "dpaudit/audit.hpp"
#include "dpaudit/datagen.hpp"
#include "dpaudit/parallel.hpp"
#include "dpaudit/rng.hpp"

namespace {

using dpaudit::ExecPolicy;

double Seconds(auto start, auto stop) {
  return std::chrono::duration<double>(stop - start).count();
}

struct Timing {
  double value = 0.0;
  double seconds = 0.0;
};

template <typename F>
Timing TimeRun(F f) {
  const auto start = std::chrono::steady_clock::now();
  const double value = f();
  const auto stop = std::chrono::steady_clock::now();
  return {value, Seconds(start, stop)};
}

void Report(const char* name, const Timing& serial, const Timing& parallel) {
  const bool identical =
      std::memcmp(&serial.value, &parallel.value, sizeof(double)) == 0;
  std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s\n",
              name, serial.seconds, parallel.seconds,
              serial.seconds / parallel.seconds,
              identical ? "bit-identical" : "RESULTS DIFFER");
}

double McProbability(ExecPolicy policy, int64_t n_trials) {
  const dpaudit::CounterexampleSpec spec(8, 0.5, 0.5);
  dpaudit::Rng rng(2026);
  const dpaudit::AuditResult got = dpaudit::mc_output_probability(
      spec, dpaudit::WhichDatabase::kD, n_trials, rng, policy);
  return got.prob_d;
}

double TheoremRate(ExecPolicy policy, int64_t n_trials) {
  const dpaudit::Histogram db = dpaudit::staircase_histogram(30, 50);
  dpaudit::Rng rng(77);
  return dpaudit::reconstruction_theorem_check(db, 30, 1.0, 0.05, n_trials,
                                               rng, policy);
}

}  // namespace

int main(int argc, char** argv) {
  // Optional scale factor to stretch or shrink the run.
  double scale = 1.0;
  if (argc > 1) scale = std::atof(argv[1]);
  if (!(scale > 0.0)) scale = 1.0;

#ifdef _OPENMP
  std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not compiled in; parallel falls back to serial\n");
#endif

  const int64_t mc_trials = static_cast<int64_t>(4000000 * scale);
  const int64_t check_trials = static_cast<int64_t>(4000 * scale);

  Report("mc_output_probability",
         TimeRun([&] { return McProbability(ExecPolicy::kSerial, mc_trials); }),
         TimeRun([&] {
           return McProbability(ExecPolicy::kParallel, mc_trials);
         }));
  Report("reconstruction_check",
         TimeRun([&] { return TheoremRate(ExecPolicy::kSerial, check_trials); }),
         TimeRun([&] {
           return TheoremRate(ExecPolicy::kParallel, check_trials);
         }));
  return 0;
}
