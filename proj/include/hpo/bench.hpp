// Copyright 2026 The hpo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "hpo/json_codec.hpp"

namespace hpo {

class UnknownSuite : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct BenchOptions {
  std::string suite = "sphere";  // sphere, branin or step-decay-curves
  /// Empty picks the suite default: random_search and bayesian_optimization
  /// for sphere and branin, random_search and asha for step-decay-curves.
  std::vector<std::string> algorithms;
  std::size_t budget = 30;
  std::size_t seeds = 20;
  std::uint64_t base_seed = 0;
  std::size_t dimension = 2;  // sphere only
};

struct BenchSeries {
  std::string algorithm;
  std::vector<double> best;                  // one per seed, lower is better
  std::vector<std::int64_t> iterations;      // step-decay-curves only
};

/// Runs every algorithm on every seed in API mode. Seed i uses study seed
/// base_seed + i for every algorithm, so runs are paired.
std::vector<BenchSeries> run_bench(const BenchOptions& options);

/// JSON report with per-seed values plus median and quartiles. Contains no
/// timings, so equal options give byte-identical reports.
Json bench_report(const BenchOptions& options, const std::vector<BenchSeries>& series);

/// Plain-text summary table.
std::string bench_table(const std::vector<BenchSeries>& series);

/// Linear-interpolation quantile of an unsorted sample; NaN when empty.
double quantile(std::vector<double> values, double q);

}  // namespace hpo
