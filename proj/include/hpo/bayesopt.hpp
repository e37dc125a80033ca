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

#include <optional>
#include <set>
#include <vector>

#include "hpo/algorithm.hpp"
#include "hpo/gp.hpp"

namespace hpo {

struct BayesOptOptions {
  std::optional<std::size_t> max_num_trials;
  /// Completed trials required before the model is used. Zero means
  /// max(3, 2 * encoded width).
  std::size_t num_initial = 0;
  std::size_t num_candidates = 1024;
  std::size_t num_refined = 8;
  int refine_steps = 32;
  std::size_t duplicate_retries = 16;
  GpFitOptions gp;
};

/// Where the last suggestion came from; useful in tests and logs.
enum class BayesOptSource { Initial, Acquisition, FlatFallback, SingularFallback };

/// GP regression on encoded assignments with expected improvement. Only
/// completed trials enter the model; pending ones are ignored.
class BayesianOptimization final : public Algorithm {
 public:
  explicit BayesianOptimization(BayesOptOptions options = {}) : options_(std::move(options)) {}

  Proposal next(const SuggestContext& ctx) override;
  std::string name() const override { return "bayesian_optimization"; }

  std::size_t num_initial(std::span<const ParameterDef> defs) const;
  BayesOptSource last_source() const { return last_source_; }
  /// EI (standardized units) of the last model-based suggestion.
  double last_ei() const { return last_ei_; }

 private:
  void absorb_results(const SuggestContext& ctx);
  std::optional<std::vector<double>> maximize_acquisition(const GpModel& model, const SuggestContext& ctx);
  Assignment fresh_random(const SuggestContext& ctx);

  BayesOptOptions options_;
  TerminalRowCursor cursor_;
  std::vector<std::vector<double>> x_;
  std::vector<double> y_;
  std::set<std::vector<double>> seen_;
  std::size_t count_ = 0;
  BayesOptSource last_source_ = BayesOptSource::Initial;
  double last_ei_ = 0.0;
};

}  // namespace hpo
