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

#include <map>
#include <optional>
#include <vector>

#include "hpo/algorithm.hpp"

namespace hpo {

struct PbtOptions {
  std::size_t population_size = 8;
  std::size_t num_generations = 10;
  /// Iterations each member trains per generation (sent as the budget).
  std::int64_t generation_length = 1;
  double truncation = 0.2;
  std::vector<double> perturbation_factors{0.8, 1.2};
  double resample_probability = 0.25;
};

/// Synchronous population based training. A generation is issued only once
/// every member of the previous one is terminal; until then next() waits.
class PopulationBasedTraining final : public Algorithm {
 public:
  struct Member {
    TrialId trial_id = 0;
    Assignment parameters;
    std::optional<TrialId> parent;
    bool exploited = false;
    std::optional<double> objective;  // normalized; empty until completed
    bool terminal = false;
  };

  struct Lineage {
    std::optional<TrialId> parent;
    std::size_t generation = 0;
  };

  explicit PopulationBasedTraining(PbtOptions options);

  Proposal next(const SuggestContext& ctx) override;
  std::string name() const override { return "population_based_training"; }

  /// Multiplies numeric values by a random factor (clamped, rounded) and
  /// resamples each categorical with the configured probability.
  static Assignment explore(const Assignment& base, std::span<const ParameterDef> defs, const PbtOptions& options,
                            Rng& rng);

  const std::vector<std::vector<Member>>& generations() const { return generations_; }
  const std::map<TrialId, Lineage>& lineage() const { return lineage_; }
  /// Trial ids in the top fraction of each completed generation, at the time
  /// the next generation was planned.
  const std::vector<std::vector<TrialId>>& top_sets() const { return top_sets_; }
  std::size_t cutoff() const;

 private:
  void absorb(const SuggestContext& ctx);
  bool plan_next_generation(const SuggestContext& ctx);

  PbtOptions options_;
  std::vector<std::vector<Member>> generations_;
  std::vector<Candidate> plan_;  // candidates for the generation being issued
  std::vector<std::optional<TrialId>> plan_parents_;
  std::vector<bool> plan_exploited_;
  std::map<TrialId, Lineage> lineage_;
  std::map<TrialId, std::pair<std::size_t, std::size_t>> where_;  // trial -> (generation, slot)
  std::vector<std::vector<TrialId>> top_sets_;
  TerminalRowCursor cursor_;
};

}  // namespace hpo
