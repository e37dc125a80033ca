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

class UnknownRung : public AlgorithmError {
 public:
  using AlgorithmError::AlgorithmError;
};

struct AshaOptions {
  std::int64_t min_budget = 1;   // r
  std::int64_t max_budget = 9;   // R
  std::int64_t eta = 3;
  std::int64_t min_rung = 0;     // s
  std::optional<std::size_t> max_num_trials;
};

/// Asynchronous successive halving. Each suggestion is either a promotion of
/// a rung leader to the next budget (resuming from its checkpoint) or a fresh
/// random configuration at the bottom budget.
class Asha final : public Algorithm {
 public:
  struct Entry {
    TrialId trial_id = 0;
    double objective = 0.0;  // normalized, lower is better
    bool promoted = false;
    Assignment parameters;
  };

  explicit Asha(AshaOptions options);

  Proposal next(const SuggestContext& ctx) override;
  std::string name() const override { return "asha"; }

  std::size_t num_rungs() const { return budgets_.size(); }
  std::int64_t rung_budget(std::size_t k) const { return budgets_.at(k); }
  /// Rung index for a budget; throws UnknownRung when it is not on the ladder.
  std::size_t rung_of(std::int64_t budget) const;

  /// Records a trial's normalized objective at the rung of `budget`. Calling
  /// it again for the same trial leaves the rung unchanged.
  void record(TrialId trial, std::int64_t budget, double objective, const Assignment& parameters);

  const std::vector<std::vector<Entry>>& rungs() const { return rungs_; }
  std::size_t fresh_issued() const { return fresh_; }

 private:
  std::optional<Proposal> promotion(const SuggestContext& ctx);

  AshaOptions options_;
  std::vector<std::int64_t> budgets_;
  std::vector<std::vector<Entry>> rungs_;
  std::map<TrialId, std::size_t> recorded_;
  TerminalRowCursor cursor_;
  std::size_t fresh_ = 0;
  std::size_t issued_ = 0;
  std::size_t finished_ = 0;
};

}  // namespace hpo
