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


#include "hpo/asha.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace hpo {

Asha::Asha(AshaOptions options) : options_(options) {
  if (options_.min_budget < 1 || options_.max_budget < options_.min_budget) {
    throw AlgorithmError("asha needs 1 <= min_budget <= max_budget");
  }
  if (options_.eta < 2) throw AlgorithmError("asha needs eta >= 2");
  if (options_.min_rung < 0) throw AlgorithmError("asha needs min_rung >= 0");

  // Budgets r * eta^(k + s) up to R.
  std::int64_t b = options_.min_budget;
  for (std::int64_t i = 0; i < options_.min_rung; ++i) b *= options_.eta;
  for (; b <= options_.max_budget; b *= options_.eta) budgets_.push_back(b);
  if (budgets_.empty()) throw AlgorithmError("asha min_rung leaves no rung at or below max_budget");
  rungs_.resize(budgets_.size());
}

std::size_t Asha::rung_of(std::int64_t budget) const {
  auto it = std::find(budgets_.begin(), budgets_.end(), budget);
  if (it == budgets_.end()) throw UnknownRung("budget " + std::to_string(budget) + " is not a rung budget");
  return static_cast<std::size_t>(it - budgets_.begin());
}

void Asha::record(TrialId trial, std::int64_t budget, double objective, const Assignment& parameters) {
  const std::size_t k = rung_of(budget);
  if (recorded_.count(trial)) return;
  recorded_.emplace(trial, k);
  rungs_[k].push_back({trial, objective, false, parameters});
}

std::optional<Proposal> Asha::promotion(const SuggestContext& ctx) {
  for (std::size_t k = rungs_.size() - 1; k-- > 0;) {
    auto& rung = rungs_[k];
    const std::size_t quota = rung.size() / static_cast<std::size_t>(options_.eta);
    if (quota == 0) continue;
    std::vector<std::size_t> order(rung.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return rung[a].objective < rung[b].objective ||
             (rung[a].objective == rung[b].objective && rung[a].trial_id < rung[b].trial_id);
    });
    for (std::size_t i = 0; i < quota; ++i) {
      Entry& e = rung[order[i]];
      if (e.promoted) continue;
      e.promoted = true;
      Directives dir;
      dir.load_from = std::to_string(e.trial_id);
      dir.save_to = std::to_string(ctx.next_trial_id);
      dir.budget = budgets_[k + 1];
      return Proposal::ready(Candidate{e.parameters, dir});
    }
  }
  return std::nullopt;
}

Proposal Asha::next(const SuggestContext& ctx) {
  cursor_.drain(ctx.results, [&](const ResultRow& row) {
    ++finished_;
    if (row.status != TrialStatus::Completed || !row.objective || !row.directives.budget) return;
    record(row.trial_id, *row.directives.budget, normalized(*row.objective, ctx.lower_is_better), row.parameters);
  });

  if (auto p = promotion(ctx)) {
    ++issued_;
    return *p;
  }
  if (!options_.max_num_trials || fresh_ < *options_.max_num_trials) {
    ++fresh_;
    ++issued_;
    Directives dir;
    dir.save_to = std::to_string(ctx.next_trial_id);
    dir.budget = budgets_.front();
    return Proposal::ready(Candidate{sample(ctx.defs, ctx.rng), dir});
  }
  // Out of fresh configurations; a pending trial may still unlock a promotion.
  return finished_ < issued_ ? Proposal::wait() : Proposal::exhausted();
}

}  // namespace hpo
