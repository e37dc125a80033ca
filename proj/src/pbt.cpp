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


#include "hpo/pbt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace hpo {

PopulationBasedTraining::PopulationBasedTraining(PbtOptions options) : options_(std::move(options)) {
  if (options_.population_size < 2) throw AlgorithmError("population_size must be at least 2");
  if (options_.num_generations < 1) throw AlgorithmError("num_generations must be at least 1");
  if (options_.generation_length < 1) throw AlgorithmError("generation_length must be at least 1");
  if (!(options_.truncation > 0.0 && options_.truncation <= 0.5)) {
    throw AlgorithmError("truncation must lie in (0, 0.5]");
  }
  if (options_.perturbation_factors.empty()) throw AlgorithmError("perturbation_factors must not be empty");
}

std::size_t PopulationBasedTraining::cutoff() const {
  const auto c = static_cast<std::size_t>(
      std::ceil(static_cast<double>(options_.population_size) * options_.truncation - 1e-12));
  return std::clamp<std::size_t>(c, 1, options_.population_size / 2);
}

Assignment PopulationBasedTraining::explore(const Assignment& base, std::span<const ParameterDef> defs,
                                            const PbtOptions& options, Rng& rng) {
  Assignment out = base;
  std::uniform_int_distribution<std::size_t> pick_factor(0, options.perturbation_factors.size() - 1);
  std::bernoulli_distribution resample(options.resample_probability);
  for (const auto& def : defs) {
    auto& value = out.at(def.name());
    if (def.is_numeric()) {
      const double f = options.perturbation_factors[pick_factor(rng)];
      value = clamp_numeric(def, numeric_value(value) * f);
    } else if (resample(rng)) {
      value = sample(def, rng);
    }
  }
  return out;
}

void PopulationBasedTraining::absorb(const SuggestContext& ctx) {
  cursor_.drain(ctx.results, [&](const ResultRow& row) {
    auto it = where_.find(row.trial_id);
    if (it == where_.end()) return;
    Member& m = generations_[it->second.first][it->second.second];
    m.terminal = true;
    if (row.status == TrialStatus::Completed && row.objective) {
      m.objective = normalized(*row.objective, ctx.lower_is_better);
    }
  });
}

bool PopulationBasedTraining::plan_next_generation(const SuggestContext& ctx) {
  const auto& prev = generations_.back();
  if (!std::all_of(prev.begin(), prev.end(), [](const Member& m) { return m.terminal; })) return false;

  const std::size_t n = prev.size();
  auto score = [&](std::size_t i) {
    return prev[i].objective.value_or(std::numeric_limits<double>::infinity());
  };
  std::vector<std::size_t> rank(n);
  std::iota(rank.begin(), rank.end(), 0);
  std::stable_sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
    return score(a) < score(b) || (score(a) == score(b) && prev[a].trial_id < prev[b].trial_id);
  });

  const std::size_t c = cutoff();
  std::vector<bool> bottom(n, false);
  std::vector<TrialId> top_ids;
  for (std::size_t i = 0; i < c; ++i) {
    top_ids.push_back(prev[rank[i]].trial_id);
    bottom[rank[n - 1 - i]] = true;
  }
  top_sets_.push_back(top_ids);

  plan_.clear();
  plan_parents_.clear();
  plan_exploited_.clear();
  std::uniform_int_distribution<std::size_t> pick_top(0, c - 1);
  for (std::size_t slot = 0; slot < n; ++slot) {
    Candidate cand;
    cand.directives.budget = options_.generation_length;
    if (bottom[slot]) {
      const Member& donor = prev[rank[pick_top(ctx.rng)]];
      cand.parameters = explore(donor.parameters, ctx.defs, options_, ctx.rng);
      cand.directives.load_from = std::to_string(donor.trial_id);
      plan_parents_.push_back(donor.trial_id);
      plan_exploited_.push_back(true);
    } else {
      cand.parameters = prev[slot].parameters;
      cand.directives.load_from = std::to_string(prev[slot].trial_id);
      plan_parents_.push_back(prev[slot].trial_id);
      plan_exploited_.push_back(false);
    }
    plan_.push_back(std::move(cand));
  }
  generations_.emplace_back();
  return true;
}

Proposal PopulationBasedTraining::next(const SuggestContext& ctx) {
  absorb(ctx);

  if (generations_.empty()) {
    plan_.clear();
    plan_parents_.clear();
    plan_exploited_.clear();
    for (std::size_t i = 0; i < options_.population_size; ++i) {
      Candidate cand{sample(ctx.defs, ctx.rng), {}};
      cand.directives.budget = options_.generation_length;
      plan_.push_back(std::move(cand));
      plan_parents_.push_back(std::nullopt);
      plan_exploited_.push_back(false);
    }
    generations_.emplace_back();
  } else if (generations_.back().size() == options_.population_size) {
    if (generations_.size() == options_.num_generations) return Proposal::exhausted();
    if (!plan_next_generation(ctx)) return Proposal::wait();
  }

  const std::size_t g = generations_.size() - 1;
  const std::size_t slot = generations_.back().size();
  Candidate cand = plan_[slot];
  cand.directives.save_to = std::to_string(ctx.next_trial_id);

  Member m;
  m.trial_id = ctx.next_trial_id;
  m.parameters = cand.parameters;
  m.parent = plan_parents_[slot];
  m.exploited = plan_exploited_[slot];
  generations_.back().push_back(m);
  where_[m.trial_id] = {g, slot};
  lineage_[m.trial_id] = {m.parent, g};
  return Proposal::ready(std::move(cand));
}

}  // namespace hpo
