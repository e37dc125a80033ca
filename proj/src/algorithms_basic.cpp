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

#include "hpo/algorithms_basic.hpp"

#include <cmath>

namespace hpo {

Proposal RandomSearch::next(const SuggestContext& ctx) {
  if (max_num_trials_ && count_ >= *max_num_trials_) return Proposal::exhausted();
  ++count_;
  return Proposal::ready(sample(ctx.defs, ctx.rng));
}

// ---------------------------------------------------------------------------
// GridSearch

std::vector<std::vector<ParameterValue>> GridSearch::axes(std::span<const ParameterDef> defs,
                                                          const GridSearchOptions& options) {
  std::vector<std::vector<ParameterValue>> out;
  for (const auto& def : defs) {
    std::size_t points = options.num_grid_points;
    if (auto it = options.per_parameter.find(def.name()); it != options.per_parameter.end()) points = it->second;
    if (def.is_numeric() && points < 2) {
      throw AlgorithmError("grid for '" + def.name() + "' needs at least 2 points");
    }

    std::vector<ParameterValue> axis;
    switch (def.kind()) {
      case ParamKind::Continuous:
        for (std::size_t i = 0; i < points; ++i) {
          const double t = static_cast<double>(i) / static_cast<double>(points - 1);
          axis.emplace_back(i + 1 == points ? def.hi() : def.lo() + t * (def.hi() - def.lo()));
        }
        break;
      case ParamKind::ContinuousLog: {
        const double llo = std::log10(def.lo());
        const double lhi = std::log10(def.hi());
        for (std::size_t i = 0; i < points; ++i) {
          const double t = static_cast<double>(i) / static_cast<double>(points - 1);
          const double v = i == 0 ? def.lo() : i + 1 == points ? def.hi() : std::pow(10.0, llo + t * (lhi - llo));
          axis.emplace_back(v);
        }
        break;
      }
      case ParamKind::Discrete: {
        const auto span = def.int_hi() - def.int_lo();
        const auto m = std::min<std::size_t>(points, static_cast<std::size_t>(span) + 1);
        for (std::size_t i = 0; i < m; ++i) {
          const double step = static_cast<double>(i) * static_cast<double>(span) / static_cast<double>(m - 1);
          axis.emplace_back(def.int_lo() + static_cast<std::int64_t>(std::llround(step)));
        }
        break;
      }
      case ParamKind::Choice:
      case ParamKind::Ordinal:
        for (const auto& c : def.categories()) axis.emplace_back(c);
        break;
    }
    out.push_back(std::move(axis));
  }
  return out;
}

std::size_t GridSearch::grid_size(std::span<const ParameterDef> defs, const GridSearchOptions& options) {
  std::size_t total = 1;
  for (const auto& axis : axes(defs, options)) {
    if (axis.size() > options.max_grid_size || total > options.max_grid_size / axis.size()) {
      throw GridTooLarge("grid exceeds " + std::to_string(options.max_grid_size) + " points");
    }
    total *= axis.size();
  }
  return total;
}

Proposal GridSearch::next(const SuggestContext& ctx) {
  if (!built_) {
    total_ = grid_size(ctx.defs, options_);
    axes_ = axes(ctx.defs, options_);
    built_ = true;
  }
  if (position_ >= total_) return Proposal::exhausted();

  Assignment a;
  std::size_t rest = position_++;
  for (std::size_t p = axes_.size(); p-- > 0;) {
    const auto& axis = axes_[p];
    a.emplace(ctx.defs[p].name(), axis[rest % axis.size()]);
    rest /= axis.size();
  }
  return Proposal::ready(std::move(a));
}

// ---------------------------------------------------------------------------
// LocalSearch

LocalSearch::LocalSearch(LocalSearchOptions options) : options_(std::move(options)), seed_(options_.seed) {
  if (options_.perturbation_factors.empty()) throw AlgorithmError("perturbation_factors must be non-empty");
}

Assignment LocalSearch::perturb(const Assignment& base, std::span<const ParameterDef> defs,
                                std::span<const double> factors, Rng& rng) {
  Assignment out = base;
  const auto& def = defs[std::uniform_int_distribution<std::size_t>(0, defs.size() - 1)(rng)];
  ParameterValue& value = out.at(def.name());
  switch (def.kind()) {
    case ParamKind::Continuous:
    case ParamKind::ContinuousLog:
    case ParamKind::Discrete: {
      const double factor = factors[std::uniform_int_distribution<std::size_t>(0, factors.size() - 1)(rng)];
      value = clamp_numeric(def, numeric_value(value) * factor);
      break;
    }
    case ParamKind::Choice: {
      const auto& cats = def.categories();
      const auto current = def.category_index(std::get<Category>(value));
      if (cats.size() > 1) {
        auto pick = std::uniform_int_distribution<std::size_t>(0, cats.size() - 2)(rng);
        if (static_cast<std::ptrdiff_t>(pick) >= current) ++pick;
        value = cats[pick];
      }
      break;
    }
    case ParamKind::Ordinal: {
      const auto& cats = def.categories();
      const auto current = def.category_index(std::get<Category>(value));
      const bool up = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
      const auto moved = std::clamp<std::ptrdiff_t>(current + (up ? 1 : -1), 0,
                                                    static_cast<std::ptrdiff_t>(cats.size()) - 1);
      value = cats[static_cast<std::size_t>(moved)];
      break;
    }
  }
  return out;
}

void LocalSearch::absorb_results(const SuggestContext& ctx) {
  cursor_.drain(ctx.results, [&](const ResultRow& row) {
    auto it = issued_.find(row.trial_id);
    if (it == issued_.end() || row.status != TrialStatus::Completed || !row.objective) return;
    const double score = normalized(*row.objective, ctx.lower_is_better);
    if (!seed_objective_ || score < *seed_objective_) {
      seed_ = it->second;
      seed_objective_ = score;
      seed_history_.push_back(score);
    }
  });
}

Proposal LocalSearch::next(const SuggestContext& ctx) {
  if (!validated_) {
    try {
      validate_assignment(seed_, ctx.defs);
    } catch (const SpaceError& e) {
      throw SeedOutOfRange(std::string("local search seed: ") + e.what());
    }
    validated_ = true;
  }
  absorb_results(ctx);
  if (options_.max_num_trials && count_ >= *options_.max_num_trials) return Proposal::exhausted();

  Assignment candidate =
      count_ == 0 ? seed_ : perturb(seed_, ctx.defs, options_.perturbation_factors, ctx.rng);
  ++count_;
  issued_.emplace(ctx.next_trial_id, candidate);
  return Proposal::ready(std::move(candidate));
}

// ---------------------------------------------------------------------------
// Repeat

Repeat::Repeat(std::unique_ptr<Algorithm> inner, std::size_t k) : inner_(std::move(inner)), k_(k) {
  if (!inner_) throw AlgorithmError("repeat needs an inner algorithm");
  if (k_ < 1) throw AlgorithmError("repeat count must be at least 1");
}

Proposal Repeat::next(const SuggestContext& ctx) {
  if (pending_.empty()) {
    Proposal inner = inner_->next(ctx);
    if (inner.kind != ProposalKind::Ready) return inner;
    for (std::size_t i = 0; i < k_; ++i) pending_.push_back(inner.candidate);
  }
  Candidate c = std::move(pending_.front());
  pending_.pop_front();
  return Proposal::ready(std::move(c));
}

}  // namespace hpo
