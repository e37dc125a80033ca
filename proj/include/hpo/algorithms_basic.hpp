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

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "hpo/algorithm.hpp"

namespace hpo {

/// Independent uniform draws from every range.
class RandomSearch final : public Algorithm {
 public:
  explicit RandomSearch(std::optional<std::size_t> max_num_trials = std::nullopt)
      : max_num_trials_(max_num_trials) {}

  Proposal next(const SuggestContext& ctx) override;
  std::string name() const override { return "random_search"; }

 private:
  std::optional<std::size_t> max_num_trials_;
  std::size_t count_ = 0;
};

class GridTooLarge : public AlgorithmError {
 public:
  using AlgorithmError::AlgorithmError;
};

struct GridSearchOptions {
  /// Points per continuous or discrete axis, endpoints included.
  std::size_t num_grid_points = 2;
  std::map<std::string, std::size_t> per_parameter;
  std::size_t max_grid_size = 1'000'000;
};

/// Full Cartesian product in row-major declaration order (last parameter
/// varies fastest).
class GridSearch final : public Algorithm {
 public:
  explicit GridSearch(GridSearchOptions options = {}) : options_(std::move(options)) {}

  Proposal next(const SuggestContext& ctx) override;
  std::string name() const override { return "grid_search"; }

  /// Values taken along each parameter's axis.
  static std::vector<std::vector<ParameterValue>> axes(std::span<const ParameterDef> defs,
                                                       const GridSearchOptions& options);
  /// Product of axis sizes; throws GridTooLarge past the configured cap.
  static std::size_t grid_size(std::span<const ParameterDef> defs, const GridSearchOptions& options);

 private:
  GridSearchOptions options_;
  std::vector<std::vector<ParameterValue>> axes_;
  std::size_t total_ = 0;
  std::size_t position_ = 0;
  bool built_ = false;
};

struct LocalSearchOptions {
  Assignment seed;
  std::vector<double> perturbation_factors{0.8, 1.2};
  std::optional<std::size_t> max_num_trials;
};

class SeedOutOfRange : public AlgorithmError {
 public:
  using AlgorithmError::AlgorithmError;
};

/// Hill climbing around an incumbent ("seed") assignment: each candidate
/// changes one parameter; a candidate whose final objective strictly beats
/// the seed replaces it. Candidates still running when another one wins are
/// compared against the seed current at the time their result arrives.
class LocalSearch final : public Algorithm {
 public:
  explicit LocalSearch(LocalSearchOptions options);

  Proposal next(const SuggestContext& ctx) override;
  std::string name() const override { return "local_search"; }

  const Assignment& seed() const { return seed_; }
  /// Normalized (lower is better) objective of the seed, once known.
  std::optional<double> seed_objective() const { return seed_objective_; }
  /// Every normalized seed objective in the order they were adopted.
  const std::vector<double>& seed_history() const { return seed_history_; }

  /// One-parameter perturbation of `base`. Exposed for testing.
  static Assignment perturb(const Assignment& base, std::span<const ParameterDef> defs,
                            std::span<const double> factors, Rng& rng);

 private:
  void absorb_results(const SuggestContext& ctx);

  LocalSearchOptions options_;
  Assignment seed_;
  std::optional<double> seed_objective_;
  std::vector<double> seed_history_;
  std::map<TrialId, Assignment> issued_;
  TerminalRowCursor cursor_;
  std::size_t count_ = 0;
  bool validated_ = false;
};

/// Emits every inner suggestion k times back to back; best_result then
/// averages the repeats.
class Repeat final : public Algorithm {
 public:
  Repeat(std::unique_ptr<Algorithm> inner, std::size_t k);

  Proposal next(const SuggestContext& ctx) override;
  std::string name() const override { return "repeat(" + inner_->name() + ")"; }
  bool aggregates_repeats() const override { return true; }

 private:
  std::unique_ptr<Algorithm> inner_;
  std::size_t k_;
  std::deque<Candidate> pending_;
};

}  // namespace hpo
