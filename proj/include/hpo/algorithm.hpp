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

#include <span>
#include <stdexcept>
#include <string>

#include "hpo/param_space.hpp"
#include "hpo/study.hpp"

namespace hpo {

struct Candidate {
  Assignment parameters;
  Directives directives;
};

enum class ProposalKind { Ready, Wait, Exhausted };

struct Proposal {
  ProposalKind kind = ProposalKind::Exhausted;
  Candidate candidate;

  static Proposal ready(Candidate c) { return {ProposalKind::Ready, std::move(c)}; }
  static Proposal ready(Assignment a) { return {ProposalKind::Ready, {std::move(a), {}}}; }
  static Proposal wait() { return {ProposalKind::Wait, {}}; }
  static Proposal exhausted() { return {ProposalKind::Exhausted, {}}; }
};

/// Everything an algorithm may look at when proposing the next trial.
/// `next_trial_id` is the id the study will assign if the proposal is Ready.
struct SuggestContext {
  std::span<const ParameterDef> defs;
  const ResultsTable& results;
  Rng& rng;
  bool lower_is_better = true;
  TrialId next_trial_id = 1;
};

class AlgorithmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Common contract of every suggestion engine. Implementations are driven by
/// a single owner and may assume they are never called concurrently.
class Algorithm {
 public:
  virtual ~Algorithm() = default;

  virtual Proposal next(const SuggestContext& ctx) = 0;
  virtual std::string name() const = 0;

  /// True when best_result should average repeats of one assignment.
  virtual bool aggregates_repeats() const { return false; }
};

/// Walks the append-only results table and hands back terminal rows not seen
/// before. Algorithms use it to learn about finished trials incrementally.
class TerminalRowCursor {
 public:
  template <class Fn>
  void drain(const ResultsTable& table, Fn&& fn) {
    const auto& rows = table.rows();
    for (; position_ < rows.size(); ++position_) {
      if (rows[position_].terminal()) fn(rows[position_]);
    }
  }

 private:
  std::size_t position_ = 0;
};

/// Objective mapped so that lower is always better.
inline double normalized(double objective, bool lower_is_better) {
  return lower_is_better ? objective : -objective;
}

}  // namespace hpo
