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

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpo/param_space.hpp"

namespace hpo {

using TrialId = std::int64_t;
using Context = std::map<std::string, double>;

enum class TrialStatus { Issued, Running, Completed, Failed, Stopped };

const char* to_string(TrialStatus status);
TrialStatus trial_status_from_string(const std::string& text);
inline bool is_terminal(TrialStatus s) {
  return s == TrialStatus::Completed || s == TrialStatus::Failed || s == TrialStatus::Stopped;
}

/// Algorithm-reserved instructions for the worker. They travel next to the
/// user parameters but never mix with them.
struct Directives {
  std::optional<std::string> load_from;
  std::optional<std::string> save_to;
  std::optional<std::int64_t> budget;

  bool empty() const { return !load_from && !save_to && !budget; }
  friend bool operator==(const Directives&, const Directives&) = default;
};

struct Trial {
  TrialId id = 0;
  Assignment parameters;
  Directives directives;
  TrialStatus status = TrialStatus::Issued;
};

struct Observation {
  TrialId trial_id = 0;
  std::int64_t iteration = 0;
  double objective = 0.0;
  Context context;
};

/// One row of the results table. Intermediate rows carry status Running;
/// a terminal row carries the trial's terminal status.
struct ResultRow {
  TrialId trial_id = 0;
  Assignment parameters;
  Directives directives;
  TrialStatus status = TrialStatus::Running;
  std::int64_t iteration = 0;
  std::optional<double> objective;
  Context context;

  bool terminal() const { return is_terminal(status); }
  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

class ResultsTable {
 public:
  void append(ResultRow row);
  const std::vector<ResultRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  std::size_t terminal_count() const { return terminal_count_; }

 private:
  std::vector<ResultRow> rows_;
  std::size_t terminal_count_ = 0;
};

enum class StudyErrorCode {
  UnknownTrial,
  TrialAlreadyFinalized,
  DoubleFinalize,
  AlgorithmFailure,
};

class StudyError : public std::runtime_error {
 public:
  StudyError(StudyErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  StudyErrorCode code() const { return code_; }

 private:
  StudyErrorCode code_;
};

enum class ObservationOutcome {
  Accepted,
  /// Stored, but its iteration is lower than an earlier one for the trial.
  AcceptedNonMonotonic,
  /// Non-finite objective; nothing was stored.
  Rejected,
};

struct BestResult {
  TrialId trial_id = 0;
  Assignment parameters;
  double objective = 0.0;
};

class Algorithm;

struct StudyConfig {
  std::vector<ParameterDef> parameters;
  bool lower_is_better = true;
  std::uint64_t seed = 0;
};

enum class SuggestKind { Trial, Wait, Done };

struct SuggestResult {
  SuggestKind kind = SuggestKind::Done;
  Trial trial;
};

/// Single-owner state machine binding a parameter space, an algorithm and
/// the results table. Not thread-safe; callers serialize access.
class Study {
 public:
  Study(StudyConfig config, std::unique_ptr<Algorithm> algorithm);
  ~Study();
  Study(Study&&) noexcept;
  Study& operator=(Study&&) noexcept;

  /// Rebuilds a study from an exported table without an algorithm.
  static Study replay(StudyConfig config, const ResultsTable& table, bool aggregate_repeats = false);

  /// Three-way suggestion: a new trial, a request to come back after pending
  /// trials finish, or exhaustion.
  SuggestResult suggest();

  /// API-mode helper; nullopt when no trial can be issued right now.
  std::optional<Trial> get_suggestion();

  ObservationOutcome add_observation(TrialId id, std::int64_t iteration, double objective,
                                     const Context& context = {});

  /// Completed with the highest-iteration objective, or Failed when the
  /// trial never produced a valid observation.
  TrialStatus finalize(TrialId id);

  /// Terminal Stopped; recorded observations stay in the table.
  void stop(TrialId id);

  /// Issued -> Running. No-op for a trial that is already running.
  void mark_running(TrialId id);

  /// Registers a trial with a fixed id, bypassing the algorithm.
  const Trial& adopt(TrialId id, Assignment parameters, Directives directives = {});

  std::optional<BestResult> best_result() const;

  const StudyConfig& config() const { return config_; }
  const ResultsTable& results() const { return results_; }
  const Trial& trial(TrialId id) const;
  bool has_trial(TrialId id) const { return records_.count(id) != 0; }
  std::vector<Trial> trials() const;
  const std::vector<Observation>& observations(TrialId id) const;
  std::optional<double> final_objective(TrialId id) const;
  bool nonmonotonic(TrialId id) const;
  std::size_t finalized_count() const { return finalized_; }
  bool aggregates_repeats() const { return aggregate_repeats_; }
  const Algorithm* algorithm() const { return algorithm_.get(); }

  /// Range-for support: yields trials until get_suggestion() is empty.
  class Iterator;
  Iterator begin();
  Iterator end();

 private:
  struct Record {
    Trial trial;
    std::vector<Observation> observations;
    std::optional<double> final_objective;
    bool nonmonotonic = false;
  };

  Record& record(TrialId id);
  const Record& record(TrialId id) const;
  void write_terminal(Record& rec, TrialStatus status);

  StudyConfig config_;
  std::unique_ptr<Algorithm> algorithm_;
  Rng rng_;
  ResultsTable results_;
  std::map<TrialId, Record> records_;
  TrialId next_id_ = 1;
  std::size_t finalized_ = 0;
  bool aggregate_repeats_ = false;
};

class Study::Iterator {
 public:
  Iterator() = default;
  explicit Iterator(Study* study) : study_(study) { advance(); }

  const Trial& operator*() const { return current_; }
  const Trial* operator->() const { return &current_; }
  Iterator& operator++() {
    advance();
    return *this;
  }
  bool operator==(const Iterator& other) const { return study_ == other.study_; }

 private:
  void advance() {
    auto next = study_->get_suggestion();
    if (next) {
      current_ = std::move(*next);
    } else {
      study_ = nullptr;
    }
  }

  Study* study_ = nullptr;
  Trial current_;
};

}  // namespace hpo
