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

#include "hpo/study.hpp"

#include <algorithm>
#include <cmath>

#include "hpo/algorithm.hpp"

namespace hpo {

const char* to_string(TrialStatus status) {
  switch (status) {
    case TrialStatus::Issued:
      return "ISSUED";
    case TrialStatus::Running:
      return "RUNNING";
    case TrialStatus::Completed:
      return "COMPLETED";
    case TrialStatus::Failed:
      return "FAILED";
    case TrialStatus::Stopped:
      return "STOPPED";
  }
  return "UNKNOWN";
}

TrialStatus trial_status_from_string(const std::string& text) {
  if (text == "ISSUED") return TrialStatus::Issued;
  if (text == "RUNNING" || text == "INTERMEDIATE") return TrialStatus::Running;
  if (text == "COMPLETED") return TrialStatus::Completed;
  if (text == "FAILED") return TrialStatus::Failed;
  if (text == "STOPPED") return TrialStatus::Stopped;
  throw std::invalid_argument("unknown trial status '" + text + "'");
}

void ResultsTable::append(ResultRow row) {
  if (row.terminal()) ++terminal_count_;
  rows_.push_back(std::move(row));
}

namespace {

Rng seeded_stream(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

}  // namespace

Study::Study(StudyConfig config, std::unique_ptr<Algorithm> algorithm)
    : config_(std::move(config)), algorithm_(std::move(algorithm)), rng_(seeded_stream(config_.seed)) {
  validate_space(config_.parameters);
  aggregate_repeats_ = algorithm_ && algorithm_->aggregates_repeats();
}

Study::~Study() = default;
Study::Study(Study&&) noexcept = default;
Study& Study::operator=(Study&&) noexcept = default;

Study Study::replay(StudyConfig config, const ResultsTable& table, bool aggregate_repeats) {
  Study study(std::move(config), nullptr);
  study.aggregate_repeats_ = aggregate_repeats;
  for (const auto& row : table.rows()) {
    if (!study.has_trial(row.trial_id)) study.adopt(row.trial_id, row.parameters, row.directives);
    switch (row.status) {
      case TrialStatus::Issued:
        break;
      case TrialStatus::Running:
        study.add_observation(row.trial_id, row.iteration, *row.objective, row.context);
        break;
      case TrialStatus::Completed:
      case TrialStatus::Failed:
        study.finalize(row.trial_id);
        break;
      case TrialStatus::Stopped:
        study.stop(row.trial_id);
        break;
    }
  }
  return study;
}

SuggestResult Study::suggest() {
  if (!algorithm_) return {SuggestKind::Done, {}};
  SuggestContext ctx{config_.parameters, results_, rng_, config_.lower_is_better, next_id_};
  Proposal proposal;
  try {
    proposal = algorithm_->next(ctx);
    if (proposal.kind == ProposalKind::Ready) {
      validate_assignment(proposal.candidate.parameters, config_.parameters);
    }
  } catch (const std::exception& e) {
    throw StudyError(StudyErrorCode::AlgorithmFailure,
                     algorithm_->name() + " failed to propose a trial: " + e.what());
  }
  switch (proposal.kind) {
    case ProposalKind::Wait:
      return {SuggestKind::Wait, {}};
    case ProposalKind::Exhausted:
      return {SuggestKind::Done, {}};
    case ProposalKind::Ready:
      break;
  }
  Trial trial{next_id_++, std::move(proposal.candidate.parameters),
              std::move(proposal.candidate.directives), TrialStatus::Issued};
  records_.emplace(trial.id, Record{trial, {}, std::nullopt, false});
  return {SuggestKind::Trial, std::move(trial)};
}

std::optional<Trial> Study::get_suggestion() {
  auto result = suggest();
  if (result.kind != SuggestKind::Trial) return std::nullopt;
  return std::move(result.trial);
}

const Trial& Study::adopt(TrialId id, Assignment parameters, Directives directives) {
  if (id <= 0 || records_.count(id) != 0) {
    throw StudyError(StudyErrorCode::UnknownTrial, "cannot adopt trial id " + std::to_string(id));
  }
  validate_assignment(parameters, config_.parameters);
  auto [it, inserted] = records_.emplace(
      id, Record{Trial{id, std::move(parameters), std::move(directives), TrialStatus::Issued}, {}, {}, false});
  next_id_ = std::max(next_id_, id + 1);
  return it->second.trial;
}

Study::Record& Study::record(TrialId id) {
  auto it = records_.find(id);
  if (it == records_.end()) {
    throw StudyError(StudyErrorCode::UnknownTrial, "unknown trial " + std::to_string(id));
  }
  return it->second;
}

const Study::Record& Study::record(TrialId id) const {
  auto it = records_.find(id);
  if (it == records_.end()) {
    throw StudyError(StudyErrorCode::UnknownTrial, "unknown trial " + std::to_string(id));
  }
  return it->second;
}

void Study::mark_running(TrialId id) {
  Record& rec = record(id);
  if (is_terminal(rec.trial.status)) {
    throw StudyError(StudyErrorCode::TrialAlreadyFinalized,
                     "trial " + std::to_string(id) + " is already " + to_string(rec.trial.status));
  }
  rec.trial.status = TrialStatus::Running;
}

ObservationOutcome Study::add_observation(TrialId id, std::int64_t iteration, double objective,
                                          const Context& context) {
  Record& rec = record(id);
  if (is_terminal(rec.trial.status)) {
    throw StudyError(StudyErrorCode::TrialAlreadyFinalized,
                     "trial " + std::to_string(id) + " is already " + to_string(rec.trial.status));
  }
  if (!std::isfinite(objective) || iteration < 0) return ObservationOutcome::Rejected;

  rec.trial.status = TrialStatus::Running;
  bool monotone = true;
  for (const auto& o : rec.observations) monotone = monotone && iteration >= o.iteration;
  if (!monotone) rec.nonmonotonic = true;

  rec.observations.push_back({id, iteration, objective, context});
  results_.append({id, rec.trial.parameters, rec.trial.directives, TrialStatus::Running, iteration,
                   objective, context});
  return monotone ? ObservationOutcome::Accepted : ObservationOutcome::AcceptedNonMonotonic;
}

void Study::write_terminal(Record& rec, TrialStatus status) {
  const Observation* last = nullptr;
  for (const auto& o : rec.observations) {
    if (last == nullptr || o.iteration >= last->iteration) last = &o;
  }
  rec.trial.status = status;
  ResultRow row{rec.trial.id, rec.trial.parameters, rec.trial.directives, status, 0, std::nullopt, {}};
  if (last != nullptr) {
    rec.final_objective = last->objective;
    row.iteration = last->iteration;
    row.objective = last->objective;
    row.context = last->context;
  }
  results_.append(std::move(row));
  ++finalized_;
}

TrialStatus Study::finalize(TrialId id) {
  Record& rec = record(id);
  if (is_terminal(rec.trial.status)) {
    throw StudyError(StudyErrorCode::DoubleFinalize, "trial " + std::to_string(id) + " already finalized");
  }
  rec.trial.status = TrialStatus::Running;
  write_terminal(rec, rec.observations.empty() ? TrialStatus::Failed : TrialStatus::Completed);
  return rec.trial.status;
}

void Study::stop(TrialId id) {
  Record& rec = record(id);
  if (is_terminal(rec.trial.status)) {
    throw StudyError(StudyErrorCode::DoubleFinalize, "trial " + std::to_string(id) + " already finalized");
  }
  rec.trial.status = TrialStatus::Running;
  write_terminal(rec, TrialStatus::Stopped);
}

std::optional<BestResult> Study::best_result() const {
  const double sign = config_.lower_is_better ? 1.0 : -1.0;
  std::optional<BestResult> best;
  auto consider = [&](TrialId id, const Assignment& params, double objective) {
    if (!best || sign * objective < sign * best->objective ||
        (objective == best->objective && id < best->trial_id)) {
      best = BestResult{id, params, objective};
    }
  };

  if (!aggregate_repeats_) {
    for (const auto& [id, rec] : records_) {
      if (rec.trial.status == TrialStatus::Completed) consider(id, rec.trial.parameters, *rec.final_objective);
    }
    return best;
  }

  // Group completed repeats of one assignment; the group is represented by
  // its lowest trial id and scored by the mean final objective.
  struct Group {
    TrialId first;
    const Assignment* params;
    double sum;
    int count;
  };
  std::vector<Group> groups;
  for (const auto& [id, rec] : records_) {
    if (rec.trial.status != TrialStatus::Completed) continue;
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return *g.params == rec.trial.parameters; });
    if (it == groups.end()) {
      groups.push_back({id, &rec.trial.parameters, *rec.final_objective, 1});
    } else {
      it->sum += *rec.final_objective;
      ++it->count;
    }
  }
  for (const auto& g : groups) consider(g.first, *g.params, g.sum / g.count);
  return best;
}

const Trial& Study::trial(TrialId id) const { return record(id).trial; }

std::vector<Trial> Study::trials() const {
  std::vector<Trial> out;
  out.reserve(records_.size());
  for (const auto& [id, rec] : records_) out.push_back(rec.trial);
  return out;
}

const std::vector<Observation>& Study::observations(TrialId id) const { return record(id).observations; }

std::optional<double> Study::final_objective(TrialId id) const { return record(id).final_objective; }

bool Study::nonmonotonic(TrialId id) const { return record(id).nonmonotonic; }

Study::Iterator Study::begin() { return Iterator(this); }
Study::Iterator Study::end() { return Iterator(); }

}  // namespace hpo
