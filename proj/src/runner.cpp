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


#include "hpo/runner.hpp"

#include <iostream>

namespace hpo {

std::vector<std::string> resolve_resources(const RunnerConfig& config) {
  if (config.max_concurrent < 1) throw std::invalid_argument("max_concurrent must be at least 1");
  if (config.resources.empty()) {
    std::vector<std::string> tokens;
    for (std::size_t i = 0; i < config.max_concurrent; ++i) tokens.push_back(std::to_string(i));
    return tokens;
  }
  if (config.max_concurrent > config.resources.size()) {
    throw std::invalid_argument("max_concurrent (" + std::to_string(config.max_concurrent) +
                                ") exceeds the number of resources (" + std::to_string(config.resources.size()) +
                                ")");
  }
  return config.resources;
}

Runner::Runner(Study& study, Scheduler& scheduler, RunnerConfig config)
    : study_(study), scheduler_(scheduler), config_(std::move(config)), ledger_(resolve_resources(config_)) {}

void Runner::apply(std::deque<InboundEvent> events) {
  for (auto& ev : events) {
    try {
      switch (ev.kind) {
        case InboundEvent::Kind::Fetched:
          study_.mark_running(ev.trial_id);
          break;
        case InboundEvent::Kind::Observation:
          if (study_.add_observation(ev.trial_id, ev.iteration, ev.objective, ev.context) ==
              ObservationOutcome::AcceptedNonMonotonic) {
            std::cerr << "hpo: trial " << ev.trial_id << " reported iteration " << ev.iteration
                      << " out of order\n";
          }
          break;
        case InboundEvent::Kind::StopRequested:
          if (auto it = job_of_.find(ev.trial_id); it != job_of_.end()) {
            jobs_.at(it->second).stop_requested = true;
            scheduler_.kill(it->second);
          }
          break;
      }
    } catch (const StudyError& e) {
      std::cerr << "hpo: dropped event for trial " << ev.trial_id << ": " << e.what() << '\n';
    } catch (const SchedulerError& e) {
      std::cerr << "hpo: " << e.what() << '\n';
    }
    dirty_ = true;
  }
}

void Runner::submit_ready() {
  while (!exhausted_ && ledger_.free_count() > 0 && jobs_.size() < config_.max_concurrent) {
    SuggestResult next;
    try {
      next = study_.suggest();
    } catch (const StudyError& e) {
      std::cerr << "hpo: " << e.what() << "; no further trials will be issued\n";
      exhausted_ = true;
      return;
    }
    if (next.kind == SuggestKind::Done) {
      exhausted_ = true;
      return;
    }
    if (next.kind == SuggestKind::Wait) {
      waiting_ = true;
      return;
    }
    waiting_ = false;
    const Trial& trial = next.trial;
    const std::string token = *ledger_.acquire(trial.id);
    channel_.register_trial(trial.id, canonical_dump(trial_payload(trial)));
    dirty_ = true;

    Environment env{{"SHERPA_TRIAL_ID", std::to_string(trial.id)},
                    {"SHERPA_SERVER", config_.server.host + ":" + std::to_string(port_)},
                    {"SHERPA_RESOURCE", token}};
    try {
      SchedulerJob job = scheduler_.submit(config_.command, trial.id, token, env);
      ++report_.submitted;
      const std::string job_id = job.job_id;
      job_of_[trial.id] = job_id;
      jobs_[job_id] = LiveJob{std::move(job), false};
    } catch (const SchedulerError& e) {
      if (e.code() == SchedulerErrorCode::SchedulerUnavailable) throw;
      std::cerr << "hpo: " << e.what() << '\n';
      ledger_.release(token);
      channel_.close_trial(trial.id);
      study_.finalize(trial.id);
      ++report_.failed;
    }
  }
}

void Runner::finish(const std::string& job_id, JobStatus status) {
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) return;
  const LiveJob live = it->second;
  jobs_.erase(it);
  job_of_.erase(live.job.trial_id);
  ledger_.release(live.job.resource_token);

  // Closing first means the drain below sees every acknowledged observation.
  channel_.close_trial(live.job.trial_id);
  apply(channel_.drain());

  const TrialId id = live.job.trial_id;
  const bool stop_requested = live.stop_requested || channel_.stop_requested(id).value_or(false);
  if (status == JobStatus::Killed || stop_requested) {
    study_.stop(id);
    ++report_.stopped;
  } else if (study_.finalize(id) == TrialStatus::Completed) {
    ++report_.completed;
  } else {
    ++report_.failed;
  }
  dirty_ = true;
}

void Runner::publish() {
  if (!dirty_) return;
  channel_.publish(canonical_dump(results_document(study_)));
  dirty_ = false;
}

RunReport Runner::run() {
  ProtocolServer server(channel_, config_.server);
  server.start();
  port_ = server.port();
  report_.port = port_;
  publish();
  if (config_.on_listening) config_.on_listening(port_);

  for (;;) {
    submit_ready();
    report_.max_concurrent_observed = std::max(report_.max_concurrent_observed, ledger_.max_held());
    if (jobs_.empty() && exhausted_) break;
    if (jobs_.empty() && waiting_) {
      // Nothing live could ever satisfy the wait.
      std::cerr << "hpo: algorithm is waiting with no live trials; stopping\n";
      break;
    }
    apply(channel_.drain());

    bool finished_any = false;
    for (const auto& update : scheduler_.poll()) {
      if (!is_terminal(update.status)) continue;
      finish(update.job_id, update.status);
      finished_any = true;
    }
    apply(channel_.drain());
    publish();
    if (!finished_any) channel_.wait_for_event(config_.poll_interval);
  }
  publish();
  server.stop();
  return report_;
}

}  // namespace hpo
