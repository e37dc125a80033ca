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

#include <chrono>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hpo/study.hpp"

namespace hpo {

enum class JobStatus { Queued, Running, Finished, Failed, Killed };

const char* to_string(JobStatus status);
inline bool is_terminal(JobStatus s) {
  return s == JobStatus::Finished || s == JobStatus::Failed || s == JobStatus::Killed;
}

struct SchedulerJob {
  std::string job_id;
  TrialId trial_id = 0;
  std::string resource_token;
  JobStatus status = JobStatus::Queued;
};

struct JobUpdate {
  std::string job_id;
  JobStatus status = JobStatus::Running;
  int exit_code = 0;
};

enum class SchedulerErrorCode { SpawnFailed, UnknownJob, SchedulerUnavailable };

class SchedulerError : public std::runtime_error {
 public:
  SchedulerError(SchedulerErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  SchedulerErrorCode code() const { return code_; }

 private:
  SchedulerErrorCode code_;
};

using Environment = std::map<std::string, std::string>;

class Scheduler {
 public:
  virtual ~Scheduler() = default;

  /// Starts `command` for a trial. The job holds `resource_token` until it
  /// leaves Running.
  virtual SchedulerJob submit(const std::string& command, TrialId trial_id, const std::string& resource_token,
                              const Environment& env) = 0;

  /// Non-blocking snapshot. Every live job is listed; a job that reached a
  /// terminal state is listed exactly once more and then forgotten.
  virtual std::vector<JobUpdate> poll() = 0;

  /// Asks the job to stop. Unknown ids throw UnknownJob; terminal jobs are a
  /// no-op.
  virtual void kill(const std::string& job_id) = 0;
};

/// Exclusive resource tokens. Every acquire must be matched by a release.
class ResourceLedger {
 public:
  explicit ResourceLedger(std::vector<std::string> tokens);

  std::optional<std::string> acquire(TrialId holder);
  void release(const std::string& token);

  std::size_t held() const { return holders_.size(); }
  std::size_t free_count() const { return tokens_.size() - holders_.size(); }
  std::size_t capacity() const { return tokens_.size(); }
  std::size_t max_held() const { return max_held_; }
  std::optional<TrialId> holder(const std::string& token) const;

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, TrialId> holders_;
  std::size_t max_held_ = 0;
};

}  // namespace hpo
