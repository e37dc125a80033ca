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
#include <sys/types.h>

#include "hpo/scheduler.hpp"

namespace hpo {

struct LocalSchedulerOptions {
  /// Jobs running longer than this are killed and reported Killed.
  std::optional<std::chrono::milliseconds> trial_timeout;
  /// Delay between the graceful signal and the hard kill.
  std::chrono::milliseconds kill_grace{5000};
};

/// Runs each job as `/bin/sh -c command` in its own process group on this
/// machine. Extra environment variables are layered over the parent's.
class LocalScheduler final : public Scheduler {
 public:
  explicit LocalScheduler(LocalSchedulerOptions options = {}) : options_(options) {}
  ~LocalScheduler() override;

  SchedulerJob submit(const std::string& command, TrialId trial_id, const std::string& resource_token,
                      const Environment& env) override;
  std::vector<JobUpdate> poll() override;
  void kill(const std::string& job_id) override;

  std::size_t live_jobs() const { return jobs_.size(); }

 private:
  using Clock = std::chrono::steady_clock;
  struct Process {
    pid_t pid = -1;
    Clock::time_point started;
    std::optional<Clock::time_point> term_sent;
    bool killed = false;
    std::optional<JobStatus> final_status;
    int exit_code = 0;
  };

  void signal_group(const Process& p, int sig) const;

  LocalSchedulerOptions options_;
  std::map<std::string, Process> jobs_;
};

}  // namespace hpo
