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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hpo/protocol_server.hpp"
#include "hpo/scheduler.hpp"
#include "hpo/study.hpp"

namespace hpo {

struct RunnerConfig {
  std::string command;
  std::size_t max_concurrent = 1;
  /// Resource tokens. Empty means "0" .. "max_concurrent - 1".
  std::vector<std::string> resources;
  std::chrono::milliseconds poll_interval{250};
  ServerOptions server;
  /// Called once the server listens, with the bound port.
  std::function<void(int)> on_listening;
};

struct RunReport {
  std::size_t submitted = 0;
  std::size_t completed = 0;
  std::size_t failed = 0;
  std::size_t stopped = 0;
  /// Highest number of resource tokens held at once.
  std::size_t max_concurrent_observed = 0;
  int port = 0;
};

/// Validates max_concurrent against the declared resources and returns the
/// token list to use.
std::vector<std::string> resolve_resources(const RunnerConfig& config);

/// Parallel-mode driver: one coordinator thread owns the study and the
/// scheduler; the protocol server talks to it through a Channel.
class Runner {
 public:
  Runner(Study& study, Scheduler& scheduler, RunnerConfig config);

  /// Runs until the algorithm is exhausted and no job is live. Throws
  /// PortInUse or SchedulerError(SchedulerUnavailable) for setup failures;
  /// individual job failures only affect their trial.
  RunReport run();

 private:
  struct LiveJob {
    SchedulerJob job;
    bool stop_requested = false;
  };

  void apply(std::deque<InboundEvent> events);
  void submit_ready();
  void finish(const std::string& job_id, JobStatus status);
  void publish();

  Study& study_;
  Scheduler& scheduler_;
  RunnerConfig config_;
  Channel channel_;
  ResourceLedger ledger_;
  std::map<std::string, LiveJob> jobs_;        // job id -> job
  std::map<TrialId, std::string> job_of_;      // trial id -> job id
  RunReport report_;
  bool exhausted_ = false;
  bool waiting_ = false;
  bool dirty_ = true;
  int port_ = 0;
};

}  // namespace hpo
