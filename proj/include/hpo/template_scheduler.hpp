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

#include <map>
#include <string>

#include "hpo/scheduler.hpp"

namespace hpo {

/// Shell templates for a batch system. Placeholders: {command}, {trial_id},
/// {resource} and {env} (a list of KEY=VALUE words) in `submit`; {job_id} in
/// `status` and `kill`.
struct CommandTemplates {
  std::string submit;  // stdout: the job id
  std::string status;  // stdout: one of queued, running, finished, failed, killed
  std::string kill;
};

/// Extension point for cluster schedulers such as SGE or SLURM. It drives the
/// batch system purely through the configured shell commands; no batch system
/// is bundled or tested beyond a fake driven by shell scripts.
class CommandTemplateScheduler final : public Scheduler {
 public:
  explicit CommandTemplateScheduler(CommandTemplates templates) : templates_(std::move(templates)) {}

  SchedulerJob submit(const std::string& command, TrialId trial_id, const std::string& resource_token,
                      const Environment& env) override;
  std::vector<JobUpdate> poll() override;
  void kill(const std::string& job_id) override;

  /// Replaces every {key} in `text` with the shell-quoted value.
  static std::string expand(const std::string& text, const std::map<std::string, std::string>& values);

 private:
  std::map<std::string, bool> jobs_;  // job id -> kill requested
  CommandTemplates templates_;
};

}  // namespace hpo
