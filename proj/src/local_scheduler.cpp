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


#include "hpo/local_scheduler.hpp"

#include <cerrno>
#include <cstring>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace hpo {

LocalScheduler::~LocalScheduler() {
  for (auto& [id, p] : jobs_) {
    if (p.final_status) continue;
    signal_group(p, SIGKILL);
    int status = 0;
    ::waitpid(p.pid, &status, 0);
  }
}

void LocalScheduler::signal_group(const Process& p, int sig) const {
  if (::kill(-p.pid, sig) != 0) ::kill(p.pid, sig);
}

SchedulerJob LocalScheduler::submit(const std::string& command, TrialId trial_id, const std::string& resource_token,
                                    const Environment& env) {
  Environment merged;
  for (char** e = environ; *e != nullptr; ++e) {
    std::string kv(*e);
    const auto eq = kv.find('=');
    if (eq != std::string::npos) merged[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  for (const auto& [k, v] : env) merged[k] = v;

  std::vector<std::string> env_strings;
  env_strings.reserve(merged.size());
  for (const auto& [k, v] : merged) env_strings.push_back(k + "=" + v);
  std::vector<char*> envp;
  for (auto& s : env_strings) envp.push_back(s.data());
  envp.push_back(nullptr);

  std::string sh = "/bin/sh";
  std::string dash_c = "-c";
  std::string cmd = command;
  char* argv[] = {sh.data(), dash_c.data(), cmd.data(), nullptr};

  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);
  pid_t pid = -1;
  const int rc = posix_spawn(&pid, sh.c_str(), nullptr, &attr, argv, envp.data());
  posix_spawnattr_destroy(&attr);
  if (rc != 0) {
    throw SchedulerError(SchedulerErrorCode::SpawnFailed,
                         "cannot spawn job for trial " + std::to_string(trial_id) + ": " + std::strerror(rc));
  }

  std::string job_id = "local-" + std::to_string(pid);
  jobs_[job_id] = Process{pid, Clock::now(), std::nullopt, false, std::nullopt, 0};
  return {job_id, trial_id, resource_token, JobStatus::Running};
}

std::vector<JobUpdate> LocalScheduler::poll() {
  std::vector<JobUpdate> out;
  const auto now = Clock::now();
  for (auto it = jobs_.begin(); it != jobs_.end();) {
    Process& p = it->second;
    if (!p.final_status) {
      int status = 0;
      const pid_t r = ::waitpid(p.pid, &status, WNOHANG);
      if (r == p.pid) {
        if (p.killed) {
          p.final_status = JobStatus::Killed;
        } else if (WIFEXITED(status) && WEXITSTATUS(status) == 0) {
          p.final_status = JobStatus::Finished;
        } else {
          p.final_status = JobStatus::Failed;
        }
        p.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
        // Take down anything the shell left behind in the group.
        ::kill(-p.pid, SIGKILL);
      } else if (r < 0 && errno == ECHILD) {
        p.final_status = p.killed ? JobStatus::Killed : JobStatus::Failed;
        p.exit_code = -1;
      } else {
        if (!p.killed && options_.trial_timeout && now - p.started > *options_.trial_timeout) {
          p.killed = true;
          p.term_sent = now;
          signal_group(p, SIGTERM);
        } else if (p.term_sent && now - *p.term_sent > options_.kill_grace) {
          signal_group(p, SIGKILL);
        }
      }
    }
    if (p.final_status) {
      out.push_back({it->first, *p.final_status, p.exit_code});
      it = jobs_.erase(it);
    } else {
      out.push_back({it->first, JobStatus::Running, 0});
      ++it;
    }
  }
  return out;
}

void LocalScheduler::kill(const std::string& job_id) {
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw SchedulerError(SchedulerErrorCode::UnknownJob, "unknown job " + job_id);
  Process& p = it->second;
  if (p.final_status || p.killed) return;
  p.killed = true;
  p.term_sent = Clock::now();
  signal_group(p, SIGTERM);
}

}  // namespace hpo
