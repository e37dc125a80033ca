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


#include "hpo/template_scheduler.hpp"

#include <array>
#include <cstdio>
#include <sys/wait.h>

namespace hpo {

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// Runs a shell command and returns trimmed stdout; throws on nonzero exit.
std::string capture(const std::string& cmd) {
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw SchedulerError(SchedulerErrorCode::SchedulerUnavailable, "cannot run: " + cmd);
  std::string out;
  std::array<char, 256> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe) != nullptr) out += buf.data();
  const int status = ::pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    throw SchedulerError(SchedulerErrorCode::SchedulerUnavailable, "command failed: " + cmd);
  }
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r' || out.back() == ' ')) out.pop_back();
  return out;
}

}  // namespace

std::string CommandTemplateScheduler::expand(const std::string& text,
                                             const std::map<std::string, std::string>& values) {
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == '{') {
      const auto close = text.find('}', i);
      if (close != std::string::npos) {
        auto it = values.find(text.substr(i + 1, close - i - 1));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += text[i++];
  }
  return out;
}

SchedulerJob CommandTemplateScheduler::submit(const std::string& command, TrialId trial_id,
                                              const std::string& resource_token, const Environment& env) {
  std::string env_words;
  for (const auto& [k, v] : env) env_words += (env_words.empty() ? "" : " ") + shell_quote(k + "=" + v);
  const std::string cmd = expand(templates_.submit, {{"command", shell_quote(command)},
                                                     {"trial_id", std::to_string(trial_id)},
                                                     {"resource", shell_quote(resource_token)},
                                                     {"env", env_words}});
  std::string job_id;
  try {
    job_id = capture(cmd);
  } catch (const SchedulerError& e) {
    throw SchedulerError(SchedulerErrorCode::SpawnFailed, e.what());
  }
  if (job_id.empty()) throw SchedulerError(SchedulerErrorCode::SpawnFailed, "submit printed no job id");
  jobs_[job_id] = false;
  return {job_id, trial_id, resource_token, JobStatus::Queued};
}

std::vector<JobUpdate> CommandTemplateScheduler::poll() {
  std::vector<JobUpdate> out;
  for (auto it = jobs_.begin(); it != jobs_.end();) {
    const std::string text = capture(expand(templates_.status, {{"job_id", shell_quote(it->first)}}));
    JobStatus s = JobStatus::Running;
    if (text == "queued") {
      s = JobStatus::Queued;
    } else if (text == "finished") {
      s = it->second ? JobStatus::Killed : JobStatus::Finished;
    } else if (text == "failed") {
      s = it->second ? JobStatus::Killed : JobStatus::Failed;
    } else if (text == "killed") {
      s = JobStatus::Killed;
    }
    out.push_back({it->first, s, s == JobStatus::Failed ? 1 : 0});
    it = is_terminal(s) ? jobs_.erase(it) : std::next(it);
  }
  return out;
}

void CommandTemplateScheduler::kill(const std::string& job_id) {
  auto it = jobs_.find(job_id);
  if (it == jobs_.end()) throw SchedulerError(SchedulerErrorCode::UnknownJob, "unknown job " + job_id);
  if (it->second) return;
  it->second = true;
  capture(expand(templates_.kill, {{"job_id", shell_quote(job_id)}}));
}

}  // namespace hpo
