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


#include "hpo/scheduler.hpp"

#include <algorithm>

namespace hpo {

const char* to_string(JobStatus status) {
  switch (status) {
    case JobStatus::Queued:
      return "QUEUED";
    case JobStatus::Running:
      return "RUNNING";
    case JobStatus::Finished:
      return "FINISHED";
    case JobStatus::Failed:
      return "FAILED";
    case JobStatus::Killed:
      return "KILLED";
  }
  return "UNKNOWN";
}

ResourceLedger::ResourceLedger(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  auto sorted = tokens_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("resource tokens must be distinct");
  }
}

std::optional<std::string> ResourceLedger::acquire(TrialId holder) {
  for (const auto& t : tokens_) {
    if (holders_.count(t) == 0) {
      holders_.emplace(t, holder);
      max_held_ = std::max(max_held_, holders_.size());
      return t;
    }
  }
  return std::nullopt;
}

void ResourceLedger::release(const std::string& token) {
  if (holders_.erase(token) == 0) throw std::logic_error("resource token '" + token + "' released while free");
}

std::optional<TrialId> ResourceLedger::holder(const std::string& token) const {
  auto it = holders_.find(token);
  if (it == holders_.end()) return std::nullopt;
  return it->second;
}

}  // namespace hpo
