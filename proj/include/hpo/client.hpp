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
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "hpo/json_codec.hpp"
#include "hpo/study.hpp"

namespace hpo {

class NotInTrialContext : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ServerUnreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Rejected : public std::runtime_error {
 public:
  Rejected(int status, const std::string& reason)
      : std::runtime_error("rejected (" + std::to_string(status) + "): " + reason), status_(status), reason_(reason) {}
  int status() const { return status_; }
  const std::string& reason() const { return reason_; }

 private:
  int status_;
  std::string reason_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::milliseconds connect_timeout{1000};
  std::chrono::milliseconds read_timeout{5000};
};

struct TrialPayload {
  TrialId id = 0;
  Json parameters;  // user values plus any sherpa_* directive keys
};

/// Worker-side session for the trial named by SHERPA_TRIAL_ID.
class Client {
 public:
  Client(std::string server, TrialId trial_id, RetryPolicy policy = {});

  /// Reads SHERPA_SERVER and SHERPA_TRIAL_ID; throws NotInTrialContext when
  /// either is missing or malformed.
  static Client from_env(RetryPolicy policy = {});

  TrialPayload get_trial();
  /// Throws Rejected for a 4xx answer, ServerUnreachable after retries.
  void send_metrics(std::int64_t iteration, double objective, const Context& context = {});
  /// False when no stop was requested or the server cannot be reached.
  bool should_stop();

  TrialId trial_id() const { return trial_id_; }
  const std::string& server() const { return server_; }

 private:
  std::string server_;
  TrialId trial_id_;
  RetryPolicy policy_;
};

}  // namespace hpo
