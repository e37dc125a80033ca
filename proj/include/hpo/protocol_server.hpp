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

#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "hpo/json_codec.hpp"
#include "hpo/study.hpp"

namespace httplib {
class Server;
}

namespace hpo {

/// Message from the wire to the coordinator.
struct InboundEvent {
  enum class Kind { Fetched, Observation, StopRequested };
  Kind kind = Kind::Observation;
  TrialId trial_id = 0;
  std::int64_t iteration = 0;
  double objective = 0.0;
  Context context;
};

enum class Admission { Accepted, UnknownTrial, Terminal, StopRequested };

/// The only state shared between request handlers and the coordinator: an
/// inbound event queue, per-trial admission flags, and an immutable results
/// snapshot. Handlers never touch the study.
class Channel {
 public:
  // Coordinator side.
  void register_trial(TrialId id, std::string payload);
  /// After this returns no further event for `id` is admitted, so draining
  /// once more yields every event that was acknowledged for it.
  void close_trial(TrialId id);
  std::deque<InboundEvent> drain();
  void publish(std::string results_document);
  /// Waits until an event arrives or the timeout elapses.
  void wait_for_event(std::chrono::milliseconds timeout);

  // Handler side.
  std::optional<std::string> fetch(TrialId id, Admission& admission);
  Admission post_observation(InboundEvent event);
  Admission request_stop(TrialId id);
  std::optional<bool> stop_requested(TrialId id) const;
  std::shared_ptr<const std::string> results() const;

 private:
  struct Slot {
    std::string payload;
    bool fetched = false;
    bool terminal = false;
    bool stop = false;
  };

  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::map<TrialId, Slot> slots_;
  std::deque<InboundEvent> events_;
  std::shared_ptr<const std::string> results_ = std::make_shared<const std::string>("{}");
};

/// {"lower_is_better", "parameters": [defs], "trials": [...]} with each
/// trial's observations ordered by iteration.
Json results_document(const Study& study);

class PortInUse : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 8880;  // 0 picks a free port
  /// Directory of dashboard assets served at "/". Empty serves a small
  /// placeholder page.
  std::string static_dir;
  bool dashboard = true;
};

/// HTTP/JSON front end. Runs on its own thread pool.
class ProtocolServer {
 public:
  ProtocolServer(Channel& channel, ServerOptions options);
  ~ProtocolServer();
  ProtocolServer(const ProtocolServer&) = delete;
  ProtocolServer& operator=(const ProtocolServer&) = delete;

  /// Binds and starts serving; throws PortInUse when the port is taken.
  void start();
  void stop();
  int port() const { return port_; }

 private:
  void install_routes();

  Channel& channel_;
  ServerOptions options_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace hpo
