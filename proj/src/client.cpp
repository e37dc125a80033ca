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


#include "hpo/client.hpp"

#include <httplib.h>

#include <cmath>
#include <cstdlib>
#include <thread>

namespace hpo {

namespace {

struct Endpoint {
  std::string host;
  int port = 0;
};

Endpoint parse_server(const std::string& server) {
  std::string s = server;
  if (s.rfind("http://", 0) == 0) s = s.substr(7);
  const auto colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0) throw NotInTrialContext("SHERPA_SERVER must be host:port");
  Endpoint e;
  e.host = s.substr(0, colon);
  try {
    std::size_t used = 0;
    e.port = std::stoi(s.substr(colon + 1), &used);
    if (used != s.size() - colon - 1 || e.port <= 0 || e.port > 65535) throw std::invalid_argument("port");
  } catch (const std::exception&) {
    throw NotInTrialContext("SHERPA_SERVER has a bad port: " + server);
  }
  return e;
}

httplib::Client make_client(const std::string& server, const RetryPolicy& policy) {
  const Endpoint e = parse_server(server);
  httplib::Client c(e.host, e.port);
  c.set_connection_timeout(policy.connect_timeout);
  c.set_read_timeout(policy.read_timeout);
  c.set_write_timeout(policy.read_timeout);
  return c;
}

std::string reason_of(const httplib::Result& res) {
  try {
    const Json j = Json::parse(res->body);
    if (j.is_object() && j.contains("error") && j["error"].is_string()) return j["error"].get<std::string>();
  } catch (const Json::exception&) {
  }
  return res->body;
}

// Sends with retries on transport errors and 5xx answers.
template <class Send>
httplib::Result with_retries(const RetryPolicy& policy, const std::string& what, Send&& send) {
  auto backoff = policy.initial_backoff;
  for (int attempt = 1;; ++attempt) {
    httplib::Result res = send();
    if (res && res->status < 500) return res;
    if (attempt >= policy.max_attempts) {
      throw ServerUnreachable(what + " failed after " + std::to_string(attempt) + " attempts");
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

}  // namespace

Client::Client(std::string server, TrialId trial_id, RetryPolicy policy)
    : server_(std::move(server)), trial_id_(trial_id), policy_(policy) {
  parse_server(server_);
}

Client Client::from_env(RetryPolicy policy) {
  const char* server = std::getenv("SHERPA_SERVER");
  const char* id = std::getenv("SHERPA_TRIAL_ID");
  if (server == nullptr || id == nullptr || *server == '\0' || *id == '\0') {
    throw NotInTrialContext("SHERPA_SERVER and SHERPA_TRIAL_ID must both be set");
  }
  char* end = nullptr;
  const long long parsed = std::strtoll(id, &end, 10);
  if (*end != '\0' || parsed <= 0) throw NotInTrialContext(std::string("SHERPA_TRIAL_ID is not a trial id: ") + id);
  return Client(server, parsed, policy);
}

TrialPayload Client::get_trial() {
  auto http = make_client(server_, policy_);
  const std::string path = "/api/trials/" + std::to_string(trial_id_);
  auto res = with_retries(policy_, "GET " + path, [&] { return http.Get(path); });
  if (res->status != 200) throw Rejected(res->status, reason_of(res));
  const Json j = Json::parse(res->body);
  return {j.at("id").get<TrialId>(), j.at("parameters")};
}

void Client::send_metrics(std::int64_t iteration, double objective, const Context& context) {
  Json body{{"trial_id", trial_id_}, {"iteration", iteration}, {"context", context}};
  // JSON has no NaN or infinity; send a token the server recognizes.
  if (std::isfinite(objective)) {
    body["objective"] = objective;
  } else {
    body["objective"] = std::isnan(objective) ? "NaN" : (objective > 0 ? "Infinity" : "-Infinity");
  }
  auto http = make_client(server_, policy_);
  const std::string path = "/api/trials/" + std::to_string(trial_id_) + "/observations";
  const std::string payload = canonical_dump(body);
  auto res = with_retries(policy_, "POST " + path, [&] { return http.Post(path, payload, "application/json"); });
  if (res->status != 202) throw Rejected(res->status, reason_of(res));
}

bool Client::should_stop() {
  try {
    auto http = make_client(server_, policy_);
    auto res = http.Get("/api/trials/" + std::to_string(trial_id_) + "/stop");
    if (!res || res->status != 200) return false;
    const Json j = Json::parse(res->body);
    return j.value("stop", false);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace hpo
