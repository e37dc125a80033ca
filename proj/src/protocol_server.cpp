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


#include "hpo/protocol_server.hpp"

#include <httplib.h>

#include <algorithm>
#include <cmath>

namespace hpo {

// ---------------------------------------------------------------------------
// Channel

void Channel::register_trial(TrialId id, std::string payload) {
  std::lock_guard lock(mu_);
  slots_[id] = Slot{std::move(payload), false, false, false};
}

void Channel::close_trial(TrialId id) {
  std::lock_guard lock(mu_);
  if (auto it = slots_.find(id); it != slots_.end()) it->second.terminal = true;
}

std::deque<InboundEvent> Channel::drain() {
  std::lock_guard lock(mu_);
  std::deque<InboundEvent> out;
  out.swap(events_);
  return out;
}

void Channel::publish(std::string results_document) {
  auto snapshot = std::make_shared<const std::string>(std::move(results_document));
  std::lock_guard lock(mu_);
  results_ = std::move(snapshot);
}

void Channel::wait_for_event(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [&] { return !events_.empty(); });
}

std::optional<std::string> Channel::fetch(TrialId id, Admission& admission) {
  std::lock_guard lock(mu_);
  auto it = slots_.find(id);
  if (it == slots_.end()) {
    admission = Admission::UnknownTrial;
    return std::nullopt;
  }
  if (it->second.terminal) {
    admission = Admission::Terminal;
    return std::nullopt;
  }
  if (!it->second.fetched) {
    it->second.fetched = true;
    events_.push_back({InboundEvent::Kind::Fetched, id, 0, 0.0, {}});
    cv_.notify_all();
  }
  admission = Admission::Accepted;
  return it->second.payload;
}

Admission Channel::post_observation(InboundEvent event) {
  std::lock_guard lock(mu_);
  auto it = slots_.find(event.trial_id);
  if (it == slots_.end()) return Admission::UnknownTrial;
  if (it->second.terminal) return Admission::Terminal;
  if (it->second.stop) return Admission::StopRequested;
  event.kind = InboundEvent::Kind::Observation;
  events_.push_back(std::move(event));
  cv_.notify_all();
  return Admission::Accepted;
}

Admission Channel::request_stop(TrialId id) {
  std::lock_guard lock(mu_);
  auto it = slots_.find(id);
  if (it == slots_.end()) return Admission::UnknownTrial;
  if (it->second.terminal) return Admission::Terminal;
  if (!it->second.stop) {
    it->second.stop = true;
    events_.push_back({InboundEvent::Kind::StopRequested, id, 0, 0.0, {}});
    cv_.notify_all();
  }
  return Admission::Accepted;
}

std::optional<bool> Channel::stop_requested(TrialId id) const {
  std::lock_guard lock(mu_);
  auto it = slots_.find(id);
  if (it == slots_.end()) return std::nullopt;
  return it->second.stop;
}

std::shared_ptr<const std::string> Channel::results() const {
  std::lock_guard lock(mu_);
  return results_;
}

// ---------------------------------------------------------------------------
// Results document

Json results_document(const Study& study) {
  Json doc = Json::object();
  doc["lower_is_better"] = study.config().lower_is_better;
  Json defs = Json::array();
  for (const auto& def : study.config().parameters) defs.push_back(to_json(def));
  doc["parameters"] = std::move(defs);

  Json trials = Json::array();
  for (const auto& t : study.trials()) {
    Json jt = Json::object();
    jt["id"] = t.id;
    jt["status"] = to_string(t.status);
    jt["parameters"] = parameters_to_json(t.parameters, t.directives);
    const auto fo = study.final_objective(t.id);
    jt["final_objective"] = t.status == TrialStatus::Completed && fo ? Json(*fo) : Json(nullptr);

    auto obs = study.observations(t.id);
    std::stable_sort(obs.begin(), obs.end(),
                     [](const Observation& a, const Observation& b) { return a.iteration < b.iteration; });
    Json jo = Json::array();
    for (const auto& o : obs) {
      jo.push_back({{"iteration", o.iteration}, {"objective", o.objective}, {"context", o.context}});
    }
    jt["observations"] = std::move(jo);
    trials.push_back(std::move(jt));
  }
  doc["trials"] = std::move(trials);
  return doc;
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(canonical_dump(body), kJson);
}

void error(httplib::Response& res, int status, const std::string& reason) {
  reply(res, status, Json{{"error", reason}});
}

std::optional<TrialId> path_id(const httplib::Request& req) {
  try {
    const auto id = std::stoll(req.matches[1].str());
    return id;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

bool is_nonfinite_token(const Json& j) {
  if (j.is_null()) return true;
  if (j.is_number()) return !std::isfinite(j.get<double>());
  if (!j.is_string()) return false;
  std::string s = j.get<std::string>();
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) s.erase(0, 1);
  return s == "nan" || s == "inf" || s == "infinity";
}

void admission_error(httplib::Response& res, Admission a) {
  switch (a) {
    case Admission::UnknownTrial:
      error(res, 404, "unknown trial");
      break;
    case Admission::Terminal:
      error(res, 409, "trial is terminal");
      break;
    case Admission::StopRequested:
      error(res, 409, "trial is stopping");
      break;
    case Admission::Accepted:
      break;
  }
}

const char* kPlaceholderPage =
    "<!doctype html>\n<html><head><meta charset=\"utf-8\"><title>hpo</title></head>\n"
    "<body><p>Dashboard assets are not installed. Results are available at "
    "<a href=\"/api/results\">/api/results</a>.</p></body></html>\n";

}  // namespace

ProtocolServer::ProtocolServer(Channel& channel, ServerOptions options)
    : channel_(channel), options_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

ProtocolServer::~ProtocolServer() { stop(); }

void ProtocolServer::install_routes() {
  auto& s = *server_;

  s.Get(R"(/api/trials/(\d+))", [this](const httplib::Request& req, httplib::Response& res) {
    const auto id = path_id(req);
    if (!id) return error(res, 404, "unknown trial");
    Admission a = Admission::Accepted;
    auto payload = channel_.fetch(*id, a);
    if (a == Admission::Terminal) return error(res, 410, "trial is terminal");
    if (!payload) return admission_error(res, a);
    res.status = 200;
    res.set_content(*payload, kJson);
  });

  s.Post(R"(/api/trials/(\d+)/observations)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto id = path_id(req);
    if (!id) return error(res, 404, "unknown trial");
    Json body;
    try {
      body = Json::parse(req.body);
    } catch (const Json::exception&) {
      return error(res, 400, "malformed JSON");
    }
    if (!body.is_object()) return error(res, 400, "body must be an object");
    for (const auto& [key, value] : body.items()) {
      if (key != "trial_id" && key != "iteration" && key != "objective" && key != "context") {
        return error(res, 400, "unknown field '" + key + "'");
      }
    }
    if (body.contains("trial_id") && (!body["trial_id"].is_number_integer() || body["trial_id"].get<TrialId>() != *id)) {
      return error(res, 400, "trial_id does not match the path");
    }
    if (!body.contains("objective")) return error(res, 400, "missing objective");
    if (is_nonfinite_token(body["objective"])) return error(res, 400, "non-finite objective");
    if (!body["objective"].is_number()) return error(res, 400, "objective must be a number");
    if (!body.contains("iteration") || !body["iteration"].is_number_integer() ||
        body["iteration"].get<std::int64_t>() < 0) {
      return error(res, 400, "iteration must be a non-negative integer");
    }
    InboundEvent ev;
    ev.trial_id = *id;
    ev.iteration = body["iteration"].get<std::int64_t>();
    ev.objective = body["objective"].get<double>();
    if (body.contains("context")) {
      const Json& ctx = body["context"];
      if (!ctx.is_object()) return error(res, 400, "context must be an object");
      for (const auto& [k, v] : ctx.items()) {
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
          return error(res, 400, "context value '" + k + "' must be a finite number");
        }
        ev.context[k] = v.get<double>();
      }
    }
    const Admission a = channel_.post_observation(std::move(ev));
    if (a != Admission::Accepted) return admission_error(res, a);
    reply(res, 202, Json{{"accepted", true}});
  });

  s.Get(R"(/api/trials/(\d+)/stop)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto id = path_id(req);
    const auto stop = id ? channel_.stop_requested(*id) : std::nullopt;
    if (!stop) return error(res, 404, "unknown trial");
    reply(res, 200, Json{{"stop", *stop}});
  });

  s.Post(R"(/api/trials/(\d+)/stop)", [this](const httplib::Request& req, httplib::Response& res) {
    const auto id = path_id(req);
    if (!id) return error(res, 404, "unknown trial");
    const Admission a = channel_.request_stop(*id);
    if (a != Admission::Accepted) return admission_error(res, a);
    reply(res, 202, Json{{"stop", true}});
  });

  s.Get("/api/results", [this](const httplib::Request&, httplib::Response& res) {
    const auto snapshot = channel_.results();
    res.status = 200;
    res.set_content(*snapshot, kJson);
  });

  if (options_.dashboard) {
    if (!options_.static_dir.empty() && s.set_mount_point("/", options_.static_dir)) return;
    s.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.status = 200;
      res.set_content(kPlaceholderPage, "text/html");
    });
  }
}

void ProtocolServer::start() {
  if (options_.port == 0) {
    port_ = server_->bind_to_any_port(options_.host);
    if (port_ <= 0) throw PortInUse("cannot bind any port on " + options_.host);
  } else {
    if (!server_->bind_to_port(options_.host, options_.port)) {
      throw PortInUse("port " + std::to_string(options_.port) + " on " + options_.host + " is in use");
    }
    port_ = options_.port;
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void ProtocolServer::stop() {
  if (thread_.joinable()) {
    server_->stop();
    thread_.join();
  }
}

}  // namespace hpo
