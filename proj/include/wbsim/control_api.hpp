// Copyright 2026 The wbsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The operator API, independent of any HTTP library.
//
//   GET  /api/aps      handler inventory
//   POST /api/scan     start a channel sweep
//   POST /api/attack   {"bssid": "...", "duration_s": 30}
//   POST /api/stop     supersede the live task with a stop order
//   GET  /api/status   {sim_time, phase, target, clients, bots}
//
// The event stream (/api/events) lives in the HTTP layer.

#ifndef WBSIM_CONTROL_API_HPP
#define WBSIM_CONTROL_API_HPP

#include <chrono>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "wbsim/live_session.hpp"
#include "wbsim/simulator.hpp"

namespace wbsim {

class ControlBackend {
 public:
  virtual ~ControlBackend() = default;
  virtual nlohmann::json aps() = 0;
  virtual nlohmann::json status() = 0;
  virtual CommandResult command(const HandlerCommand& cmd) = 0;
};

/// Drives a simulator owned by the caller, synchronously.
class SimulatorBackend final : public ControlBackend {
 public:
  explicit SimulatorBackend(Simulator& sim) : sim_(sim) {}
  nlohmann::json aps() override {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& a : sim_.handler().ap_inventory()) out.push_back(ap_info_json(a));
    return out;
  }
  nlohmann::json status() override { return sim_.status(); }
  CommandResult command(const HandlerCommand& cmd) override { return sim_.execute(cmd); }

 private:
  Simulator& sim_;
};

/// Talks to a running LiveSession through its queue and snapshots.
class LiveBackend final : public ControlBackend {
 public:
  explicit LiveBackend(LiveSession& session, std::chrono::milliseconds timeout = std::chrono::seconds(5))
      : session_(session), timeout_(timeout) {}
  nlohmann::json aps() override { return session_.snapshot()->aps; }
  nlohmann::json status() override { return session_.snapshot()->status; }
  CommandResult command(const HandlerCommand& cmd) override {
    auto f = session_.submit(cmd);
    if (f.wait_for(timeout_) != std::future_status::ready) {
      return CommandResult::reject(Errc::Io, "simulation loop did not answer");
    }
    return f.get();
  }

 private:
  LiveSession& session_;
  std::chrono::milliseconds timeout_;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

inline int http_status_for(Errc e) {
  switch (e) {
    case Errc::UnknownTarget: return 404;
    case Errc::NoTarget:
    case Errc::ValidationError:
    case Errc::RadioOff: return 409;
    case Errc::Io: return 503;
    default: return 400;
  }
}

class ControlApi {
 public:
  explicit ControlApi(ControlBackend& backend) : backend_(backend) {}

  ApiResponse handle(std::string_view method, std::string_view path, std::string_view body = {}) {
    if (path == "/api/aps") {
      if (method != "GET") return not_allowed();
      return {200, backend_.aps()};
    }
    if (path == "/api/status") {
      if (method != "GET") return not_allowed();
      return {200, backend_.status()};
    }
    if (path == "/api/scan") {
      if (method != "POST") return not_allowed();
      return run(HandlerCommand::scan());
    }
    if (path == "/api/stop") {
      if (method != "POST") return not_allowed();
      return run(HandlerCommand::stop());
    }
    if (path == "/api/attack") {
      if (method != "POST") return not_allowed();
      return attack(body);
    }
    return error(404, "NotFound", "no route for " + std::string(path));
  }

 private:
  static ApiResponse error(int status, std::string_view code, const std::string& message) {
    return {status, {{"error", code}, {"message", message}}};
  }
  static ApiResponse not_allowed() { return error(405, "MethodNotAllowed", "method not allowed"); }

  ApiResponse run(const HandlerCommand& cmd) {
    const CommandResult r = backend_.command(cmd);
    if (!r.accepted) {
      const Errc e = r.error.value_or(Errc::ValidationError);
      std::string code(errc_name(e));
      if (e == Errc::UnknownTarget) code = "UnknownBssid";
      return error(http_status_for(e), code, r.message);
    }
    nlohmann::json out = {{"accepted", true}, {"command", command_name(cmd.type)}};
    if (cmd.bssid) out["bssid"] = cmd.bssid->to_string();
    if (cmd.duration_s) out["duration_s"] = *cmd.duration_s;
    return {200, out};
  }

  ApiResponse attack(std::string_view body) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& e) {
      return error(400, "ParseError", e.what());
    }
    if (!j.is_object() || !j.contains("bssid") || !j["bssid"].is_string()) {
      return error(400, "ValidationError", "body must be {\"bssid\": \"...\", \"duration_s\": n}");
    }
    MacAddress bssid;
    if (!MacAddress::try_parse(j["bssid"].get<std::string>(), bssid)) {
      return error(400, "BadAddress", "bssid is not a MAC address");
    }
    std::optional<std::uint32_t> duration;
    if (j.contains("duration_s") && !j["duration_s"].is_null()) {
      const auto& d = j["duration_s"];
      if (!d.is_number_integer() || d.get<std::int64_t>() < 1 || d.get<std::int64_t>() > kMaxTaskDuration) {
        return error(400, "ValidationError", "duration_s must be an integer in 1..99999999");
      }
      duration = static_cast<std::uint32_t>(d.get<std::int64_t>());
    }
    return run(HandlerCommand::attack(bssid, duration));
  }

  ControlBackend& backend_;
};

}  // namespace wbsim

#endif  // WBSIM_CONTROL_API_HPP
