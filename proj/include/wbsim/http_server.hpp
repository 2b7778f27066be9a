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

#ifndef WBSIM_HTTP_SERVER_HPP
#define WBSIM_HTTP_SERVER_HPP

#include <chrono>
#include <memory>
#include <string>
#include <vector>

#include <httplib.h>

#include "wbsim/control_api.hpp"
#include "wbsim/live_session.hpp"

namespace wbsim {

/// Binds the control API, the event stream and optional static assets onto
/// an httplib server. The session must outlive the server.
inline void mount_api(httplib::Server& server, LiveSession& session, const std::string& static_dir = {}) {
  auto backend = std::make_shared<LiveBackend>(session);
  auto api = std::make_shared<ControlApi>(*backend);

  auto route = [backend, api](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse r = api->handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  for (const char* p : {"/api/aps", "/api/status"}) server.Get(p, route);
  for (const char* p : {"/api/scan", "/api/stop", "/api/attack"}) server.Post(p, route);

  server.Get("/api/events", [&session](const httplib::Request& req, httplib::Response& res) {
    std::size_t from = 0;
    if (req.has_param("since")) from = std::stoull(req.get_param_value("since"));
    auto cursor = std::make_shared<std::size_t>(from);
    res.set_header("Cache-Control", "no-cache");
    res.set_chunked_content_provider("text/event-stream", [&session, cursor](std::size_t, httplib::DataSink& sink) {
      std::vector<std::string> lines;
      *cursor = session.events_since(*cursor, lines, std::chrono::milliseconds(250));
      std::string chunk;
      for (const auto& l : lines) chunk += "event: record\ndata: " + l + "\n\n";
      if (chunk.empty()) chunk = ": keepalive\n\n";
      if (!sink.write(chunk.data(), chunk.size())) return false;
      if (!session.running() && lines.empty()) {
        sink.done();
      }
      return true;
    });
  });

  if (!static_dir.empty()) server.set_mount_point("/", static_dir);
}

}  // namespace wbsim

#endif  // WBSIM_HTTP_SERVER_HPP
