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

// Scenario files.
//
// A scenario is a JSON document:
//
//   {
//     "seed": 7, "range_m": 400, "loss_probability": 0.0,
//     "horizon_s": 60, "time_scale": 1.0,
//     "nodes": [
//       {"kind": "handler", "mac": "...", "position": [0, 0], "autoselect": "TestNet"},
//       {"kind": "ap", "mac": "...", "ssid": "TestNet", "channel": 6,
//        "downlink": {"echo": true, "rate_hz": 0}},
//       {"kind": "client", "mac": "...", "target_ssid": "TestNet", "activity_rate": 2},
//       {"kind": "bot", "mac": "..."},
//       {"kind": "testbench", "mac": "...", "target_ssid": "TestNet"}
//     ],
//     "events":   [{"at_s": 20, "node": "bot1", "action": "power_off"},
//                  {"at_s": 30, "node": "bot2", "action": "move", "position": [10, 0]}],
//     "commands": [{"at_s": 25, "command": "attack", "bssid": "...", "duration_s": 30}]
//   }
//
// Every node-specific key is optional except mac, the AP's ssid, and the
// client and test-bench target_ssid. Node names default to kind + index
// within the kind ("client0", "bot1", ...).

#ifndef WBSIM_SCENARIO_HPP
#define WBSIM_SCENARIO_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbsim/access_point.hpp"
#include "wbsim/bot.hpp"
#include "wbsim/client.hpp"
#include "wbsim/handler.hpp"
#include "wbsim/medium.hpp"
#include "wbsim/testbench.hpp"

namespace wbsim {

using NodeParams = std::variant<ApConfig, ClientConfig, BotConfig, HandlerConfig, TestBenchConfig>;

struct NodeConfig {
  NodeKind kind = NodeKind::Client;
  std::string name;
  MacAddress mac;
  Position position;
  NodeParams params;
};

struct WorldEvent {
  enum class Action { PowerOff, PowerOn, Move };
  double at_s = 0;
  std::string node;
  Action action = Action::PowerOff;
  Position position;
};

struct ScheduledCommand {
  double at_s = 0;
  HandlerCommand command;
};

struct ScenarioConfig {
  std::uint64_t seed = 1;
  double range_m = 400.0;
  double loss_probability = 0.0;
  double horizon_s = 60.0;
  double time_scale = 1.0;
  std::vector<NodeConfig> nodes;
  std::vector<WorldEvent> events;
  std::vector<ScheduledCommand> commands;

  const NodeConfig* find(std::string_view name_or_mac) const {
    for (const auto& n : nodes) {
      if (n.name == name_or_mac || n.mac.to_string() == name_or_mac) return &n;
    }
    return nullptr;
  }
};

namespace detail {

using nlohmann::json;

[[noreturn]] inline void invalid(const std::string& why) { throw Error(Errc::ValidationError, why); }

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    invalid(std::string("field '") + key + "': " + e.what());
  }
}

inline std::string required_string(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) invalid(where + ": missing string field '" + key + "'");
  return it->get<std::string>();
}

inline MacAddress parse_mac_field(const json& j, const char* key, const std::string& where) {
  MacAddress m;
  if (!MacAddress::try_parse(required_string(j, key, where), m)) invalid(where + ": bad MAC in '" + key + "'");
  return m;
}

inline Channel parse_channel(const json& j, const char* key, int fallback, const std::string& where) {
  const int ch = get_or<int>(j, key, fallback);
  if (!Channel::valid(ch)) invalid(where + ": channel " + std::to_string(ch) + " outside 1..13");
  return Channel(ch);
}

inline Position parse_position(const json& j, const std::string& where) {
  auto it = j.find("position");
  if (it == j.end()) return {};
  Position p;
  if (it->is_array() && it->size() == 2 && (*it)[0].is_number() && (*it)[1].is_number()) {
    p = {(*it)[0].get<double>(), (*it)[1].get<double>()};
  } else if (it->is_object()) {
    p = {get_or<double>(*it, "x", 0.0), get_or<double>(*it, "y", 0.0)};
  } else {
    invalid(where + ": position must be [x, y] or {x, y}");
  }
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) invalid(where + ": position must be finite");
  return p;
}

inline void check_positive(double v, const std::string& what) {
  if (!(v > 0) || !std::isfinite(v)) invalid(what + " must be positive");
}
inline void check_non_negative(double v, const std::string& what) {
  if (!(v >= 0) || !std::isfinite(v)) invalid(what + " must be non-negative");
}

inline void check_ssid_field(const std::string& s, const std::string& where) {
  if (s.empty() || s.size() > kMaxSsidBytes) invalid(where + ": SSID must be 1..32 bytes");
}

inline NodeConfig parse_node(const json& j, std::size_t index) {
  if (!j.is_object()) invalid("node #" + std::to_string(index) + " is not an object");
  const std::string where = "node #" + std::to_string(index);
  NodeConfig n;
  const std::string kind = required_string(j, "kind", where);
  n.mac = parse_mac_field(j, "mac", where);
  if (!n.mac.is_unicast()) invalid(where + ": MAC must be unicast");
  n.position = parse_position(j, where);
  n.name = get_or<std::string>(j, "name", "");

  if (kind == "ap") {
    n.kind = NodeKind::AccessPoint;
    ApConfig c;
    c.ssid = required_string(j, "ssid", where);
    check_ssid_field(c.ssid, where);
    c.channel = parse_channel(j, "channel", 6, where);
    c.beacon_interval_tu = get_or<std::uint16_t>(j, "beacon_interval_tu", kDefaultBeaconIntervalTu);
    if (c.beacon_interval_tu == 0) invalid(where + ": beacon_interval_tu must be positive");
    if (auto it = j.find("downlink"); it != j.end()) {
      c.downlink.echo = get_or<bool>(*it, "echo", true);
      c.downlink.rate_hz = get_or<double>(*it, "rate_hz", 0.0);
      check_non_negative(c.downlink.rate_hz, where + ": downlink.rate_hz");
    }
    n.params = c;
  } else if (kind == "client") {
    n.kind = NodeKind::Client;
    ClientConfig c;
    c.target_ssid = required_string(j, "target_ssid", where);
    check_ssid_field(c.target_ssid, where);
    c.activity_rate = get_or<double>(j, "activity_rate", c.activity_rate);
    c.start_s = get_or<double>(j, "start_s", c.start_s);
    c.backoff_s = get_or<double>(j, "backoff_s", c.backoff_s);
    c.auth_timeout_s = get_or<double>(j, "auth_timeout_s", c.auth_timeout_s);
    c.retries = get_or<int>(j, "retries", c.retries);
    c.scan_dwell_ms = get_or<int>(j, "scan_dwell_ms", c.scan_dwell_ms);
    c.link_timeout_s = get_or<double>(j, "link_timeout_s", c.link_timeout_s);
    check_non_negative(c.activity_rate, where + ": activity_rate");
    check_non_negative(c.start_s, where + ": start_s");
    check_positive(c.backoff_s, where + ": backoff_s");
    check_positive(c.auth_timeout_s, where + ": auth_timeout_s");
    check_positive(c.link_timeout_s, where + ": link_timeout_s");
    if (c.retries < 0) invalid(where + ": retries must be non-negative");
    if (c.scan_dwell_ms <= 0) invalid(where + ": scan_dwell_ms must be positive");
    n.params = c;
  } else if (kind == "bot") {
    n.kind = NodeKind::Bot;
    BotConfig c;
    c.handler_ssid = get_or<std::string>(j, "handler_ssid", c.handler_ssid);
    check_ssid_field(c.handler_ssid, where);
    c.cycle_ms = get_or<int>(j, "cycle_ms", c.cycle_ms);
    c.fake_beacons = get_or<bool>(j, "fake_beacons", c.fake_beacons);
    c.scan_dwell_ms = get_or<int>(j, "scan_dwell_ms", c.scan_dwell_ms);
    c.join_timeout_s = get_or<double>(j, "join_timeout_s", c.join_timeout_s);
    c.handler_timeout_s = get_or<double>(j, "handler_timeout_s", c.handler_timeout_s);
    c.reason_code = get_or<std::uint16_t>(j, "reason_code", c.reason_code);
    if (c.cycle_ms <= 0) invalid(where + ": cycle_ms must be positive");
    if (c.scan_dwell_ms <= 0) invalid(where + ": scan_dwell_ms must be positive");
    check_positive(c.join_timeout_s, where + ": join_timeout_s");
    check_positive(c.handler_timeout_s, where + ": handler_timeout_s");
    n.params = c;
  } else if (kind == "handler") {
    n.kind = NodeKind::Handler;
    HandlerConfig c;
    c.ssid = get_or<std::string>(j, "ssid", c.ssid);
    check_ssid_field(c.ssid, where);
    c.channel = parse_channel(j, "channel", 1, where);
    c.attack_duration_s = get_or<std::uint32_t>(j, "attack_duration_s", c.attack_duration_s);
    c.capture_window_s = get_or<double>(j, "capture_window_s", c.capture_window_s);
    c.scan_dwell_ms = get_or<int>(j, "scan_dwell_ms", c.scan_dwell_ms);
    c.autoselect_at_s = get_or<double>(j, "autoselect_at_s", c.autoselect_at_s);
    if (auto it = j.find("autoselect"); it != j.end() && !it->is_null()) {
      if (!it->is_string()) invalid(where + ": autoselect must be an SSID string");
      c.autoselect = it->get<std::string>();
      check_ssid_field(*c.autoselect, where);
    }
    if (c.attack_duration_s < 1 || c.attack_duration_s > kMaxTaskDuration) {
      invalid(where + ": attack_duration_s must be 1..99999999");
    }
    check_non_negative(c.capture_window_s, where + ": capture_window_s");
    check_non_negative(c.autoselect_at_s, where + ": autoselect_at_s");
    if (c.scan_dwell_ms <= 0) invalid(where + ": scan_dwell_ms must be positive");
    n.params = c;
  } else if (kind == "testbench") {
    n.kind = NodeKind::TestBench;
    TestBenchConfig c;
    c.target_ssid = required_string(j, "target_ssid", where);
    check_ssid_field(c.target_ssid, where);
    if (j.contains("target_bssid") && !j["target_bssid"].is_null()) {
      c.target_bssid = parse_mac_field(j, "target_bssid", where);
    }
    c.tick_s = get_or<double>(j, "tick_s", c.tick_s);
    c.activity_rate = get_or<double>(j, "activity_rate", c.activity_rate);
    c.local_ssid = get_or<std::string>(j, "local_ssid", c.local_ssid);
    check_ssid_field(c.local_ssid, where);
    c.local_channel = parse_channel(j, "local_channel", 1, where);
    check_positive(c.tick_s, where + ": tick_s");
    check_non_negative(c.activity_rate, where + ": activity_rate");
    n.params = c;
  } else {
    invalid(where + ": unknown kind '" + kind + "'");
  }
  return n;
}

inline HandlerCommand parse_command(const json& j, const std::string& where) {
  const std::string name = required_string(j, "command", where);
  if (name == "scan") return HandlerCommand::scan();
  if (name == "stop") return HandlerCommand::stop();
  if (name != "attack") invalid(where + ": unknown command '" + name + "'");
  HandlerCommand c;
  c.type = HandlerCommand::Type::Attack;
  if (j.contains("bssid")) c.bssid = parse_mac_field(j, "bssid", where);
  if (j.contains("ssid")) c.ssid = required_string(j, "ssid", where);
  if (!c.bssid && !c.ssid) invalid(where + ": attack needs bssid or ssid");
  if (j.contains("duration_s")) {
    const auto d = get_or<std::int64_t>(j, "duration_s", 0);
    if (d < 1 || d > kMaxTaskDuration) invalid(where + ": duration_s must be 1..99999999");
    c.duration_s = static_cast<std::uint32_t>(d);
  }
  return c;
}

}  // namespace detail

/// Parses and validates a scenario. Throws Error(ParseError) for text that is
/// not JSON and Error(ValidationError) for JSON that breaks a rule: duplicate
/// MACs or names, anything but exactly one handler, bad channel, loss outside
/// [0, 1], references to unknown nodes.
inline ScenarioConfig load_scenario(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  if (!j.is_object()) throw Error(Errc::ParseError, "scenario must be a JSON object");

  ScenarioConfig s;
  s.seed = detail::get_or<std::uint64_t>(j, "seed", s.seed);
  s.range_m = detail::get_or<double>(j, "range_m", s.range_m);
  s.loss_probability = detail::get_or<double>(j, "loss_probability", s.loss_probability);
  s.horizon_s = detail::get_or<double>(j, "horizon_s", s.horizon_s);
  s.time_scale = detail::get_or<double>(j, "time_scale", s.time_scale);
  detail::check_positive(s.range_m, "range_m");
  if (!(s.loss_probability >= 0.0 && s.loss_probability <= 1.0)) {
    detail::invalid("loss_probability must be within [0, 1]");
  }
  detail::check_non_negative(s.horizon_s, "horizon_s");
  detail::check_positive(s.time_scale, "time_scale");

  const json nodes = j.value("nodes", json::array());
  if (!nodes.is_array()) detail::invalid("nodes must be an array");
  std::map<NodeKind, int> per_kind;
  std::set<MacAddress> macs;
  std::set<std::string> names;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    NodeConfig n = detail::parse_node(nodes[i], i);
    const int ordinal = per_kind[n.kind]++;
    if (n.name.empty()) n.name = std::string(node_kind_name(n.kind)) + std::to_string(ordinal);
    if (!macs.insert(n.mac).second) detail::invalid("duplicate MAC " + n.mac.to_string());
    if (!names.insert(n.name).second) detail::invalid("duplicate node name " + n.name);
    s.nodes.push_back(std::move(n));
  }
  const int handlers = per_kind[NodeKind::Handler];
  if (handlers != 1) {
    detail::invalid("exactly one handler required, found " + std::to_string(handlers));
  }

  for (const auto& e : j.value("events", json::array())) {
    WorldEvent w;
    const std::string where = "event";
    w.at_s = detail::get_or<double>(e, "at_s", 0.0);
    detail::check_non_negative(w.at_s, "event at_s");
    w.node = detail::required_string(e, "node", where);
    if (!s.find(w.node)) detail::invalid("event references unknown node " + w.node);
    const std::string action = detail::required_string(e, "action", where);
    if (action == "power_off") w.action = WorldEvent::Action::PowerOff;
    else if (action == "power_on") w.action = WorldEvent::Action::PowerOn;
    else if (action == "move") {
      w.action = WorldEvent::Action::Move;
      if (!e.contains("position")) detail::invalid("move event needs a position");
      w.position = detail::parse_position(e, where);
    } else {
      detail::invalid("unknown event action '" + action + "'");
    }
    s.events.push_back(w);
  }

  for (const auto& c : j.value("commands", json::array())) {
    ScheduledCommand sc;
    sc.at_s = detail::get_or<double>(c, "at_s", 0.0);
    detail::check_non_negative(sc.at_s, "command at_s");
    sc.command = detail::parse_command(c, "command");
    s.commands.push_back(sc);
  }
  return s;
}

inline ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open scenario " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_scenario(ss.str());
}

}  // namespace wbsim

#endif  // WBSIM_SCENARIO_HPP
