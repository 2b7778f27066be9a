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

// Outcome measurements of a run.
//
// The collector watches station state directly inside the event loop. The
// same numbers can be rebuilt from the event log alone; the test suite does
// exactly that as a cross-check.
//
// Conventions:
//   downtime     time spent not connected after the first successful join,
//                up to the end of the run
//   true client  a station connected to the target BSSID at any instant of
//                the capture window; connection intervals are [from, to)
//   recall       |clients_list ∩ true clients| / |true clients|, 0 when there
//                are no true clients

#ifndef WBSIM_METRICS_HPP
#define WBSIM_METRICS_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbsim/handler.hpp"
#include "wbsim/mac_address.hpp"
#include "wbsim/sim_time.hpp"

namespace wbsim {

struct ClientMetrics {
  std::string name;
  MacAddress mac;
  std::optional<double> time_to_first_disconnect_s;
  double total_downtime_s = 0;
  std::uint64_t reconnect_attempts = 0;
  std::uint64_t reconnect_successes = 0;
};

struct BotMetrics {
  std::string name;
  MacAddress mac;
  std::uint64_t deauth_frames_sent = 0;
  std::uint64_t beacons_sent = 0;
};

struct DiscoveryMetrics {
  std::string target;
  std::uint64_t true_client_count = 0;
  std::uint64_t discovered_count = 0;
  std::uint64_t listed_count = 0;
  double recall = 0;
};

struct AttackMetrics {
  std::string target;
  double start_s = 0;
  double deadline_s = 0;
};

struct Metrics {
  std::vector<ClientMetrics> clients;
  std::vector<BotMetrics> bots;
  std::vector<DiscoveryMetrics> discoveries;
  std::vector<AttackMetrics> attacks;

  /// Most recent discovery, or all zeros.
  DiscoveryMetrics discovery() const { return discoveries.empty() ? DiscoveryMetrics{} : discoveries.back(); }
  AttackMetrics attack() const { return attacks.empty() ? AttackMetrics{} : attacks.back(); }

  const ClientMetrics* client(std::string_view name) const {
    for (const auto& c : clients) {
      if (c.name == name) return &c;
    }
    return nullptr;
  }
};

inline nlohmann::json discovery_json(const DiscoveryMetrics& d) {
  return {{"target", d.target},
          {"true_client_count", d.true_client_count},
          {"discovered_count", d.discovered_count},
          {"listed_count", d.listed_count},
          {"recall", d.recall}};
}

inline nlohmann::json attack_json(const AttackMetrics& a) {
  return {{"target", a.target}, {"start_s", a.start_s}, {"deadline_s", a.deadline_s}};
}

inline nlohmann::json metrics_to_json(const Metrics& m) {
  nlohmann::json clients = nlohmann::json::array();
  for (const auto& c : m.clients) {
    clients.push_back({{"name", c.name},
                       {"mac", c.mac.to_string()},
                       {"time_to_first_disconnect_s", c.time_to_first_disconnect_s
                                                          ? nlohmann::json(*c.time_to_first_disconnect_s)
                                                          : nlohmann::json()},
                       {"total_downtime_s", c.total_downtime_s},
                       {"reconnect_attempts", c.reconnect_attempts},
                       {"reconnect_successes", c.reconnect_successes}});
  }
  nlohmann::json bots = nlohmann::json::array();
  for (const auto& b : m.bots) {
    bots.push_back({{"name", b.name},
                    {"mac", b.mac.to_string()},
                    {"deauth_frames_sent", b.deauth_frames_sent},
                    {"beacons_sent", b.beacons_sent}});
  }
  nlohmann::json discoveries = nlohmann::json::array();
  for (const auto& d : m.discoveries) discoveries.push_back(discovery_json(d));
  nlohmann::json attacks = nlohmann::json::array();
  for (const auto& a : m.attacks) attacks.push_back(attack_json(a));
  return {{"clients", clients},
          {"bots", bots},
          {"discovery", discovery_json(m.discovery())},
          {"discoveries", discoveries},
          {"attack", attack_json(m.attack())},
          {"attacks", attacks}};
}

class MetricsCollector {
 public:
  struct Interval {
    MacAddress bssid;
    SimTime from;
    std::optional<SimTime> to;
  };

  struct StationTrack {
    std::string name;
    MacAddress mac;
    bool connected = false;
    bool ever_connected = false;
    SimTime down_since = 0;
    SimTime downtime = 0;
    std::vector<SimTime> disconnects;
    std::vector<Interval> intervals;
    std::uint64_t attempts = 0;
    std::uint64_t successes = 0;
  };

  std::size_t add_station(std::string name, MacAddress mac) {
    StationTrack s;
    s.name = std::move(name);
    s.mac = mac;
    stations_.push_back(std::move(s));
    return stations_.size() - 1;
  }

  /// Feed the station's state after every event that touched it. `sta` is
  /// null when the node is powered off or no longer acts as a station.
  void observe(std::size_t index, const ClientNode* sta, SimTime now) {
    StationTrack& s = stations_[index];
    const bool connected = sta && sta->connected();
    if (sta) {
      s.attempts = std::max(s.attempts, sta->reconnect_attempts());
      s.successes = std::max(s.successes, sta->reconnect_successes());
    }
    if (connected == s.connected) return;
    if (connected) {
      if (s.ever_connected) s.downtime += now - s.down_since;
      s.ever_connected = true;
      s.intervals.push_back({*sta->associated_bssid(), now, std::nullopt});
    } else {
      s.down_since = now;
      s.disconnects.push_back(now);
      if (!s.intervals.empty()) s.intervals.back().to = now;
    }
    s.connected = connected;
  }

  const std::vector<StationTrack>& stations() const { return stations_; }

  Metrics compute(SimTime now, const HandlerNode* handler, std::vector<BotMetrics> bots) const {
    Metrics m;
    std::optional<SimTime> first_attack;
    if (handler && !handler->attacks().empty()) first_attack = handler->attacks().front().start;

    for (const auto& s : stations_) {
      ClientMetrics c;
      c.name = s.name;
      c.mac = s.mac;
      SimTime down = s.downtime;
      if (s.ever_connected && !s.connected) down += now - s.down_since;
      c.total_downtime_s = to_seconds(down);
      c.reconnect_attempts = s.attempts;
      c.reconnect_successes = s.successes;
      if (first_attack) {
        for (SimTime t : s.disconnects) {
          if (t >= *first_attack) {
            c.time_to_first_disconnect_s = to_seconds(t - *first_attack);
            break;
          }
        }
      }
      m.clients.push_back(c);
    }
    m.bots = std::move(bots);

    if (handler) {
      for (const auto& d : handler->discoveries()) {
        DiscoveryMetrics dm;
        dm.target = d.target.bssid.to_string();
        dm.listed_count = d.clients.size();
        for (const auto& s : stations_) {
          const bool truth = std::any_of(s.intervals.begin(), s.intervals.end(), [&](const Interval& iv) {
            return iv.bssid == d.target.bssid && iv.from <= d.ended && (!iv.to || *iv.to > d.started);
          });
          if (!truth) continue;
          ++dm.true_client_count;
          if (std::find(d.clients.begin(), d.clients.end(), s.mac) != d.clients.end()) ++dm.discovered_count;
        }
        dm.recall = dm.true_client_count == 0
                        ? 0.0
                        : static_cast<double>(dm.discovered_count) / static_cast<double>(dm.true_client_count);
        m.discoveries.push_back(dm);
      }
      for (const auto& a : handler->attacks()) {
        m.attacks.push_back({a.target.bssid.to_string(), to_seconds(a.start), to_seconds(a.deadline)});
      }
    }
    return m;
  }

 private:
  std::vector<StationTrack> stations_;
};

}  // namespace wbsim

#endif  // WBSIM_METRICS_HPP
