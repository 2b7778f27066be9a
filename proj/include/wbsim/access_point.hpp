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

#ifndef WBSIM_ACCESS_POINT_HPP
#define WBSIM_ACCESS_POINT_HPP

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbsim/frames.hpp"
#include "wbsim/node.hpp"

namespace wbsim {

/// Open-system authentication and association bookkeeping shared by every
/// node that runs an AP: the victim APs, the handler's own network and the
/// test bench in local-AP mode.
class AccessPointCore {
 public:
  AccessPointCore() = default;
  AccessPointCore(MacAddress bssid, std::string ssid, Channel channel)
      : bssid_(bssid), ssid_(std::move(ssid)), channel_(channel) {}

  const MacAddress& bssid() const { return bssid_; }
  const std::string& ssid() const { return ssid_; }
  Channel channel() const { return channel_; }

  struct Association {
    MacAddress station;
    std::uint16_t aid;
  };
  const std::vector<Association>& associated() const { return associated_; }

  bool is_associated(const MacAddress& station) const {
    return std::any_of(associated_.begin(), associated_.end(),
                       [&](const Association& a) { return a.station == station; });
  }

  void clear() { associated_.clear(); }

  Frame beacon(SimTime now, std::uint16_t sequence, std::uint16_t interval_tu) const {
    return make_beacon(bssid_, ssid_, channel_, static_cast<std::uint64_t>(now), sequence, interval_tu);
  }

  /// Answers auth/assoc requests addressed to this BSSID and drops stations
  /// that deauthenticate themselves. Returns true if the frame was consumed.
  bool handle(const Frame& f, std::uint16_t sequence, Outbox& out) {
    if (f.receiver() != bssid_) return false;
    const MacAddress& sta = f.transmitter();
    if (!sta.is_unicast()) return false;
    if (f.as<AuthRequest>()) {
      out.send(make_management(sta, bssid_, bssid_, AuthResponse{0}, sequence));
      return true;
    }
    if (const auto* req = f.as<AssocRequest>()) {
      if (req->ssid != ssid_) {
        out.send(make_management(sta, bssid_, bssid_, AssocResponse{1, 0}, sequence));
        return true;
      }
      std::uint16_t aid = 0;
      for (const auto& a : associated_) {
        if (a.station == sta) aid = a.aid;
      }
      if (aid == 0) {
        aid = next_aid_;
        next_aid_ = static_cast<std::uint16_t>(next_aid_ % 2007 + 1);
        associated_.push_back({sta, aid});
        out.note("station_associated", {{"station", sta.to_string()}, {"aid", aid}});
      }
      out.send(make_management(sta, bssid_, bssid_, AssocResponse{0, aid}, sequence));
      return true;
    }
    if (f.as<Deauth>()) {
      auto it = std::remove_if(associated_.begin(), associated_.end(),
                               [&](const Association& a) { return a.station == sta; });
      if (it != associated_.end()) {
        associated_.erase(it, associated_.end());
        out.note("station_left", {{"station", sta.to_string()}});
      }
      return true;
    }
    return false;
  }

  nlohmann::json associated_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& a : associated_) j.push_back(a.station.to_string());
    return j;
  }

 private:
  MacAddress bssid_;
  std::string ssid_;
  Channel channel_;
  std::vector<Association> associated_;
  std::uint16_t next_aid_ = 1;
};

struct DownlinkSchedule {
  /// Answer every uplink data frame from an associated client with one
  /// downlink frame.
  bool echo = true;
  /// Periodic unsolicited downlink frames per associated client per second.
  double rate_hz = 0.0;
};

struct ApConfig {
  std::string ssid;
  Channel channel{6};
  std::uint16_t beacon_interval_tu = kDefaultBeaconIntervalTu;
  DownlinkSchedule downlink;
};

/// A victim access point running ordinary behavior only.
class ApNode final : public Node {
 public:
  enum Timer : int { kBeacon = 1, kDownlink = 2 };

  ApNode(std::string name, MacAddress bssid, ApConfig config)
      : Node(std::move(name), bssid), config_(std::move(config)),
        core_(bssid, config_.ssid, config_.channel) {}

  NodeKind kind() const override { return NodeKind::AccessPoint; }
  const ApConfig& config() const { return config_; }
  const AccessPointCore& core() const { return core_; }

  SimTime beacon_period() const { return config_.beacon_interval_tu * kMicrosPerTu; }

  void start(Step& step, Outbox& out) override {
    core_.clear();
    tune(out, config_.channel, RadioMode::Receive);
    // Random beacon phase so co-located APs do not beacon in lockstep.
    arm(out, kBeacon, step.rng.uniform_int<SimTime>(0, beacon_period() - 1));
    if (config_.downlink.rate_hz > 0) arm(out, kDownlink, from_seconds(1.0 / config_.downlink.rate_hz));
  }

  void on_frame(Step&, const Frame& f, Outbox& out) override {
    if (core_.handle(f, next_sequence(), out)) return;
    const auto* data = f.as<Data>();
    if (data && f.receiver() == mac() && config_.downlink.echo && core_.is_associated(f.transmitter())) {
      out.send(make_data(f.transmitter(), mac(), mac(), data->port, data->payload, next_sequence()));
    }
  }

  nlohmann::json status() const override {
    return {{"ssid", config_.ssid},
            {"bssid", mac().to_string()},
            {"channel", config_.channel.index()},
            {"associated", core_.associated_json()}};
  }

 protected:
  void on_timer(Step& step, int timer, Outbox& out) override {
    if (timer == kBeacon) {
      out.send(core_.beacon(step.now, next_sequence(), config_.beacon_interval_tu));
      arm(out, kBeacon, beacon_period());
    } else if (timer == kDownlink) {
      for (const auto& a : core_.associated()) {
        out.send(make_data(a.station, mac(), mac(), 0, Bytes(16, 0x5A), next_sequence()));
      }
      arm(out, kDownlink, from_seconds(1.0 / config_.downlink.rate_hz));
    }
  }

 private:
  ApConfig config_;
  AccessPointCore core_;
};

}  // namespace wbsim

#endif  // WBSIM_ACCESS_POINT_HPP
