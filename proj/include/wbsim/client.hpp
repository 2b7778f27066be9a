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

// Station behavior of an ordinary Wi-Fi client.
//
// The client keeps one beacon-cache entry per SSID, overwritten by every
// matching beacon it hears (a genuine beacon and a forged one are
// indistinguishable). Reconnection always starts from that cache.
//
//   Idle -> Scanning -> Authenticating -> Associating -> Connected
//                ^            |  ^                           |
//                |  timeout xR+1 |  backoff expiry            | deauth from link BSSID
//                +------------+  +------------- Backoff <----+
//
// A deauthentication from the BSSID the client is linked to (connected,
// joining, or backing off from) restarts the backoff, so a sustained flood
// keeps the client out for as long as it lasts.

#ifndef WBSIM_CLIENT_HPP
#define WBSIM_CLIENT_HPP

#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "wbsim/frames.hpp"
#include "wbsim/node.hpp"

namespace wbsim {

enum class ClientPhase { Idle, Scanning, Authenticating, Associating, Connected, Backoff };

inline std::string_view client_phase_name(ClientPhase p) {
  switch (p) {
    case ClientPhase::Idle: return "Idle";
    case ClientPhase::Scanning: return "Scanning";
    case ClientPhase::Authenticating: return "Authenticating";
    case ClientPhase::Associating: return "Associating";
    case ClientPhase::Connected: return "Connected";
    case ClientPhase::Backoff: return "Backoff";
  }
  return "?";
}

struct ClientConfig {
  std::string target_ssid;
  /// If set, beacons from any other BSSID are ignored for the cache.
  std::optional<MacAddress> required_bssid;
  /// Uplink data frames per second while connected (Poisson).
  double activity_rate = 1.0;
  double start_s = 0.0;
  double backoff_s = 1.0;
  double auth_timeout_s = 0.5;
  int retries = 3;
  int scan_dwell_ms = 200;
  /// Missing beacons for this long while connected counts as link loss.
  double link_timeout_s = 3.0;
};

struct CacheEntry {
  MacAddress bssid;
  Channel channel;
  friend bool operator==(const CacheEntry&, const CacheEntry&) = default;
};

class ClientNode : public Node {
 public:
  // Timer ids stay below 100; containing nodes use the range above.
  enum Timer : int { kStart = 1, kScanDwell, kJoinTimeout, kBackoff, kUplink, kLinkCheck };

  ClientNode(std::string name, MacAddress mac, ClientConfig config)
      : Node(std::move(name), mac), config_(std::move(config)) {}

  NodeKind kind() const override { return NodeKind::Client; }
  const ClientNode* station() const override { return this; }

  const ClientConfig& config() const { return config_; }
  ClientPhase phase() const { return phase_; }
  bool connected() const { return phase_ == ClientPhase::Connected; }
  const std::optional<MacAddress>& associated_bssid() const { return associated_; }
  const std::optional<MacAddress>& link_bssid() const { return link_; }
  const std::map<std::string, CacheEntry>& beacon_cache() const { return cache_; }
  int retry_count() const { return retry_count_; }
  std::uint64_t reconnect_attempts() const { return reconnect_attempts_; }
  std::uint64_t reconnect_successes() const { return reconnect_successes_; }
  bool ever_connected() const { return ever_connected_; }

  void start(Step& step, Outbox& out) override {
    disarm_all();
    phase_ = ClientPhase::Idle;
    cache_.clear();
    associated_.reset();
    link_.reset();
    retry_count_ = 0;
    tune(out, Channel(Channel::kMin), RadioMode::Off);
    (void)step;
    arm(out, kStart, from_seconds(config_.start_s));
  }

  void on_power_off(Step& step, Outbox& out) override {
    if (connected()) disconnect(step, out, "power_off");
    disarm_all();
  }

  void on_frame(Step& step, const Frame& f, Outbox& out) override {
    if (const auto* b = f.as<Beacon>()) {
      on_beacon(step, f, *b, out);
      return;
    }
    const bool to_me = f.receiver() == mac() || f.receiver().is_broadcast();
    if (!to_me) return;
    if (const auto* d = f.as<Deauth>()) {
      on_deauth(step, f, *d, out);
    } else if (const auto* a = f.as<AuthResponse>()) {
      if (phase_ == ClientPhase::Authenticating && link_ && f.transmitter() == *link_ && a->status == 0) {
        phase_ = ClientPhase::Associating;
        out.send(make_management(*link_, mac(), *link_, AssocRequest{config_.target_ssid}, next_sequence()));
        arm(out, kJoinTimeout, from_seconds(config_.auth_timeout_s));
      }
    } else if (const auto* r = f.as<AssocResponse>()) {
      if (phase_ == ClientPhase::Associating && link_ && f.transmitter() == *link_ && r->status == 0) {
        on_associated(step, out, r->association_id);
      }
    }
  }

  nlohmann::json status() const override {
    nlohmann::json cache = nlohmann::json::object();
    for (const auto& [ssid, e] : cache_) {
      cache[ssid] = {{"bssid", e.bssid.to_string()}, {"channel", e.channel.index()}};
    }
    return {{"phase", client_phase_name(phase_)},
            {"connected", connected()},
            {"bssid", associated_ ? nlohmann::json(associated_->to_string()) : nlohmann::json()},
            {"beacon_cache", cache},
            {"reconnect_attempts", reconnect_attempts_},
            {"reconnect_successes", reconnect_successes_}};
  }

 protected:
  void on_timer(Step& step, int timer, Outbox& out) override {
    switch (timer) {
      case kStart:
        begin_scan(out);
        break;
      case kScanDwell:
        if (phase_ == ClientPhase::Scanning) {
          scan_channel_ = scan_channel_ % Channel::kMax + 1;
          tune(out, Channel(scan_channel_), RadioMode::Receive);
          arm(out, kScanDwell, from_millis(config_.scan_dwell_ms));
        }
        break;
      case kJoinTimeout:
        if (phase_ == ClientPhase::Authenticating || phase_ == ClientPhase::Associating) {
          ++retry_count_;
          if (retry_count_ <= config_.retries) {
            attempt_join(step, out);
          } else {
            out.note("rescan", {{"after_attempts", retry_count_}});
            retry_count_ = 0;
            begin_scan(out);
          }
        }
        break;
      case kBackoff:
        if (phase_ == ClientPhase::Backoff) attempt_join(step, out);
        break;
      case kUplink:
        if (connected()) {
          out.send(make_data(*associated_, mac(), *associated_, 0, Bytes(16, 0xA5), next_sequence()));
          arm_uplink(step, out);
        }
        break;
      case kLinkCheck:
        if (connected()) {
          const SimTime limit = from_seconds(config_.link_timeout_s);
          if (step.now - last_beacon_ > limit) {
            disconnect(step, out, "beacon_loss");
            enter_backoff(out);
          } else {
            arm(out, kLinkCheck, last_beacon_ + limit + 1 - step.now);
          }
        }
        break;
      default:
        break;
    }
  }

 private:
  void on_beacon(Step& step, const Frame& f, const Beacon& b, Outbox& out) {
    if (b.ssid != config_.target_ssid) return;
    if (config_.required_bssid && *config_.required_bssid != f.bssid()) return;
    cache_[b.ssid] = CacheEntry{f.bssid(), b.ds_channel};
    if (connected() && f.bssid() == *associated_) last_beacon_ = step.now;
    if (phase_ == ClientPhase::Scanning) {
      retry_count_ = 0;
      attempt_join(step, out);
    }
  }

  void on_deauth(Step& step, const Frame& f, const Deauth& d, Outbox& out) {
    if (!link_ || f.transmitter() != *link_) return;
    switch (phase_) {
      case ClientPhase::Connected:
        disconnect(step, out, "deauth", d.reason_code);
        enter_backoff(out);
        break;
      case ClientPhase::Authenticating:
      case ClientPhase::Associating:
      case ClientPhase::Backoff:
        enter_backoff(out);
        break;
      default:
        break;
    }
  }

  void begin_scan(Outbox& out) {
    disarm(kJoinTimeout);
    disarm(kBackoff);
    phase_ = ClientPhase::Scanning;
    link_.reset();
    scan_channel_ = Channel::kMin;
    tune(out, Channel(scan_channel_), RadioMode::Receive);
    arm(out, kScanDwell, from_millis(config_.scan_dwell_ms));
  }

  /// One authentication attempt against whatever the cache holds right now.
  void attempt_join(Step& step, Outbox& out) {
    auto it = cache_.find(config_.target_ssid);
    if (it == cache_.end()) {
      begin_scan(out);
      return;
    }
    const CacheEntry entry = it->second;
    disarm(kScanDwell);
    disarm(kBackoff);
    phase_ = ClientPhase::Authenticating;
    link_ = entry.bssid;
    tune(out, entry.channel, RadioMode::Receive);
    const bool reconnect = ever_connected_;
    if (reconnect) ++reconnect_attempts_;
    out.note("auth_attempt", {{"bssid", entry.bssid.to_string()},
                              {"channel", entry.channel.index()},
                              {"reconnect", reconnect},
                              {"retry", retry_count_}});
    out.send(make_management(entry.bssid, mac(), entry.bssid, AuthRequest{0}, next_sequence()));
    arm(out, kJoinTimeout, from_seconds(config_.auth_timeout_s));
    (void)step;
  }

  void on_associated(Step& step, Outbox& out, std::uint16_t aid) {
    disarm(kJoinTimeout);
    const bool reconnect = ever_connected_;
    phase_ = ClientPhase::Connected;
    associated_ = link_;
    retry_count_ = 0;
    ever_connected_ = true;
    if (reconnect) ++reconnect_successes_;
    last_beacon_ = step.now;
    out.note("connected", {{"bssid", associated_->to_string()}, {"aid", aid}, {"reconnect", reconnect}});
    arm_uplink(step, out);
    arm(out, kLinkCheck, from_seconds(config_.link_timeout_s) + 1);
  }

  void disconnect(Step&, Outbox& out, const char* reason, std::uint16_t code = 0) {
    nlohmann::json detail = {{"bssid", associated_ ? associated_->to_string() : ""}, {"reason", reason}};
    if (code != 0) detail["reason_code"] = code;
    out.note("disconnected", detail);
    associated_.reset();
    disarm(kUplink);
    disarm(kLinkCheck);
  }

  void enter_backoff(Outbox& out) {
    disarm(kJoinTimeout);
    phase_ = ClientPhase::Backoff;
    arm(out, kBackoff, from_seconds(config_.backoff_s));
  }

  void arm_uplink(Step& step, Outbox& out) {
    if (config_.activity_rate <= 0) return;
    arm(out, kUplink, std::max<SimTime>(1, from_seconds(step.rng.exponential(config_.activity_rate))));
  }

  ClientConfig config_;
  ClientPhase phase_ = ClientPhase::Idle;
  std::map<std::string, CacheEntry> cache_;
  std::optional<MacAddress> associated_;
  std::optional<MacAddress> link_;
  int scan_channel_ = Channel::kMin;
  int retry_count_ = 0;
  SimTime last_beacon_ = 0;
  bool ever_connected_ = false;
  std::uint64_t reconnect_attempts_ = 0;
  std::uint64_t reconnect_successes_ = 0;
};

}  // namespace wbsim

#endif  // WBSIM_CLIENT_HPP
