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

// The command-and-control node.
//
// It runs its own network (default SSID "esp_ap") for the operator and the
// bots, and drives the attack pipeline:
//
//   scan   hop channels 1..13 collecting (ssid, bssid, channel) from beacons
//   select pick one inventory entry
//   discover  sit on the target channel in promiscuous mode and collect the
//             receivers of unicast data frames transmitted by the target
//   dispatch  broadcast the task datagram to the bots on UDP port 7777
//
// Only one task is live at a time; a new dispatch supersedes the old one.

#ifndef WBSIM_HANDLER_HPP
#define WBSIM_HANDLER_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbsim/access_point.hpp"
#include "wbsim/frames.hpp"
#include "wbsim/node.hpp"
#include "wbsim/task_protocol.hpp"

namespace wbsim {

enum class HandlerPhase { Serving, ScanningAps, DiscoveringClients, Dispatching, AttackRunning };

inline std::string_view handler_phase_name(HandlerPhase p) {
  switch (p) {
    case HandlerPhase::Serving: return "Serving";
    case HandlerPhase::ScanningAps: return "ScanningAps";
    case HandlerPhase::DiscoveringClients: return "DiscoveringClients";
    case HandlerPhase::Dispatching: return "Dispatching";
    case HandlerPhase::AttackRunning: return "AttackRunning";
  }
  return "?";
}

struct HandlerConfig {
  std::string ssid = "esp_ap";
  Channel channel{1};
  std::uint16_t beacon_interval_tu = kDefaultBeaconIntervalTu;
  std::uint32_t attack_duration_s = 30;
  double capture_window_s = 5.0;
  int scan_dwell_ms = 200;
  /// Batch mode only: scan at autoselect_at_s, then attack this SSID.
  std::optional<std::string> autoselect;
  double autoselect_at_s = 3.0;
};

struct ApInfo {
  std::string ssid;
  MacAddress bssid;
  Channel channel;
  friend bool operator==(const ApInfo&, const ApInfo&) = default;
};

inline nlohmann::json ap_info_json(const ApInfo& a) {
  return {{"ssid", a.ssid}, {"bssid", a.bssid.to_string()}, {"channel", a.channel.index()}};
}

struct DiscoveryResult {
  ApInfo target;
  SimTime started = 0;
  SimTime ended = 0;
  std::vector<MacAddress> clients;
};

struct AttackRecord {
  ApInfo target;
  SimTime start = 0;
  SimTime deadline = 0;
  std::uint32_t duration_s = 0;
  std::vector<MacAddress> clients;
};

struct HandlerCommand {
  enum class Type { Scan, Attack, Stop };
  Type type = Type::Scan;
  std::optional<MacAddress> bssid;
  std::optional<std::string> ssid;
  std::optional<std::uint32_t> duration_s;

  static HandlerCommand scan() { return {Type::Scan, {}, {}, {}}; }
  static HandlerCommand stop() { return {Type::Stop, {}, {}, {}}; }
  static HandlerCommand attack(MacAddress bssid, std::optional<std::uint32_t> duration = std::nullopt) {
    return {Type::Attack, bssid, {}, duration};
  }
  static HandlerCommand attack_ssid(std::string ssid, std::optional<std::uint32_t> duration = std::nullopt) {
    return {Type::Attack, {}, std::move(ssid), duration};
  }
};

inline std::string_view command_name(HandlerCommand::Type t) {
  switch (t) {
    case HandlerCommand::Type::Scan: return "scan";
    case HandlerCommand::Type::Attack: return "attack";
    case HandlerCommand::Type::Stop: return "stop";
  }
  return "?";
}

struct CommandResult {
  bool accepted = true;
  std::optional<Errc> error;
  std::string message;

  static CommandResult ok() { return {}; }
  static CommandResult reject(Errc code, std::string why) { return {false, code, std::move(why)}; }
};

class HandlerNode final : public Node {
 public:
  enum Timer : int { kBeacon = 1, kScanDwell, kCapture, kAttackDeadline, kAutoselect };

  HandlerNode(std::string name, MacAddress mac, HandlerConfig config)
      : Node(std::move(name), mac), config_(std::move(config)), core_(mac, config_.ssid, config_.channel) {}

  NodeKind kind() const override { return NodeKind::Handler; }
  const HandlerConfig& config() const { return config_; }
  HandlerPhase phase() const { return phase_; }
  const std::vector<ApInfo>& ap_inventory() const { return inventory_; }
  const std::vector<MacAddress>& clients_list() const { return clients_; }
  const std::optional<ApInfo>& selected_target() const { return target_; }
  std::uint64_t scans_completed() const { return scans_completed_; }
  const std::vector<DiscoveryResult>& discoveries() const { return discoveries_; }
  const std::vector<AttackRecord>& attacks() const { return attacks_; }
  bool attack_active() const { return attack_active_; }
  const AccessPointCore& network() const { return core_; }

  SimTime beacon_period() const { return config_.beacon_interval_tu * kMicrosPerTu; }

  void start(Step& step, Outbox& out) override {
    disarm_all();
    core_.clear();
    phase_ = HandlerPhase::Serving;
    attack_active_ = false;
    autoselect_pending_ = false;
    tune(out, config_.channel, RadioMode::Receive);
    arm(out, kBeacon, step.rng.uniform_int<SimTime>(0, beacon_period() - 1));
    if (config_.autoselect) arm(out, kAutoselect, from_seconds(config_.autoselect_at_s));
  }

  void on_power_off(Step&, Outbox&) override { disarm_all(); }

  void on_frame(Step& step, const Frame& f, Outbox& out) override {
    switch (phase_) {
      case HandlerPhase::ScanningAps:
        if (const auto* b = f.as<Beacon>()) record_beacon(f, *b);
        break;
      case HandlerPhase::DiscoveringClients:
        capture(f);
        break;
      case HandlerPhase::Serving:
      case HandlerPhase::AttackRunning:
        core_.handle(f, next_sequence(), out);
        break;
      case HandlerPhase::Dispatching:
        break;
    }
    (void)step;
  }

  CommandResult command(Step& step, const HandlerCommand& cmd, Outbox& out) {
    switch (cmd.type) {
      case HandlerCommand::Type::Scan:
        if (!idle()) return CommandResult::reject(Errc::ValidationError, "handler busy");
        begin_scan(out);
        return CommandResult::ok();
      case HandlerCommand::Type::Attack: {
        if (scans_completed_ == 0) return CommandResult::reject(Errc::NoTarget, "no scan completed");
        if (!idle()) return CommandResult::reject(Errc::ValidationError, "handler busy");
        const ApInfo* target = find_target(cmd);
        if (!target) return CommandResult::reject(Errc::UnknownTarget, "target not in inventory");
        begin_discovery(step, *target, cmd.duration_s.value_or(config_.attack_duration_s), out);
        return CommandResult::ok();
      }
      case HandlerCommand::Type::Stop:
        stop(step, out);
        return CommandResult::ok();
    }
    return CommandResult::ok();
  }

  /// Collects distinct (ssid, bssid, channel) tuples from every channel.
  /// Completion is asynchronous; see scans_completed().
  void handler_scan_aps(Outbox& out) { begin_scan(out); }

  /// Starts the promiscuous capture on `target`'s channel. Throws
  /// Error(UnknownTarget) if `target` is not in the inventory.
  void handler_discover_clients(Step& step, const MacAddress& target, Outbox& out) {
    auto it = std::find_if(inventory_.begin(), inventory_.end(),
                           [&](const ApInfo& a) { return a.bssid == target; });
    if (it == inventory_.end()) throw Error(Errc::UnknownTarget, target.to_string());
    begin_discovery(step, *it, config_.attack_duration_s, out);
  }

  /// Broadcasts the task for the selected target. Throws Error(NoTarget)
  /// when nothing has been selected.
  void handler_dispatch(Step& step, Outbox& out) {
    if (!target_) throw Error(Errc::NoTarget, "no target selected");
    dispatch(step, out);
  }

  TaskPacket current_task() const {
    if (!target_) throw Error(Errc::NoTarget, "no target selected");
    return TaskPacket{target_->channel, pending_duration_, target_->ssid, target_->bssid, clients_};
  }

  nlohmann::json status() const override {
    nlohmann::json inv = nlohmann::json::array();
    for (const auto& a : inventory_) inv.push_back(ap_info_json(a));
    nlohmann::json clients = nlohmann::json::array();
    for (const auto& c : clients_) clients.push_back(c.to_string());
    return {{"phase", handler_phase_name(phase_)},
            {"target", target_ ? ap_info_json(*target_) : nlohmann::json()},
            {"inventory", inv},
            {"scans_completed", scans_completed_},
            {"clients_list", clients},
            {"attack_active", attack_active_},
            {"bots", core_.associated_json()}};
  }

 protected:
  void on_timer(Step& step, int timer, Outbox& out) override {
    switch (timer) {
      case kBeacon:
        if (idle()) out.send(core_.beacon(step.now, next_sequence(), config_.beacon_interval_tu));
        arm(out, kBeacon, beacon_period());
        break;
      case kAutoselect:
        if (idle()) {
          autoselect_pending_ = true;
          begin_scan(out);
        }
        break;
      case kScanDwell:
        if (phase_ != HandlerPhase::ScanningAps) break;
        if (scan_channel_ < Channel::kMax) {
          ++scan_channel_;
          tune(out, Channel(scan_channel_), RadioMode::Receive);
          arm(out, kScanDwell, from_millis(config_.scan_dwell_ms));
        } else {
          finish_scan(step, out);
        }
        break;
      case kCapture:
        if (phase_ == HandlerPhase::DiscoveringClients) finish_discovery(step, out);
        break;
      case kAttackDeadline:
        if (attack_active_) {
          attack_active_ = false;
          out.note("attack_finished", {{"target", attacks_.back().target.bssid.to_string()}});
          if (phase_ == HandlerPhase::AttackRunning) set_phase(out, HandlerPhase::Serving);
        }
        break;
      default:
        break;
    }
  }

 private:
  bool idle() const { return phase_ == HandlerPhase::Serving || phase_ == HandlerPhase::AttackRunning; }

  void set_phase(Outbox& out, HandlerPhase p) {
    if (p == phase_) return;
    out.note("phase", {{"from", handler_phase_name(phase_)}, {"to", handler_phase_name(p)}});
    phase_ = p;
  }

  void return_home(Outbox& out) {
    tune(out, config_.channel, RadioMode::Receive);
    set_phase(out, attack_active_ ? HandlerPhase::AttackRunning : HandlerPhase::Serving);
  }

  const ApInfo* find_target(const HandlerCommand& cmd) const {
    for (const auto& a : inventory_) {
      if (cmd.bssid && a.bssid == *cmd.bssid) return &a;
      if (!cmd.bssid && cmd.ssid && a.ssid == *cmd.ssid) return &a;
    }
    return nullptr;
  }

  void begin_scan(Outbox& out) {
    set_phase(out, HandlerPhase::ScanningAps);
    staging_.clear();
    scan_channel_ = Channel::kMin;
    tune(out, Channel(scan_channel_), RadioMode::Receive);
    arm(out, kScanDwell, from_millis(config_.scan_dwell_ms));
  }

  void record_beacon(const Frame& f, const Beacon& b) {
    if (b.ssid == config_.ssid || f.bssid() == mac()) return;
    ApInfo info{b.ssid, f.bssid(), b.ds_channel};
    if (std::find(staging_.begin(), staging_.end(), info) == staging_.end()) staging_.push_back(info);
  }

  void finish_scan(Step& step, Outbox& out) {
    inventory_ = staging_;
    ++scans_completed_;
    nlohmann::json inv = nlohmann::json::array();
    for (const auto& a : inventory_) inv.push_back(ap_info_json(a));
    out.note("scan_done", {{"inventory", inv}});
    return_home(out);
    if (autoselect_pending_) {
      autoselect_pending_ = false;
      const ApInfo* target = find_target(HandlerCommand::attack_ssid(*config_.autoselect));
      if (!target) {
        out.note("autoselect_failed", {{"ssid", *config_.autoselect}});
        return;
      }
      begin_discovery(step, *target, config_.attack_duration_s, out);
    }
  }

  void begin_discovery(Step& step, const ApInfo& target, std::uint32_t duration, Outbox& out) {
    target_ = target;
    pending_duration_ = duration;
    clients_.clear();
    capture_started_ = step.now;
    set_phase(out, HandlerPhase::DiscoveringClients);
    tune(out, target.channel, RadioMode::Promiscuous);
    out.note("discovery_started", {{"target", ap_info_json(target)},
                                   {"window_s", config_.capture_window_s},
                                   {"duration_s", duration}});
    arm(out, kCapture, from_seconds(config_.capture_window_s));
  }

  /// A frame is evidence of a client only if the target AP sent it, as data,
  /// to a unicast receiver.
  void capture(const Frame& f) {
    if (!target_ || !f.as<Data>()) return;
    if (f.transmitter() != target_->bssid) return;
    if (classify_address(f.receiver()) != AddressClass::Unicast) return;
    if (std::find(clients_.begin(), clients_.end(), f.receiver()) == clients_.end()) {
      clients_.push_back(f.receiver());
    }
  }

  void finish_discovery(Step& step, Outbox& out) {
    nlohmann::json clients = nlohmann::json::array();
    for (const auto& c : clients_) clients.push_back(c.to_string());
    out.note("clients_discovered", {{"target", target_->bssid.to_string()}, {"clients", clients}});
    discoveries_.push_back({*target_, capture_started_, step.now, clients_});
    dispatch(step, out);
  }

  void send_task(const Bytes& payload, std::optional<Channel> attack_channel, Outbox& out) {
    const Frame datagram = make_data(MacAddress::broadcast(), mac(), mac(), kTaskPort, payload);
    // Bots already attacking sit on the old target's channel.
    if (attack_channel && *attack_channel != config_.channel) {
      tune(out, *attack_channel, RadioMode::Receive);
      Frame copy = datagram;
      copy.header.sequence = next_sequence();
      out.send(std::move(copy));
    }
    tune(out, config_.channel, RadioMode::Receive);
    Frame copy = datagram;
    copy.header.sequence = next_sequence();
    out.send(std::move(copy));
  }

  void dispatch(Step& step, Outbox& out) {
    set_phase(out, HandlerPhase::Dispatching);
    const TaskPacket task = current_task();
    const std::string text = encode_task_text(task);
    std::optional<Channel> previous;
    if (attack_active_) previous = attacks_.back().target.channel;
    send_task(to_bytes(text), previous, out);
    out.note("dispatch", {{"task", task_to_json(task)}, {"payload", text}});
    attack_active_ = true;
    attacks_.push_back({*target_, step.now, step.now + static_cast<SimTime>(task.duration_s) * kMicrosPerSecond,
                        task.duration_s, clients_});
    arm(out, kAttackDeadline, attacks_.back().deadline - step.now);
    set_phase(out, HandlerPhase::AttackRunning);
  }

  void stop(Step&, Outbox& out) {
    if (phase_ == HandlerPhase::DiscoveringClients) {
      disarm(kCapture);
      out.note("discovery_cancelled", {{"target", target_->bssid.to_string()}});
    } else if (phase_ == HandlerPhase::ScanningAps) {
      disarm(kScanDwell);
      autoselect_pending_ = false;
    }
    if (attack_active_) {
      const AttackRecord& last = attacks_.back();
      const TaskPacket stop_task{last.target.channel, 0, last.target.ssid, last.target.bssid, {}};
      send_task(encode_task(stop_task), last.target.channel, out);
      out.note("stop", {{"target", last.target.bssid.to_string()}});
      attack_active_ = false;
      disarm(kAttackDeadline);
    }
    return_home(out);
  }

  HandlerConfig config_;
  AccessPointCore core_;
  HandlerPhase phase_ = HandlerPhase::Serving;
  std::vector<ApInfo> inventory_;
  std::vector<ApInfo> staging_;
  std::uint64_t scans_completed_ = 0;
  int scan_channel_ = Channel::kMin;
  bool autoselect_pending_ = false;
  std::optional<ApInfo> target_;
  std::uint32_t pending_duration_ = 0;
  std::vector<MacAddress> clients_;
  SimTime capture_started_ = 0;
  bool attack_active_ = false;
  std::vector<DiscoveryResult> discoveries_;
  std::vector<AttackRecord> attacks_;
};

}  // namespace wbsim

#endif  // WBSIM_HANDLER_HPP
