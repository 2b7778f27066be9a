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

#ifndef WBSIM_BOT_HPP
#define WBSIM_BOT_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbsim/frames.hpp"
#include "wbsim/node.hpp"
#include "wbsim/task_protocol.hpp"

namespace wbsim {

enum class BotPhase { BootScan, JoiningHandler, AwaitingTask, Attacking };

inline std::string_view bot_phase_name(BotPhase p) {
  switch (p) {
    case BotPhase::BootScan: return "BootScan";
    case BotPhase::JoiningHandler: return "JoiningHandler";
    case BotPhase::AwaitingTask: return "AwaitingTask";
    case BotPhase::Attacking: return "Attacking";
  }
  return "?";
}

struct BotConfig {
  std::string handler_ssid = "esp_ap";
  int cycle_ms = 100;
  bool fake_beacons = true;
  int scan_dwell_ms = 200;
  double join_timeout_s = 0.5;
  /// Silence from the handler for this long while waiting drops back to scanning.
  double handler_timeout_s = 15.0;
  std::uint16_t reason_code = kDefaultDeauthReason;
};

/// Attack node. Waits on the handler's network for a task datagram, then
/// floods the task's clients with spoofed deauthentications and the task's
/// SSID with forged beacons until the task deadline.
class BotNode final : public Node {
 public:
  enum Timer : int { kScanDwell = 1, kJoinTimeout, kHandlerCheck, kCycle, kDeadline };

  BotNode(std::string name, MacAddress mac, BotConfig config)
      : Node(std::move(name), mac), config_(std::move(config)) {}

  NodeKind kind() const override { return NodeKind::Bot; }
  const BotConfig& config() const { return config_; }
  BotPhase phase() const { return phase_; }
  const std::optional<TaskPacket>& current_task() const { return task_; }
  const std::vector<Frame>& deauth_frames() const { return deauth_frames_; }
  SimTime attack_deadline() const { return deadline_; }
  std::uint64_t deauth_sent() const { return deauth_sent_; }
  std::uint64_t beacons_sent() const { return beacons_sent_; }
  std::uint64_t frames_sent() const { return deauth_sent_ + beacons_sent_; }
  const std::optional<MacAddress>& handler_bssid() const { return handler_bssid_; }

  void start(Step&, Outbox& out) override {
    disarm_all();
    task_.reset();
    deauth_frames_.clear();
    handler_bssid_.reset();
    begin_boot_scan(out);
  }

  void on_power_off(Step&, Outbox&) override { disarm_all(); }

  void on_frame(Step& step, const Frame& f, Outbox& out) override {
    if (const auto* b = f.as<Beacon>()) {
      if (b->ssid != config_.handler_ssid) return;
      if (phase_ == BotPhase::BootScan) {
        handler_bssid_ = f.bssid();
        handler_channel_ = b->ds_channel;
        join(out);
      } else if (phase_ == BotPhase::AwaitingTask && handler_bssid_ && f.bssid() == *handler_bssid_) {
        last_handler_seen_ = step.now;
      }
      return;
    }
    if (!handler_bssid_ || f.transmitter() != *handler_bssid_) return;
    if (f.as<AuthResponse>() && phase_ == BotPhase::JoiningHandler) {
      out.send(make_management(*handler_bssid_, mac(), *handler_bssid_,
                               AssocRequest{config_.handler_ssid}, next_sequence()));
      arm(out, kJoinTimeout, from_seconds(config_.join_timeout_s));
    } else if (const auto* r = f.as<AssocResponse>(); r && phase_ == BotPhase::JoiningHandler) {
      if (r->status != 0) return;
      disarm(kJoinTimeout);
      set_phase(out, BotPhase::AwaitingTask);
      out.note("joined", {{"handler", handler_bssid_->to_string()}, {"channel", handler_channel_.index()}});
      last_handler_seen_ = step.now;
      arm(out, kHandlerCheck, from_seconds(config_.handler_timeout_s));
    } else if (const auto* d = f.as<Data>(); d && d->port == kTaskPort) {
      if (phase_ == BotPhase::AwaitingTask || phase_ == BotPhase::Attacking) on_task_datagram(step, *d, out);
    }
  }

  nlohmann::json status() const override {
    return {{"phase", bot_phase_name(phase_)},
            {"frames_sent", frames_sent()},
            {"deauth_sent", deauth_sent_},
            {"beacons_sent", beacons_sent_},
            {"task", task_ ? task_to_json(*task_) : nlohmann::json()}};
  }

 protected:
  void on_timer(Step& step, int timer, Outbox& out) override {
    switch (timer) {
      case kScanDwell:
        if (phase_ == BotPhase::BootScan) {
          scan_channel_ = scan_channel_ % Channel::kMax + 1;
          tune(out, Channel(scan_channel_), RadioMode::Receive);
          arm(out, kScanDwell, from_millis(config_.scan_dwell_ms));
        }
        break;
      case kJoinTimeout:
        if (phase_ == BotPhase::JoiningHandler) begin_boot_scan(out);
        break;
      case kHandlerCheck:
        if (phase_ == BotPhase::AwaitingTask) {
          const SimTime limit = from_seconds(config_.handler_timeout_s);
          if (step.now - last_handler_seen_ > limit) {
            out.note("handler_lost");
            begin_boot_scan(out);
          } else {
            arm(out, kHandlerCheck, last_handler_seen_ + limit + 1 - step.now);
          }
        }
        break;
      case kCycle:
        if (phase_ == BotPhase::Attacking && step.now < deadline_) {
          emit_cycle(step, out);
          arm(out, kCycle, from_millis(config_.cycle_ms));
        }
        break;
      case kDeadline:
        if (phase_ == BotPhase::Attacking) end_attack(out, "deadline");
        break;
      default:
        break;
    }
  }

 private:
  void set_phase(Outbox& out, BotPhase p) {
    if (p == phase_) return;
    out.note("phase", {{"from", bot_phase_name(phase_)}, {"to", bot_phase_name(p)}});
    phase_ = p;
  }

  void begin_boot_scan(Outbox& out) {
    disarm(kJoinTimeout);
    disarm(kHandlerCheck);
    set_phase(out, BotPhase::BootScan);
    scan_channel_ = Channel::kMin;
    tune(out, Channel(scan_channel_), RadioMode::Receive);
    arm(out, kScanDwell, from_millis(config_.scan_dwell_ms));
  }

  void join(Outbox& out) {
    disarm(kScanDwell);
    set_phase(out, BotPhase::JoiningHandler);
    tune(out, handler_channel_, RadioMode::Receive);
    out.send(make_management(*handler_bssid_, mac(), *handler_bssid_, AuthRequest{0}, next_sequence()));
    arm(out, kJoinTimeout, from_seconds(config_.join_timeout_s));
  }

  void on_task_datagram(Step& step, const Data& d, Outbox& out) {
    TaskPacket task;
    try {
      task = decode_task(ByteView(d.payload));
    } catch (const Error& e) {
      out.note("task_malformed", {{"error", e.what()}});
      return;
    }
    if (task.is_stop()) {
      out.note("task_stop", task_to_json(task));
      if (phase_ == BotPhase::Attacking) end_attack(out, "stopped");
      return;
    }
    out.note("task_received", task_to_json(task));
    start_attack(step, std::move(task), out);
  }

  void start_attack(Step& step, TaskPacket task, Outbox& out) {
    disarm(kHandlerCheck);
    deauth_frames_.clear();
    deauth_frames_.reserve(task.client_macs.size());
    for (const auto& client : task.client_macs) {
      deauth_frames_.push_back(make_deauth(task.ap_mac, client, config_.reason_code, next_sequence()));
    }
    deadline_ = step.now + static_cast<SimTime>(task.duration_s) * kMicrosPerSecond;
    tune(out, task.channel, RadioMode::Receive);
    task_ = std::move(task);
    set_phase(out, BotPhase::Attacking);
    out.note("attack_start", {{"target", task_->ap_mac.to_string()},
                              {"channel", task_->channel.index()},
                              {"clients", task_->client_macs.size()},
                              {"deadline_us", deadline_}});
    arm(out, kDeadline, deadline_ - step.now);
    emit_cycle(step, out);
    arm(out, kCycle, from_millis(config_.cycle_ms));
  }

  void emit_cycle(Step& step, Outbox& out) {
    for (const auto& f : deauth_frames_) {
      out.send(f);
      ++deauth_sent_;
    }
    if (config_.fake_beacons) {
      Frame beacon = make_fake_beacon(task_->ssid, step.rng);
      std::get<Beacon>(beacon.body).timestamp = static_cast<std::uint64_t>(step.now);
      out.send(std::move(beacon));
      ++beacons_sent_;
    }
  }

  void end_attack(Outbox& out, const char* why) {
    disarm(kCycle);
    disarm(kDeadline);
    out.note("attack_end", {{"reason", why}, {"target", task_ ? task_->ap_mac.to_string() : ""}});
    task_.reset();
    deauth_frames_.clear();
    join(out);
  }

  BotConfig config_;
  BotPhase phase_ = BotPhase::BootScan;
  std::optional<MacAddress> handler_bssid_;
  Channel handler_channel_;
  int scan_channel_ = Channel::kMin;
  SimTime last_handler_seen_ = 0;
  std::optional<TaskPacket> task_;
  std::vector<Frame> deauth_frames_;
  SimTime deadline_ = 0;
  std::uint64_t deauth_sent_ = 0;
  std::uint64_t beacons_sent_ = 0;
};

}  // namespace wbsim

#endif  // WBSIM_BOT_HPP
