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

#ifndef WBSIM_TESTBENCH_HPP
#define WBSIM_TESTBENCH_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbsim/access_point.hpp"
#include "wbsim/client.hpp"
#include "wbsim/node.hpp"

namespace wbsim {

enum class BenchMode { StationMonitor, LocalAp };

struct TestBenchConfig {
  std::string target_ssid;
  std::optional<MacAddress> target_bssid;
  double tick_s = 1.0;
  double activity_rate = 2.0;
  std::string local_ssid = "testbench";
  Channel local_channel{1};
  int scan_dwell_ms = 200;
};

/// Connectivity monitor. Joins the predefined AP as a station and logs one
/// status record per tick. If no beacon from that AP is heard during the
/// first full channel sweep it becomes an AP itself and logs the devices
/// associated to it instead.
class TestBenchNode final : public Node {
 public:
  // Above the embedded client's timer range.
  enum Timer : int { kTick = 101, kProbe, kBeacon };

  struct Record {
    SimTime at;
    nlohmann::json detail;
  };

  TestBenchNode(std::string name, MacAddress mac, TestBenchConfig config)
      : Node(std::move(name), mac),
        config_(std::move(config)),
        client_(Node::name(), mac, station_config(config_)),
        core_(mac, config_.local_ssid, config_.local_channel) {}

  NodeKind kind() const override { return NodeKind::TestBench; }
  const ClientNode* station() const override { return mode_ == BenchMode::StationMonitor ? &client_ : nullptr; }
  BenchMode mode() const { return mode_; }
  const std::vector<Record>& connectivity_log() const { return log_; }
  const ClientNode& client() const { return client_; }
  const AccessPointCore& local_ap() const { return core_; }

  void start(Step& step, Outbox& out) override {
    disarm_all();
    mode_ = BenchMode::StationMonitor;
    core_.clear();
    client_.start(step, out);
    arm(out, kTick, from_seconds(config_.tick_s));
    arm(out, kProbe, from_millis(static_cast<std::int64_t>(config_.scan_dwell_ms) * Channel::kMax) + 1);
  }

  void on_power_off(Step& step, Outbox& out) override {
    if (mode_ == BenchMode::StationMonitor) client_.on_power_off(step, out);
    disarm_all();
  }

  void on_frame(Step& step, const Frame& f, Outbox& out) override {
    if (mode_ == BenchMode::StationMonitor) {
      client_.on_frame(step, f, out);
    } else {
      core_.handle(f, next_sequence(), out);
    }
  }

  void fire_timer(Step& step, int timer, std::uint64_t generation, Outbox& out) override {
    if (timer < kTick) {
      if (mode_ == BenchMode::StationMonitor) client_.fire_timer(step, timer, generation, out);
      return;
    }
    Node::fire_timer(step, timer, generation, out);
  }

  /// Builds the status record for `now` and appends it to the log.
  nlohmann::json testbench_tick(SimTime now) {
    nlohmann::json detail;
    if (mode_ == BenchMode::StationMonitor) {
      detail = {{"mode", "station"},
                {"connected", client_.connected()},
                {"reconnect_attempts", client_.reconnect_attempts()}};
    } else {
      detail = {{"mode", "local_ap"}, {"devices", core_.associated_json()}};
    }
    log_.push_back({now, detail});
    return detail;
  }

  nlohmann::json status() const override {
    nlohmann::json j = {{"mode", mode_ == BenchMode::StationMonitor ? "station" : "local_ap"}};
    if (mode_ == BenchMode::StationMonitor) j["station"] = client_.status();
    else j["devices"] = core_.associated_json();
    return j;
  }

 protected:
  void on_timer(Step& step, int timer, Outbox& out) override {
    switch (timer) {
      case kTick:
        out.note("bench", testbench_tick(step.now));
        arm(out, kTick, from_seconds(config_.tick_s));
        break;
      case kProbe:
        if (client_.beacon_cache().empty() && !client_.ever_connected()) become_local_ap(step, out);
        break;
      case kBeacon:
        out.send(core_.beacon(step.now, next_sequence(), kDefaultBeaconIntervalTu));
        arm(out, kBeacon, kDefaultBeaconIntervalTu * kMicrosPerTu);
        break;
      default:
        break;
    }
  }

 private:
  static ClientConfig station_config(const TestBenchConfig& c) {
    ClientConfig cc;
    cc.target_ssid = c.target_ssid;
    cc.required_bssid = c.target_bssid;
    cc.activity_rate = c.activity_rate;
    cc.scan_dwell_ms = c.scan_dwell_ms;
    return cc;
  }

  void become_local_ap(Step& step, Outbox& out) {
    Outbox discard;
    client_.on_power_off(step, discard);
    mode_ = BenchMode::LocalAp;
    out.note("bench_mode", {{"mode", "local_ap"}, {"ssid", config_.local_ssid}});
    tune(out, config_.local_channel, RadioMode::Receive);
    arm(out, kBeacon, step.rng.uniform_int<SimTime>(0, kDefaultBeaconIntervalTu * kMicrosPerTu - 1));
  }

  TestBenchConfig config_;
  ClientNode client_;
  AccessPointCore core_;
  BenchMode mode_ = BenchMode::StationMonitor;
  std::vector<Record> log_;
};

}  // namespace wbsim

#endif  // WBSIM_TESTBENCH_HPP
