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

// A simulator driven against the wall clock.
//
// Only the loop thread touches the Simulator. Other threads talk to it
// through the command queue (answered with a future once the command has
// been applied at a step boundary), read immutable snapshots, and follow the
// event stream. Tests can skip the thread and call step() themselves.

#ifndef WBSIM_LIVE_SESSION_HPP
#define WBSIM_LIVE_SESSION_HPP

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <future>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbsim/simulator.hpp"

namespace wbsim {

class LiveSession {
 public:
  static constexpr SimTime kStep = 10'000;
  static constexpr std::size_t kEventBacklog = 20'000;

  explicit LiveSession(ScenarioConfig config)
      : time_scale_(config.time_scale), sim_(std::move(config), RunMode::Live) {
    sim_.log().set_listener([this](const EventRecord& r) { buffer_event(r); });
    sim_.boot();
    publish();
  }

  ~LiveSession() { stop(); }

  LiveSession(const LiveSession&) = delete;
  LiveSession& operator=(const LiveSession&) = delete;

  double time_scale() const { return time_scale_; }

  /// Queues a command for the next step boundary.
  std::future<CommandResult> submit(HandlerCommand cmd) {
    std::promise<CommandResult> p;
    auto f = p.get_future();
    {
      std::lock_guard lock(queue_mu_);
      pending_.emplace_back(std::move(cmd), std::move(p));
    }
    return f;
  }

  /// One 10 ms sim-step: apply queued commands at the current boundary,
  /// then advance. Must only be called from one thread at a time.
  void step() {
    std::deque<std::pair<HandlerCommand, std::promise<CommandResult>>> batch;
    {
      std::lock_guard lock(queue_mu_);
      batch.swap(pending_);
    }
    for (auto& [cmd, promise] : batch) {
      if (sim_.finished()) {
        promise.set_value(CommandResult::reject(Errc::ValidationError, "simulation reached its horizon"));
        continue;
      }
      try {
        promise.set_value(sim_.execute(cmd));
      } catch (...) {
        promise.set_exception(std::current_exception());
      }
    }
    if (!sim_.finished()) sim_.run_until(sim_.now() + kStep);
    publish();
  }

  /// Steps until sim-time reaches `t` (rounded up to a step boundary).
  void step_to(SimTime t) {
    while (sim_.now() < t && !sim_.finished()) step();
  }

  /// Starts the wall-clock loop thread.
  void start() {
    if (thread_.joinable()) return;
    running_ = true;
    thread_ = std::thread([this] { loop(); });
  }

  void stop() {
    running_ = false;
    if (thread_.joinable()) thread_.join();
    // Nobody will apply what is left.
    std::lock_guard lock(queue_mu_);
    for (auto& [cmd, promise] : pending_) {
      promise.set_value(CommandResult::reject(Errc::ValidationError, "session stopped"));
    }
    pending_.clear();
    events_cv_.notify_all();
  }

  bool running() const { return running_; }

  struct Snapshot {
    SimTime now = 0;
    bool finished = false;
    nlohmann::json status;
    nlohmann::json aps;
  };

  std::shared_ptr<const Snapshot> snapshot() const {
    std::lock_guard lock(snap_mu_);
    return snapshot_;
  }

  /// Serialized records with index >= `from`, waiting up to `timeout` for
  /// at least one. Returns the index to ask for next.
  std::size_t events_since(std::size_t from, std::vector<std::string>& out,
                           std::chrono::milliseconds timeout = std::chrono::milliseconds(0)) const {
    std::unique_lock lock(events_mu_);
    if (timeout.count() > 0) {
      events_cv_.wait_for(lock, timeout, [&] { return events_end() > from || !running_; });
    }
    const std::size_t begin = std::max(from, events_base_);
    for (std::size_t i = begin; i < events_end(); ++i) out.push_back(events_[i - events_base_]);
    return std::max(from, events_end());
  }

  /// Direct access for tests driving step() by hand. Not safe while the
  /// loop thread runs.
  const Simulator& simulator() const { return sim_; }

 private:
  void loop() {
    using clock = std::chrono::steady_clock;
    const auto origin = clock::now();
    const SimTime sim_origin = sim_.now();
    const double wall_per_step_us = static_cast<double>(kStep) / time_scale_;
    while (running_) {
      step();
      const double done = static_cast<double>(sim_.now() - sim_origin) / static_cast<double>(kStep);
      const auto target = origin + std::chrono::microseconds(static_cast<std::int64_t>(done * wall_per_step_us));
      // Short naps so stop() is never held up by a slow time scale.
      while (running_ && clock::now() < target) {
        std::this_thread::sleep_for(std::min<clock::duration>(target - clock::now(), std::chrono::milliseconds(20)));
      }
    }
  }

  void publish() {
    auto s = std::make_shared<Snapshot>();
    s->now = sim_.now();
    s->finished = sim_.finished();
    s->status = sim_.status();
    s->aps = nlohmann::json::array();
    for (const auto& a : sim_.handler().ap_inventory()) s->aps.push_back(ap_info_json(a));
    s->status["scans_completed"] = sim_.handler().scans_completed();
    std::lock_guard lock(snap_mu_);
    snapshot_ = std::move(s);
  }

  void buffer_event(const EventRecord& r) {
    {
      std::lock_guard lock(events_mu_);
      events_.push_back(record_to_json(r).dump());
      if (events_.size() > kEventBacklog) {
        events_.pop_front();
        ++events_base_;
      }
    }
    events_cv_.notify_all();
  }

  std::size_t events_end() const { return events_base_ + events_.size(); }

  double time_scale_;
  Simulator sim_;
  std::atomic<bool> running_{false};
  std::thread thread_;

  std::mutex queue_mu_;
  std::deque<std::pair<HandlerCommand, std::promise<CommandResult>>> pending_;

  mutable std::mutex snap_mu_;
  std::shared_ptr<const Snapshot> snapshot_;

  mutable std::mutex events_mu_;
  mutable std::condition_variable events_cv_;
  std::deque<std::string> events_;
  std::size_t events_base_ = 0;
};

}  // namespace wbsim

#endif  // WBSIM_LIVE_SESSION_HPP
