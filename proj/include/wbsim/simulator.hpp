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

// The event loop.
//
// Events are totally ordered by (time, class, insertion sequence). Class 0
// holds the initial power-on, operator commands and world events so that, at
// a shared instant, they take effect before any frame or timer. Everything
// else is class 1 and runs in insertion order. Nothing here reads the wall clock, so a scenario
// and a seed fully determine the log.

#ifndef WBSIM_SIMULATOR_HPP
#define WBSIM_SIMULATOR_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbsim/access_point.hpp"
#include "wbsim/bot.hpp"
#include "wbsim/client.hpp"
#include "wbsim/event_log.hpp"
#include "wbsim/handler.hpp"
#include "wbsim/medium.hpp"
#include "wbsim/metrics.hpp"
#include "wbsim/scenario.hpp"
#include "wbsim/testbench.hpp"

namespace wbsim {

enum class RunMode { Batch, Live };

inline std::unique_ptr<Node> make_node(const NodeConfig& c, RunMode mode) {
  switch (c.kind) {
    case NodeKind::AccessPoint:
      return std::make_unique<ApNode>(c.name, c.mac, std::get<ApConfig>(c.params));
    case NodeKind::Client:
      return std::make_unique<ClientNode>(c.name, c.mac, std::get<ClientConfig>(c.params));
    case NodeKind::Bot:
      return std::make_unique<BotNode>(c.name, c.mac, std::get<BotConfig>(c.params));
    case NodeKind::Handler: {
      HandlerConfig hc = std::get<HandlerConfig>(c.params);
      // The operator drives a live session.
      if (mode == RunMode::Live) hc.autoselect.reset();
      return std::make_unique<HandlerNode>(c.name, c.mac, hc);
    }
    case NodeKind::TestBench:
      return std::make_unique<TestBenchNode>(c.name, c.mac, std::get<TestBenchConfig>(c.params));
  }
  throw Error(Errc::ValidationError, "unknown node kind");
}

class Simulator {
 public:
  explicit Simulator(ScenarioConfig config, RunMode mode = RunMode::Batch)
      : config_(std::move(config)),
        mode_(mode),
        medium_(MediumConfig{config_.range_m, config_.loss_probability, 1}, derive_seed(config_.seed, "medium")),
        horizon_(from_seconds(config_.horizon_s)) {
    for (const auto& nc : config_.nodes) {
      Slot s;
      s.node = make_node(nc, mode_);
      s.rng = Rng(derive_seed(config_.seed, nc.mac.to_string()));
      s.id = medium_.add_node(nc.mac, nc.position);
      if (nc.kind == NodeKind::Client || nc.kind == NodeKind::TestBench) {
        s.station_index = metrics_.add_station(nc.name, nc.mac);
      }
      if (nc.kind == NodeKind::Handler) handler_ = static_cast<HandlerNode*>(s.node.get());
      slots_.push_back(std::move(s));
    }
    if (!handler_) throw Error(Errc::ValidationError, "scenario has no handler");
    for (NodeId id = 0; id < slots_.size(); ++id) push(0, 0, StartEv{id});
    for (const auto& w : config_.events) push(from_seconds(w.at_s), 0, WorldEv{w});
    for (const auto& c : config_.commands) push(from_seconds(c.at_s), 0, CommandEv{c.command});
  }

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  SimTime now() const { return now_; }
  SimTime horizon() const { return horizon_; }
  RunMode mode() const { return mode_; }
  bool finished() const { return now_ >= horizon_; }
  const ScenarioConfig& config() const { return config_; }
  const EventLog& log() const { return log_; }
  EventLog& log() { return log_; }
  const Medium& medium() const { return medium_; }
  const HandlerNode& handler() const { return *handler_; }
  std::size_t node_count() const { return slots_.size(); }
  const Node& node(NodeId id) const { return *slots_.at(id).node; }
  bool powered(NodeId id) const { return slots_.at(id).powered; }

  const Node* find(std::string_view name_or_mac) const {
    for (const auto& s : slots_) {
      if (s.node->name() == name_or_mac || s.node->mac().to_string() == name_or_mac) return s.node.get();
    }
    return nullptr;
  }
  template <typename T>
  const T& get(std::string_view name_or_mac) const {
    const Node* n = find(name_or_mac);
    if (!n) throw Error(Errc::UnknownNode, std::string(name_or_mac));
    const T* t = dynamic_cast<const T*>(n);
    if (!t) throw Error(Errc::UnknownNode, std::string(name_or_mac) + " has another kind");
    return *t;
  }

  /// Queues an operator command. It takes effect at `at` (default: now),
  /// before anything else scheduled for that instant.
  void submit(const HandlerCommand& cmd, std::optional<SimTime> at = std::nullopt) {
    const SimTime t = at.value_or(now_);
    if (t < now_) throw Error(Errc::ValidationError, "command scheduled in the past");
    push(t, 0, CommandEv{cmd});
  }

  /// Powers every node on. run() and run_until() do this on their own; a
  /// caller that executes commands before running must boot first.
  void boot() {
    while (!queue_.empty() && queue_.top().at == 0 && std::holds_alternative<StartEv>(queue_.top().payload)) {
      step_one();
    }
  }

  /// Runs the command immediately at the current instant and reports whether
  /// the handler accepted it.
  CommandResult execute(const HandlerCommand& cmd) { return run_command(cmd); }

  /// Processes every event strictly before `t` and advances the clock to
  /// `t`, capped at the horizon.
  void run_until(SimTime t) {
    t = std::min(t, horizon_);
    while (!queue_.empty() && queue_.top().at < t) step_one();
    if (t > now_) now_ = t;
  }

  /// Runs to the horizon, including events scheduled exactly at it.
  void run() {
    while (!queue_.empty() && queue_.top().at <= horizon_) step_one();
    now_ = std::max(now_, horizon_);
  }

  Metrics metrics() const {
    std::vector<BotMetrics> bots;
    for (const auto& s : slots_) {
      if (const auto* b = dynamic_cast<const BotNode*>(s.node.get())) {
        bots.push_back({b->name(), b->mac(), b->deauth_sent(), b->beacons_sent()});
      }
    }
    return metrics_.compute(now_, handler_, std::move(bots));
  }

  const MetricsCollector& collector() const { return metrics_; }

  /// Compact state summary for the control API.
  nlohmann::json status() const {
    const Metrics m = metrics();
    nlohmann::json clients = nlohmann::json::array();
    for (const auto& s : slots_) {
      if (!s.station_index) continue;
      const ClientNode* sta = s.powered ? s.node->station() : nullptr;
      clients.push_back({{"mac", s.node->mac().to_string()},
                         {"name", s.node->name()},
                         {"connected", sta && sta->connected()},
                         {"downtime_s", m.clients[*s.station_index].total_downtime_s}});
    }
    nlohmann::json bots = nlohmann::json::array();
    for (const auto& s : slots_) {
      const auto* b = dynamic_cast<const BotNode*>(s.node.get());
      if (!b) continue;
      bots.push_back({{"mac", b->mac().to_string()},
                      {"name", b->name()},
                      {"phase", s.powered ? std::string(bot_phase_name(b->phase())) : "Off"},
                      {"frames_sent", b->frames_sent()}});
    }
    const auto& target = handler_->selected_target();
    return {{"sim_time", to_seconds(now_)},
            {"phase", handler_phase_name(handler_->phase())},
            {"target", target ? ap_info_json(*target) : nlohmann::json()},
            {"attack_active", handler_->attack_active()},
            {"clients", clients},
            {"bots", bots}};
  }

 private:
  struct StartEv {
    NodeId node;
  };
  struct DeliverEv {
    NodeId node;
    std::shared_ptr<const Frame> frame;
  };
  struct TimerEv {
    NodeId node;
    std::uint64_t incarnation;
    int timer;
    std::uint64_t generation;
  };
  struct WorldEv {
    WorldEvent event;
  };
  struct CommandEv {
    HandlerCommand command;
  };
  using Payload = std::variant<StartEv, DeliverEv, TimerEv, WorldEv, CommandEv>;

  struct Queued {
    SimTime at;
    int cls;
    std::uint64_t seq;
    Payload payload;
  };
  struct Later {
    bool operator()(const Queued& a, const Queued& b) const {
      if (a.at != b.at) return a.at > b.at;
      if (a.cls != b.cls) return a.cls > b.cls;
      return a.seq > b.seq;
    }
  };

  struct Slot {
    std::unique_ptr<Node> node;
    Rng rng;
    NodeId id = 0;
    bool powered = true;
    std::uint64_t incarnation = 0;
    std::optional<std::size_t> station_index;
  };

  void push(SimTime at, int cls, Payload p) {
    if (at < now_) throw Error(Errc::ValidationError, "event scheduled in the past");
    queue_.push(Queued{at, cls, next_seq_++, std::move(p)});
  }

  void step_one() {
    Queued q = queue_.top();
    queue_.pop();
    now_ = std::max(now_, q.at);
    std::visit([this](auto& ev) { handle(ev); }, q.payload);
  }

  void handle(StartEv& ev) {
    Slot& s = slots_[ev.node];
    if (!s.powered) return;
    Outbox out;
    Step step{now_, s.rng};
    s.node->start(step, out);
    apply(s, out);
  }

  void handle(DeliverEv& ev) {
    Slot& s = slots_[ev.node];
    if (!s.powered) return;
    Outbox out;
    Step step{now_, s.rng};
    s.node->on_frame(step, *ev.frame, out);
    apply(s, out);
  }

  void handle(TimerEv& ev) {
    Slot& s = slots_[ev.node];
    if (!s.powered || ev.incarnation != s.incarnation) return;
    Outbox out;
    Step step{now_, s.rng};
    s.node->fire_timer(step, ev.timer, ev.generation, out);
    apply(s, out);
  }

  void handle(WorldEv& ev) {
    const WorldEvent& w = ev.event;
    Slot* s = nullptr;
    for (auto& slot : slots_) {
      if (slot.node->name() == w.node || slot.node->mac().to_string() == w.node) s = &slot;
    }
    if (!s) throw Error(Errc::UnknownNode, w.node);
    nlohmann::json detail;
    switch (w.action) {
      case WorldEvent::Action::PowerOff: {
        detail = {{"action", "power_off"}};
        log_.append(now_, s->node->name(), "world", detail);
        if (!s->powered) return;
        Outbox out;
        Step step{now_, s->rng};
        s->node->on_power_off(step, out);
        apply(*s, out);
        s->powered = false;
        ++s->incarnation;
        medium_.set_radio(s->id, RadioState{medium_.radio(s->id).channel, RadioMode::Off});
        observe(*s);
        return;
      }
      case WorldEvent::Action::PowerOn: {
        detail = {{"action", "power_on"}};
        log_.append(now_, s->node->name(), "world", detail);
        if (s->powered) return;
        s->powered = true;
        ++s->incarnation;
        Outbox out;
        Step step{now_, s->rng};
        s->node->start(step, out);
        apply(*s, out);
        return;
      }
      case WorldEvent::Action::Move:
        medium_.set_position(s->id, w.position);
        log_.append(now_, s->node->name(), "world",
                    {{"action", "move"}, {"position", {w.position.x, w.position.y}}});
        return;
    }
  }

  void handle(CommandEv& ev) { run_command(ev.command); }

  CommandResult run_command(const HandlerCommand& cmd) {
    Slot& s = slot_of(handler_);
    nlohmann::json detail = {{"command", command_name(cmd.type)}};
    if (cmd.bssid) detail["bssid"] = cmd.bssid->to_string();
    if (cmd.ssid) detail["ssid"] = *cmd.ssid;
    if (cmd.duration_s) detail["duration_s"] = *cmd.duration_s;
    CommandResult r;
    Outbox out;
    if (!s.powered) {
      r = CommandResult::reject(Errc::RadioOff, "handler is powered off");
    } else {
      Step step{now_, s.rng};
      r = handler_->command(step, cmd, out);
    }
    detail["accepted"] = r.accepted;
    if (r.error) detail["error"] = errc_name(*r.error);
    if (!r.message.empty()) detail["message"] = r.message;
    log_.append(now_, handler_->name(), "command", detail);
    apply(s, out);
    return r;
  }

  Slot& slot_of(const Node* n) {
    for (auto& s : slots_) {
      if (s.node.get() == n) return s;
    }
    throw Error(Errc::UnknownNode, "node not in simulation");
  }

  void apply(Slot& s, Outbox& out) {
    for (auto& action : out.take()) {
      if (auto* send = std::get_if<SendAction>(&action)) {
        transmit(s, std::move(send->frame));
      } else if (auto* tune = std::get_if<TuneAction>(&action)) {
        medium_.set_radio(s.id, tune->radio);
      } else if (auto* timer = std::get_if<TimerAction>(&action)) {
        push(now_ + timer->delay, 1, TimerEv{s.id, s.incarnation, timer->timer, timer->generation});
      } else if (auto* note = std::get_if<NoteAction>(&action)) {
        log_.append(now_, s.node->name(), note->kind, std::move(note->detail));
      }
    }
    observe(s);
  }

  void transmit(Slot& s, Frame frame) {
    const TransmitResult r = medium_.transmit(s.id, frame, now_);
    auto shared = std::make_shared<const Frame>(std::move(frame));
    nlohmann::json delivered = nlohmann::json::array();
    nlohmann::json dropped = nlohmann::json::array();
    for (const auto& d : r.delivered) {
      delivered.push_back(slots_[d.receiver].node->name());
      push(d.at, 1, DeliverEv{d.receiver, shared});
    }
    for (NodeId id : r.dropped) dropped.push_back(slots_[id].node->name());
    log_.append(now_, s.node->name(), "tx",
                {{"frame", frame_to_json(*shared)},
                 {"channel", medium_.radio(s.id).channel.index()},
                 {"delivered", delivered},
                 {"dropped", dropped}});
  }

  void observe(const Slot& s) {
    if (!s.station_index) return;
    metrics_.observe(*s.station_index, s.powered ? s.node->station() : nullptr, now_);
  }

  ScenarioConfig config_;
  RunMode mode_;
  Medium medium_;
  SimTime horizon_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::vector<Slot> slots_;
  HandlerNode* handler_ = nullptr;
  std::priority_queue<Queued, std::vector<Queued>, Later> queue_;
  EventLog log_;
  MetricsCollector metrics_;
};

struct RunResult {
  EventLog log;
  Metrics metrics;
};

/// One batch run from start to horizon.
inline RunResult run_scenario(const ScenarioConfig& config) {
  Simulator sim(config, RunMode::Batch);
  sim.run();
  return {sim.log(), sim.metrics()};
}

}  // namespace wbsim

#endif  // WBSIM_SIMULATOR_HPP
