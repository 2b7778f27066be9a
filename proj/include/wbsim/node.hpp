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

// Common machinery for the node state machines.
//
// A node never touches the medium or the clock directly. Each handler call
// receives the current time and the node's private random stream, and
// returns what it wants done as an ordered list of actions in an Outbox:
// frames to transmit, radio retunes, timers to arm, and log notes. The engine
// applies them in order.

#ifndef WBSIM_NODE_HPP
#define WBSIM_NODE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbsim/frames.hpp"
#include "wbsim/medium.hpp"
#include "wbsim/rng.hpp"
#include "wbsim/sim_time.hpp"

namespace wbsim {

enum class NodeKind { AccessPoint, Client, Bot, Handler, TestBench };

inline std::string_view node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::AccessPoint: return "ap";
    case NodeKind::Client: return "client";
    case NodeKind::Bot: return "bot";
    case NodeKind::Handler: return "handler";
    case NodeKind::TestBench: return "testbench";
  }
  return "?";
}

struct SendAction {
  Frame frame;
};
struct TuneAction {
  RadioState radio;
};
struct TimerAction {
  int timer;
  std::uint64_t generation;
  SimTime delay;
};
struct NoteAction {
  std::string kind;
  nlohmann::json detail;
};

using Action = std::variant<SendAction, TuneAction, TimerAction, NoteAction>;

class Outbox {
 public:
  void send(Frame f) { actions_.emplace_back(SendAction{std::move(f)}); }
  void tune(RadioState r) { actions_.emplace_back(TuneAction{r}); }
  void timer(int timer, std::uint64_t generation, SimTime delay) {
    actions_.emplace_back(TimerAction{timer, generation, delay});
  }
  void note(std::string kind, nlohmann::json detail = nlohmann::json::object()) {
    actions_.emplace_back(NoteAction{std::move(kind), std::move(detail)});
  }

  const std::vector<Action>& actions() const { return actions_; }
  std::vector<Action> take() { return std::move(actions_); }
  bool empty() const { return actions_.empty(); }

  std::vector<Frame> frames() const {
    std::vector<Frame> out;
    for (const auto& a : actions_) {
      if (const auto* s = std::get_if<SendAction>(&a)) out.push_back(s->frame);
    }
    return out;
  }
  std::vector<NoteAction> notes() const {
    std::vector<NoteAction> out;
    for (const auto& a : actions_) {
      if (const auto* n = std::get_if<NoteAction>(&a)) out.push_back(*n);
    }
    return out;
  }

 private:
  std::vector<Action> actions_;
};

struct Step {
  SimTime now;
  Rng& rng;
};

class ClientNode;

class Node {
 public:
  Node(std::string name, MacAddress mac) : name_(std::move(name)), mac_(mac) {}
  virtual ~Node() = default;

  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  virtual NodeKind kind() const = 0;

  /// Called at boot and again on every power-on. Resets protocol state but
  /// keeps lifetime counters.
  virtual void start(Step& step, Outbox& out) = 0;
  virtual void on_frame(Step& step, const Frame& frame, Outbox& out) = 0;
  virtual void on_power_off(Step&, Outbox&) {}
  virtual nlohmann::json status() const = 0;

  /// Dispatches a timer unless it was re-armed or cancelled since.
  virtual void fire_timer(Step& step, int timer, std::uint64_t generation, Outbox& out) {
    auto it = generations_.find(timer);
    if (it == generations_.end() || it->second != generation) return;
    generations_.erase(it);
    on_timer(step, timer, out);
  }

  /// The station view of this node when it currently acts as a client.
  virtual const ClientNode* station() const { return nullptr; }

  const std::string& name() const { return name_; }
  const MacAddress& mac() const { return mac_; }
  const RadioState& radio() const { return radio_; }

 protected:
  virtual void on_timer(Step& step, int timer, Outbox& out) = 0;

  void arm(Outbox& out, int timer, SimTime delay) {
    const std::uint64_t gen = ++next_generation_;
    generations_[timer] = gen;
    out.timer(timer, gen, delay < 0 ? 0 : delay);
  }
  void disarm(int timer) { generations_.erase(timer); }
  void disarm_all() { generations_.clear(); }
  bool armed(int timer) const { return generations_.count(timer) != 0; }

  void tune(Outbox& out, Channel channel, RadioMode mode) {
    radio_ = RadioState{channel, mode};
    out.tune(radio_);
  }

  std::uint16_t next_sequence() {
    const std::uint16_t s = sequence_;
    sequence_ = static_cast<std::uint16_t>((sequence_ + 1) & 0x0FFF);
    return s;
  }

 private:
  std::string name_;
  MacAddress mac_;
  RadioState radio_;
  std::uint16_t sequence_ = 0;
  std::uint64_t next_generation_ = 0;
  std::map<int, std::uint64_t> generations_;
};

}  // namespace wbsim

#endif  // WBSIM_NODE_HPP
