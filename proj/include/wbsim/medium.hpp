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

// Channelized broadcast medium with a disc propagation model.
//
// A transmission reaches every other node on the sender's channel within
// range_m (inclusive) whose radio mode admits the frame. Each such delivery is
// then dropped independently with probability loss. No collisions, capture or
// backoff are modeled; delivery happens a fixed propagation delay after
// emission.

#ifndef WBSIM_MEDIUM_HPP
#define WBSIM_MEDIUM_HPP

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "wbsim/error.hpp"
#include "wbsim/frames.hpp"
#include "wbsim/mac_address.hpp"
#include "wbsim/rng.hpp"
#include "wbsim/sim_time.hpp"

namespace wbsim {

using NodeId = std::size_t;

struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

enum class RadioMode { Off, Receive, Promiscuous };

inline std::string_view radio_mode_name(RadioMode m) {
  switch (m) {
    case RadioMode::Off: return "off";
    case RadioMode::Receive: return "receive";
    case RadioMode::Promiscuous: return "promiscuous";
  }
  return "?";
}

struct RadioState {
  Channel channel;
  RadioMode mode = RadioMode::Off;
  friend bool operator==(const RadioState&, const RadioState&) = default;
};

struct MediumConfig {
  double range_m = 400.0;
  double loss_probability = 0.0;
  SimTime propagation_delay = 1;
};

struct Delivery {
  NodeId receiver;
  SimTime at;
  friend bool operator==(const Delivery&, const Delivery&) = default;
};

struct TransmitResult {
  std::vector<Delivery> delivered;
  /// Eligible receivers whose copy was lost.
  std::vector<NodeId> dropped;
};

class Medium {
 public:
  explicit Medium(MediumConfig config = {}, std::uint64_t seed = 0) : config_(config), rng_(seed) {}

  const MediumConfig& config() const { return config_; }

  NodeId add_node(const MacAddress& mac, Position position, RadioState radio = {}) {
    check_position(position);
    stations_.push_back({mac, position, radio});
    return stations_.size() - 1;
  }

  std::size_t size() const { return stations_.size(); }

  void set_radio(NodeId id, RadioState state) { at(id).radio = state; }
  const RadioState& radio(NodeId id) const { return at(id).radio; }

  void set_position(NodeId id, Position p) {
    check_position(p);
    at(id).position = p;
  }
  const Position& position(NodeId id) const { return at(id).position; }
  const MacAddress& mac(NodeId id) const { return at(id).mac; }

  bool in_range(NodeId a, NodeId b) const {
    return distance(at(a).position, at(b).position) <= config_.range_m;
  }

  /// Whether `id`'s current radio state accepts `f`, ignoring channel/range.
  bool admits(NodeId id, const Frame& f) const {
    const Station& s = at(id);
    switch (s.radio.mode) {
      case RadioMode::Off: return false;
      case RadioMode::Promiscuous: return true;
      case RadioMode::Receive: return f.receiver() == s.mac || f.receiver().is_multicast();
    }
    return false;
  }

  TransmitResult transmit(NodeId sender, const Frame& f, SimTime now) {
    const Station& tx = at(sender);
    if (tx.radio.mode == RadioMode::Off) {
      throw Error(Errc::RadioOff, "node " + std::to_string(sender) + " transmitted with radio off");
    }
    TransmitResult out;
    for (NodeId id = 0; id < stations_.size(); ++id) {
      if (id == sender) continue;
      const Station& rx = stations_[id];
      if (rx.radio.mode == RadioMode::Off || rx.radio.channel != tx.radio.channel) continue;
      if (!in_range(sender, id) || !admits(id, f)) continue;
      // The stream is only consumed when loss is genuinely random.
      const double p = config_.loss_probability;
      const bool lost = p > 0.0 && (p >= 1.0 || rng_.uniform01() < p);
      if (lost) out.dropped.push_back(id);
      else out.delivered.push_back({id, now + config_.propagation_delay});
    }
    return out;
  }

 private:
  struct Station {
    MacAddress mac;
    Position position;
    RadioState radio;
  };

  static void check_position(const Position& p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw Error(Errc::ValidationError, "position must be finite");
    }
  }

  const Station& at(NodeId id) const {
    if (id >= stations_.size()) throw Error(Errc::UnknownNode, "node " + std::to_string(id));
    return stations_[id];
  }
  Station& at(NodeId id) {
    if (id >= stations_.size()) throw Error(Errc::UnknownNode, "node " + std::to_string(id));
    return stations_[id];
  }

  MediumConfig config_;
  Rng rng_;
  std::vector<Station> stations_;
};

}  // namespace wbsim

#endif  // WBSIM_MEDIUM_HPP
