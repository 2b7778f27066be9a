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

#ifndef WBSIM_EVENT_LOG_HPP
#define WBSIM_EVENT_LOG_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbsim/sim_time.hpp"

namespace wbsim {

/// One line of the event log. `seq` is the record's position in the log,
/// which orders records that share a timestamp.
struct EventRecord {
  SimTime t = 0;
  std::uint64_t seq = 0;
  std::string node;
  std::string kind;
  nlohmann::json detail;
};

inline nlohmann::json record_to_json(const EventRecord& r) {
  return {{"t_us", r.t}, {"seq", r.seq}, {"node", r.node}, {"kind", r.kind}, {"detail", r.detail}};
}

inline EventRecord record_from_json(const nlohmann::json& j) {
  return {j.at("t_us").get<SimTime>(), j.at("seq").get<std::uint64_t>(), j.at("node").get<std::string>(),
          j.at("kind").get<std::string>(), j.at("detail")};
}

class EventLog {
 public:
  using Listener = std::function<void(const EventRecord&)>;

  const EventRecord& append(SimTime t, std::string node, std::string kind, nlohmann::json detail) {
    records_.push_back({t, records_.size(), std::move(node), std::move(kind), std::move(detail)});
    if (listener_) listener_(records_.back());
    return records_.back();
  }

  void set_listener(Listener l) { listener_ = std::move(l); }

  const std::vector<EventRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  /// The whole log as line-delimited JSON.
  std::string to_jsonl() const {
    std::string out;
    for (const auto& r : records_) {
      out += record_to_json(r).dump();
      out.push_back('\n');
    }
    return out;
  }

 private:
  std::vector<EventRecord> records_;
  Listener listener_;
};

}  // namespace wbsim

#endif  // WBSIM_EVENT_LOG_HPP
