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

// Handler -> bot task datagram.
//
// Plain ASCII, laid out as
//
//   LL channel  LL time  LL clients-num  LL ssid  AP-MAC  MAC_1 ... MAC_n
//
// where each LL is a 2-digit zero-padded decimal byte count of the field that
// follows, and every MAC is the 17-character canonical text form with no
// length prefix. A time of 0 is the stop order: bots drop the current attack.

#ifndef WBSIM_TASK_PROTOCOL_HPP
#define WBSIM_TASK_PROTOCOL_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbsim/bytes.hpp"
#include "wbsim/error.hpp"
#include "wbsim/mac_address.hpp"

namespace wbsim {

inline constexpr std::uint16_t kTaskPort = 7777;
inline constexpr std::uint32_t kMaxTaskDuration = 99'999'999;

struct TaskPacket {
  Channel channel;
  std::uint32_t duration_s = 1;
  std::string ssid;
  MacAddress ap_mac;
  std::vector<MacAddress> client_macs;

  bool is_stop() const { return duration_s == 0; }

  friend bool operator==(const TaskPacket&, const TaskPacket&) = default;
};

namespace detail {

inline void append_field(std::string& out, std::string_view field) {
  out.push_back(static_cast<char>('0' + field.size() / 10));
  out.push_back(static_cast<char>('0' + field.size() % 10));
  out.append(field);
}

[[noreturn]] inline void malformed(const std::string& why) { throw Error(Errc::Malformed, why); }

class TaskCursor {
 public:
  explicit TaskCursor(std::string_view text) : text_(text) {}

  std::size_t remaining() const { return text_.size() - pos_; }

  std::string_view field(const char* name) {
    if (remaining() < 2) malformed(std::string("missing length of ") + name);
    const char a = text_[pos_];
    const char b = text_[pos_ + 1];
    if (!is_digit(a) || !is_digit(b)) malformed(std::string("non-digit length for ") + name);
    const std::size_t len = static_cast<std::size_t>((a - '0') * 10 + (b - '0'));
    pos_ += 2;
    if (len > remaining()) malformed(std::string("length of ") + name + " overruns packet");
    std::string_view v = text_.substr(pos_, len);
    pos_ += len;
    return v;
  }

  std::uint64_t number(const char* name) {
    std::string_view digits = field(name);
    if (digits.empty() || digits.size() > 9) malformed(std::string("bad width for ") + name);
    std::uint64_t v = 0;
    for (char c : digits) {
      if (!is_digit(c)) malformed(std::string("non-digit in ") + name);
      v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
  }

  MacAddress mac() {
    MacAddress m;
    if (!MacAddress::try_parse(text_.substr(pos_, MacAddress::kTextSize), m)) {
      malformed("bad MAC text at offset " + std::to_string(pos_));
    }
    pos_ += MacAddress::kTextSize;
    return m;
  }

 private:
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Throws Error(BadSsid) / Error(NonUnicastTarget) when the packet violates
/// its invariants; valid packets always encode.
inline void validate_task(const TaskPacket& t) {
  if (t.ssid.empty() || t.ssid.size() > 32) throw Error(Errc::BadSsid, "SSID must be 1..32 bytes");
  for (unsigned char c : t.ssid) {
    if (c >= 0x80) throw Error(Errc::BadSsid, "task SSID must be ASCII");
  }
  if (t.duration_s > kMaxTaskDuration) throw Error(Errc::Malformed, "duration exceeds 8 digits");
  if (!t.ap_mac.is_unicast()) throw Error(Errc::NonUnicastTarget, "AP MAC is not unicast");
  for (const auto& m : t.client_macs) {
    if (!m.is_unicast()) throw Error(Errc::NonUnicastTarget, m.to_string() + " is not unicast");
  }
}

inline std::string encode_task_text(const TaskPacket& t) {
  validate_task(t);
  std::string out;
  out.reserve(32 + t.ssid.size() + MacAddress::kTextSize * (1 + t.client_macs.size()));
  detail::append_field(out, std::to_string(t.channel.index()));
  detail::append_field(out, std::to_string(t.duration_s));
  detail::append_field(out, std::to_string(t.client_macs.size()));
  detail::append_field(out, t.ssid);
  out += t.ap_mac.to_string();
  for (const auto& m : t.client_macs) out += m.to_string();
  return out;
}

inline Bytes encode_task(const TaskPacket& t) { return to_bytes(encode_task_text(t)); }

/// Throws Error(Malformed) on any deviation from the layout: non-digit
/// lengths, overruns, bad MAC text, a client count that disagrees with the
/// number of trailing MACs, or trailing bytes.
inline TaskPacket decode_task(std::string_view text) {
  detail::TaskCursor cur(text);
  TaskPacket t;
  const std::uint64_t channel = cur.number("channel");
  if (!Channel::valid(static_cast<int>(channel))) detail::malformed("channel out of range");
  t.channel = Channel(static_cast<int>(channel));
  const std::uint64_t duration = cur.number("time");
  if (duration > kMaxTaskDuration) detail::malformed("duration out of range");
  t.duration_s = static_cast<std::uint32_t>(duration);
  const std::uint64_t count = cur.number("clients num");
  std::string_view ssid = cur.field("ssid");
  if (ssid.empty() || ssid.size() > 32) detail::malformed("SSID length out of range");
  t.ssid = std::string(ssid);

  if (cur.remaining() % MacAddress::kTextSize != 0) detail::malformed("trailing bytes");
  const std::size_t macs = cur.remaining() / MacAddress::kTextSize;
  if (macs == 0) detail::malformed("missing AP MAC");
  if (macs - 1 != count) {
    detail::malformed("clients num " + std::to_string(count) + " but " + std::to_string(macs - 1) +
                      " client MACs");
  }
  t.ap_mac = cur.mac();
  if (!t.ap_mac.is_unicast()) detail::malformed("AP MAC is not unicast");
  t.client_macs.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    MacAddress m = cur.mac();
    if (!m.is_unicast()) detail::malformed("client MAC is not unicast");
    t.client_macs.push_back(m);
  }
  return t;
}

inline TaskPacket decode_task(ByteView bytes) {
  return decode_task(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

inline nlohmann::json task_to_json(const TaskPacket& t) {
  nlohmann::json clients = nlohmann::json::array();
  for (const auto& m : t.client_macs) clients.push_back(m.to_string());
  return {{"channel", t.channel.index()},
          {"duration_s", t.duration_s},
          {"ssid", t.ssid},
          {"ap", t.ap_mac.to_string()},
          {"clients", clients}};
}

}  // namespace wbsim

#endif  // WBSIM_TASK_PROTOCOL_HPP
