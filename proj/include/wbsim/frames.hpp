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

// Modeled 802.11 frames and their byte codec.
//
// Layout follows the management-frame convention: a 24-byte header of
// frame control (2), duration (2, LE), addr1 = receiver, addr2 = transmitter,
// addr3 = BSSID, sequence control (2, LE; sequence number in the upper 12
// bits), then the variant body. There is no FCS. Data frames carry a 2-byte
// big-endian port tag ahead of the payload, which is how UDP datagrams ride on
// the air in this model.

#ifndef WBSIM_FRAMES_HPP
#define WBSIM_FRAMES_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "wbsim/bytes.hpp"
#include "wbsim/error.hpp"
#include "wbsim/mac_address.hpp"
#include "wbsim/rng.hpp"

namespace wbsim {

inline constexpr std::size_t kMaxSsidBytes = 32;
inline constexpr std::uint16_t kDefaultBeaconIntervalTu = 100;
/// Class 3 frame received from nonassociated station.
inline constexpr std::uint16_t kDefaultDeauthReason = 7;
inline constexpr std::size_t kHeaderSize = 24;

struct FrameHeader {
  std::uint16_t duration = 0;
  MacAddress receiver;     // addr1
  MacAddress transmitter;  // addr2
  MacAddress bssid;        // addr3
  std::uint16_t sequence = 0;  // 12-bit

  friend bool operator==(const FrameHeader&, const FrameHeader&) = default;
};

struct Beacon {
  std::string ssid;
  std::uint16_t beacon_interval_tu = kDefaultBeaconIntervalTu;
  std::uint16_t capabilities = 0x0001;  // ESS
  Channel ds_channel;
  std::uint64_t timestamp = 0;
  friend bool operator==(const Beacon&, const Beacon&) = default;
};

struct Deauth {
  std::uint16_t reason_code = kDefaultDeauthReason;
  friend bool operator==(const Deauth&, const Deauth&) = default;
};

struct AuthRequest {
  std::uint16_t status = 0;
  friend bool operator==(const AuthRequest&, const AuthRequest&) = default;
};

struct AuthResponse {
  std::uint16_t status = 0;
  friend bool operator==(const AuthResponse&, const AuthResponse&) = default;
};

struct AssocRequest {
  std::string ssid;
  friend bool operator==(const AssocRequest&, const AssocRequest&) = default;
};

struct AssocResponse {
  std::uint16_t status = 0;
  std::uint16_t association_id = 1;  // 1..2007
  friend bool operator==(const AssocResponse&, const AssocResponse&) = default;
};

struct Data {
  std::uint16_t port = 0;
  Bytes payload;
  friend bool operator==(const Data&, const Data&) = default;
};

using FrameBody =
    std::variant<Beacon, Deauth, AuthRequest, AuthResponse, AssocRequest, AssocResponse, Data>;

enum class FrameKind { Beacon, Deauth, AuthRequest, AuthResponse, AssocRequest, AssocResponse, Data };

inline std::string_view frame_kind_name(FrameKind k) {
  switch (k) {
    case FrameKind::Beacon: return "beacon";
    case FrameKind::Deauth: return "deauth";
    case FrameKind::AuthRequest: return "auth_req";
    case FrameKind::AuthResponse: return "auth_resp";
    case FrameKind::AssocRequest: return "assoc_req";
    case FrameKind::AssocResponse: return "assoc_resp";
    case FrameKind::Data: return "data";
  }
  return "?";
}

struct Frame {
  FrameHeader header;
  FrameBody body;

  FrameKind kind() const { return static_cast<FrameKind>(body.index()); }
  const MacAddress& receiver() const { return header.receiver; }
  const MacAddress& transmitter() const { return header.transmitter; }
  const MacAddress& bssid() const { return header.bssid; }

  template <typename T>
  const T* as() const { return std::get_if<T>(&body); }

  friend bool operator==(const Frame&, const Frame&) = default;
};

namespace detail {

/// First frame-control byte: subtype << 4 | type << 2 (protocol version 0).
inline constexpr std::uint8_t kFcAssocRequest = 0x00;
inline constexpr std::uint8_t kFcAssocResponse = 0x10;
inline constexpr std::uint8_t kFcBeacon = 0x80;
inline constexpr std::uint8_t kFcAuth = 0xB0;
inline constexpr std::uint8_t kFcDeauth = 0xC0;
inline constexpr std::uint8_t kFcData = 0x08;

inline constexpr std::uint8_t kIeSsid = 0;
inline constexpr std::uint8_t kIeRates = 1;
inline constexpr std::uint8_t kIeDsParams = 3;
inline constexpr std::uint8_t kRates[] = {0x82, 0x84, 0x8B, 0x96};

inline constexpr std::uint16_t kAssocListenInterval = 10;
inline constexpr std::uint16_t kAidMask = 0x3FFF;

class Writer {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16le(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v & 0xFF));
    u8(static_cast<std::uint8_t>(v >> 8));
  }
  void u16be(std::uint16_t v) {
    u8(static_cast<std::uint8_t>(v >> 8));
    u8(static_cast<std::uint8_t>(v & 0xFF));
  }
  void u64le(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) u8(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void mac(const MacAddress& m) { out_.insert(out_.end(), m.octets().begin(), m.octets().end()); }
  void raw(ByteView b) { out_.insert(out_.end(), b.begin(), b.end()); }
  void raw(std::string_view s) { out_.insert(out_.end(), s.begin(), s.end()); }
  void element(std::uint8_t id, ByteView body) {
    u8(id);
    u8(static_cast<std::uint8_t>(body.size()));
    raw(body);
  }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView in) : in_(in) {}

  std::size_t remaining() const { return in_.size() - pos_; }
  void need(std::size_t n, const char* what) const {
    if (remaining() < n) throw Error(Errc::Truncated, std::string("missing ") + what);
  }
  std::uint8_t u8() {
    need(1, "byte");
    return in_[pos_++];
  }
  std::uint16_t u16le() {
    need(2, "u16");
    std::uint16_t v = static_cast<std::uint16_t>(in_[pos_] | in_[pos_ + 1] << 8);
    pos_ += 2;
    return v;
  }
  std::uint16_t u16be() {
    need(2, "u16");
    std::uint16_t v = static_cast<std::uint16_t>(in_[pos_] << 8 | in_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  std::uint64_t u64le() {
    need(8, "u64");
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = v << 8 | in_[pos_ + static_cast<std::size_t>(i)];
    pos_ += 8;
    return v;
  }
  MacAddress mac() {
    need(MacAddress::kSize, "address");
    std::array<std::uint8_t, MacAddress::kSize> o{};
    for (auto& b : o) b = in_[pos_++];
    return MacAddress(o);
  }
  ByteView take(std::size_t n, const char* what) {
    need(n, what);
    ByteView v = in_.subspan(pos_, n);
    pos_ += n;
    return v;
  }
  ByteView rest() { return take(remaining(), "rest"); }

 private:
  ByteView in_;
  std::size_t pos_ = 0;
};

inline void check_ssid(std::string_view ssid) {
  if (ssid.empty() || ssid.size() > kMaxSsidBytes) {
    throw Error(Errc::BadSsid, "SSID must be 1..32 bytes, got " + std::to_string(ssid.size()));
  }
}

inline ByteView ssid_bytes(const std::string& s) {
  return ByteView(reinterpret_cast<const std::uint8_t*>(s.data()), s.size());
}

struct Elements {
  std::optional<std::string> ssid;
  std::optional<std::uint8_t> ds_channel;
};

inline Elements read_elements(Reader& r) {
  Elements e;
  while (r.remaining() > 0) {
    std::uint8_t id = r.u8();
    std::uint8_t len = r.u8();
    ByteView body = r.take(len, "element body");
    if (id == kIeSsid && !e.ssid) e.ssid = to_string(body);
    if (id == kIeDsParams && len == 1 && !e.ds_channel) e.ds_channel = body[0];
  }
  return e;
}

inline std::string require_ssid(const Elements& e) {
  if (!e.ssid) throw Error(Errc::Truncated, "SSID element missing");
  if (e.ssid->empty() || e.ssid->size() > kMaxSsidBytes) {
    throw Error(Errc::Malformed, "SSID element length out of range");
  }
  return *e.ssid;
}

}  // namespace detail

inline Bytes encode_frame(const Frame& f) {
  using namespace detail;
  Writer w;
  std::uint8_t fc = 0;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Beacon>) fc = kFcBeacon;
        else if constexpr (std::is_same_v<T, Deauth>) fc = kFcDeauth;
        else if constexpr (std::is_same_v<T, AuthRequest> || std::is_same_v<T, AuthResponse>) fc = kFcAuth;
        else if constexpr (std::is_same_v<T, AssocRequest>) fc = kFcAssocRequest;
        else if constexpr (std::is_same_v<T, AssocResponse>) fc = kFcAssocResponse;
        else fc = kFcData;
      },
      f.body);
  w.u8(fc);
  w.u8(0x00);
  w.u16le(f.header.duration);
  w.mac(f.header.receiver);
  w.mac(f.header.transmitter);
  w.mac(f.header.bssid);
  w.u16le(static_cast<std::uint16_t>((f.header.sequence & 0x0FFF) << 4));

  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Beacon>) {
          w.u64le(b.timestamp);
          w.u16le(b.beacon_interval_tu);
          w.u16le(b.capabilities);
          w.element(kIeSsid, ssid_bytes(b.ssid));
          w.element(kIeRates, kRates);
          const std::uint8_t ch = static_cast<std::uint8_t>(b.ds_channel.index());
          w.element(kIeDsParams, ByteView(&ch, 1));
        } else if constexpr (std::is_same_v<T, Deauth>) {
          w.u16le(b.reason_code);
        } else if constexpr (std::is_same_v<T, AuthRequest>) {
          w.u16le(0);  // open system
          w.u16le(1);  // transaction sequence
          w.u16le(b.status);
        } else if constexpr (std::is_same_v<T, AuthResponse>) {
          w.u16le(0);
          w.u16le(2);
          w.u16le(b.status);
        } else if constexpr (std::is_same_v<T, AssocRequest>) {
          w.u16le(0x0001);
          w.u16le(kAssocListenInterval);
          w.element(kIeSsid, ssid_bytes(b.ssid));
        } else if constexpr (std::is_same_v<T, AssocResponse>) {
          w.u16le(0x0001);
          w.u16le(b.status);
          w.u16le(static_cast<std::uint16_t>((b.association_id & kAidMask) | 0xC000));
        } else {
          w.u16be(b.port);
          w.raw(b.payload);
        }
      },
      f.body);
  return w.take();
}

/// Throws Error(Truncated) for short input, Error(UnknownKind) for frame
/// control values outside the modeled set, Error(Malformed) for bodies whose
/// fields are present but invalid (such as a DS channel of 0).
inline Frame decode_frame(ByteView bytes) {
  using namespace detail;
  Reader r(bytes);
  if (bytes.size() < 2) throw Error(Errc::Truncated, "no frame control field");
  const std::uint8_t fc = bytes[0];
  const std::uint8_t flags = bytes[1];
  if (flags != 0 || (fc != kFcBeacon && fc != kFcDeauth && fc != kFcAuth && fc != kFcAssocRequest &&
                     fc != kFcAssocResponse && fc != kFcData)) {
    throw Error(Errc::UnknownKind, "frame control " + to_hex(bytes.subspan(0, 2)));
  }
  if (bytes.size() < kHeaderSize) throw Error(Errc::Truncated, "header shorter than 24 bytes");
  r.u8();
  r.u8();
  Frame f;
  f.header.duration = r.u16le();
  f.header.receiver = r.mac();
  f.header.transmitter = r.mac();
  f.header.bssid = r.mac();
  f.header.sequence = static_cast<std::uint16_t>(r.u16le() >> 4);

  switch (fc) {
    case kFcBeacon: {
      Beacon b;
      b.timestamp = r.u64le();
      b.beacon_interval_tu = r.u16le();
      b.capabilities = r.u16le();
      Elements e = read_elements(r);
      b.ssid = require_ssid(e);
      if (!e.ds_channel) throw Error(Errc::Truncated, "DS parameter element missing");
      if (!Channel::valid(*e.ds_channel)) throw Error(Errc::Malformed, "DS channel out of range");
      b.ds_channel = Channel(*e.ds_channel);
      f.body = std::move(b);
      break;
    }
    case kFcDeauth:
      f.body = Deauth{r.u16le()};
      break;
    case kFcAuth: {
      const std::uint16_t algorithm = r.u16le();
      const std::uint16_t transaction = r.u16le();
      const std::uint16_t status = r.u16le();
      if (algorithm != 0 || (transaction != 1 && transaction != 2)) {
        throw Error(Errc::UnknownKind, "authentication variant not modeled");
      }
      if (transaction == 1) f.body = AuthRequest{status};
      else f.body = AuthResponse{status};
      break;
    }
    case kFcAssocRequest: {
      r.u16le();
      r.u16le();
      Elements e = read_elements(r);
      f.body = AssocRequest{require_ssid(e)};
      break;
    }
    case kFcAssocResponse: {
      r.u16le();
      AssocResponse a;
      a.status = r.u16le();
      a.association_id = static_cast<std::uint16_t>(r.u16le() & kAidMask);
      f.body = a;
      break;
    }
    default: {
      Data d;
      d.port = r.u16be();
      ByteView rest = r.rest();
      d.payload.assign(rest.begin(), rest.end());
      f.body = std::move(d);
      break;
    }
  }
  if (r.remaining() != 0) throw Error(Errc::Malformed, "trailing bytes after frame body");
  return f;
}

/// Spoofed deauthentication sent to `client` on behalf of `ap`.
inline Frame make_deauth(const MacAddress& ap, const MacAddress& client,
                         std::uint16_t reason = kDefaultDeauthReason, std::uint16_t sequence = 0) {
  if (!client.is_unicast()) {
    throw Error(Errc::NonUnicastTarget, "deauth target " + client.to_string() + " is not unicast");
  }
  Frame f;
  f.header.receiver = client;
  f.header.transmitter = ap;
  f.header.bssid = ap;
  f.header.sequence = static_cast<std::uint16_t>(sequence & 0x0FFF);
  f.body = Deauth{reason};
  return f;
}

inline Frame make_beacon(const MacAddress& bssid, const std::string& ssid, Channel channel,
                         std::uint64_t timestamp = 0, std::uint16_t sequence = 0,
                         std::uint16_t interval_tu = kDefaultBeaconIntervalTu,
                         std::uint16_t capabilities = 0x0001) {
  detail::check_ssid(ssid);
  Frame f;
  f.header.receiver = MacAddress::broadcast();
  f.header.transmitter = bssid;
  f.header.bssid = bssid;
  f.header.sequence = static_cast<std::uint16_t>(sequence & 0x0FFF);
  f.body = Beacon{ssid, interval_tu, capabilities, channel, timestamp};
  return f;
}

/// A beacon advertising `ssid` with everything else drawn from `rng`: a
/// locally administered unicast BSSID, capability bits, DS channel and
/// sequence number. The interval stays at 100 TU.
inline Frame make_fake_beacon(const std::string& ssid, Rng& rng) {
  detail::check_ssid(ssid);
  std::array<std::uint8_t, MacAddress::kSize> octets{};
  for (auto& b : octets) b = rng.uniform_int<unsigned>(0, 255) & 0xFF;
  octets[0] = static_cast<std::uint8_t>((octets[0] & 0xFC) | 0x02);
  const MacAddress bssid(octets);
  const auto caps = static_cast<std::uint16_t>(rng.uniform_int<unsigned>(0, 0xFFFF));
  const Channel channel(rng.uniform_int<int>(Channel::kMin, Channel::kMax));
  const auto seq = static_cast<std::uint16_t>(rng.uniform_int<unsigned>(0, 0x0FFF));
  return make_beacon(bssid, ssid, channel, 0, seq, kDefaultBeaconIntervalTu, caps);
}

inline Frame make_data(const MacAddress& receiver, const MacAddress& transmitter,
                       const MacAddress& bssid, std::uint16_t port, Bytes payload,
                       std::uint16_t sequence = 0) {
  Frame f;
  f.header.receiver = receiver;
  f.header.transmitter = transmitter;
  f.header.bssid = bssid;
  f.header.sequence = static_cast<std::uint16_t>(sequence & 0x0FFF);
  f.body = Data{port, std::move(payload)};
  return f;
}

inline Frame make_management(const MacAddress& receiver, const MacAddress& transmitter,
                             const MacAddress& bssid, FrameBody body, std::uint16_t sequence = 0) {
  Frame f;
  f.header.receiver = receiver;
  f.header.transmitter = transmitter;
  f.header.bssid = bssid;
  f.header.sequence = static_cast<std::uint16_t>(sequence & 0x0FFF);
  f.body = std::move(body);
  return f;
}

/// Structured summary used by the event log and the dissect subcommand.
inline nlohmann::json frame_to_json(const Frame& f) {
  nlohmann::json j;
  j["kind"] = frame_kind_name(f.kind());
  j["ra"] = f.receiver().to_string();
  j["ta"] = f.transmitter().to_string();
  j["bssid"] = f.bssid().to_string();
  j["seq"] = f.header.sequence;
  if (f.header.duration != 0) j["duration"] = f.header.duration;
  std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<T, Beacon>) {
          j["ssid"] = b.ssid;
          j["channel"] = b.ds_channel.index();
          j["interval_tu"] = b.beacon_interval_tu;
          j["capabilities"] = b.capabilities;
          j["timestamp"] = b.timestamp;
        } else if constexpr (std::is_same_v<T, Deauth>) {
          j["reason"] = b.reason_code;
        } else if constexpr (std::is_same_v<T, AuthRequest> || std::is_same_v<T, AuthResponse>) {
          j["status"] = b.status;
        } else if constexpr (std::is_same_v<T, AssocRequest>) {
          j["ssid"] = b.ssid;
        } else if constexpr (std::is_same_v<T, AssocResponse>) {
          j["status"] = b.status;
          j["aid"] = b.association_id;
        } else {
          j["port"] = b.port;
          j["len"] = b.payload.size();
        }
      },
      f.body);
  return j;
}

}  // namespace wbsim

#endif  // WBSIM_FRAMES_HPP
