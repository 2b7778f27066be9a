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

#ifndef WBSIM_MAC_ADDRESS_HPP
#define WBSIM_MAC_ADDRESS_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

#include "wbsim/error.hpp"

namespace wbsim {

enum class AddressClass { Broadcast, Multicast, Unicast };

inline std::string_view address_class_name(AddressClass c) {
  switch (c) {
    case AddressClass::Broadcast: return "broadcast";
    case AddressClass::Multicast: return "multicast";
    case AddressClass::Unicast: return "unicast";
  }
  return "?";
}

class MacAddress {
 public:
  static constexpr std::size_t kSize = 6;
  /// Length of the canonical "AA:BB:CC:DD:EE:FF" text form.
  static constexpr std::size_t kTextSize = 17;

  constexpr MacAddress() = default;
  constexpr explicit MacAddress(const std::array<std::uint8_t, kSize>& octets) : octets_(octets) {}

  static constexpr MacAddress broadcast() {
    return MacAddress({0xFF, 0xFF, 0xFF, 0xFF, 0xFF, 0xFF});
  }

  /// Accepts exactly 17 characters of colon-separated hex pairs, either case.
  static MacAddress parse(std::string_view text) {
    MacAddress mac;
    if (!try_parse(text, mac)) {
      throw Error(Errc::BadAddress, "not a MAC address: '" + std::string(text) + "'");
    }
    return mac;
  }

  static bool try_parse(std::string_view text, MacAddress& out) {
    if (text.size() != kTextSize) return false;
    std::array<std::uint8_t, kSize> octets{};
    for (std::size_t i = 0; i < kSize; ++i) {
      const std::size_t at = i * 3;
      int hi = hex_value(text[at]);
      int lo = hex_value(text[at + 1]);
      if (hi < 0 || lo < 0) return false;
      if (i + 1 < kSize && text[at + 2] != ':') return false;
      octets[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    out = MacAddress(octets);
    return true;
  }

  constexpr const std::array<std::uint8_t, kSize>& octets() const { return octets_; }
  constexpr std::uint8_t operator[](std::size_t i) const { return octets_[i]; }

  constexpr bool is_broadcast() const {
    for (auto b : octets_) {
      if (b != 0xFF) return false;
    }
    return true;
  }
  /// Group bit; broadcast is a multicast address too.
  constexpr bool is_multicast() const { return (octets_[0] & 0x01) != 0; }
  constexpr bool is_unicast() const { return !is_multicast(); }
  constexpr bool is_locally_administered() const { return (octets_[0] & 0x02) != 0; }

  std::string to_string() const {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string s;
    s.reserve(kTextSize);
    for (std::size_t i = 0; i < kSize; ++i) {
      if (i != 0) s.push_back(':');
      s.push_back(kHex[octets_[i] >> 4]);
      s.push_back(kHex[octets_[i] & 0x0F]);
    }
    return s;
  }

  friend constexpr auto operator<=>(const MacAddress&, const MacAddress&) = default;

 private:
  static constexpr int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  }

  std::array<std::uint8_t, kSize> octets_{};
};

inline std::ostream& operator<<(std::ostream& os, const MacAddress& mac) {
  return os << mac.to_string();
}

constexpr AddressClass classify_address(const MacAddress& a) {
  if (a.is_broadcast()) return AddressClass::Broadcast;
  if (a.is_multicast()) return AddressClass::Multicast;
  return AddressClass::Unicast;
}

/// A 2.4 GHz channel index, 1..13.
class Channel {
 public:
  static constexpr int kMin = 1;
  static constexpr int kMax = 13;

  constexpr Channel() = default;
  explicit Channel(int index) : index_(index) {
    if (!valid(index)) {
      throw Error(Errc::BadChannel, "channel " + std::to_string(index) + " outside 1..13");
    }
  }

  static constexpr bool valid(int index) { return index >= kMin && index <= kMax; }

  constexpr int index() const { return index_; }

  friend constexpr auto operator<=>(const Channel&, const Channel&) = default;

 private:
  int index_ = kMin;
};

}  // namespace wbsim

template <>
struct std::hash<wbsim::MacAddress> {
  std::size_t operator()(const wbsim::MacAddress& mac) const noexcept {
    std::uint64_t v = 0;
    for (auto b : mac.octets()) v = v << 8 | b;
    return std::hash<std::uint64_t>{}(v);
  }
};

#endif  // WBSIM_MAC_ADDRESS_HPP
