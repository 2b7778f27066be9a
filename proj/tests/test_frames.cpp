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

#include <gtest/gtest.h>

#include <set>

#include "support/generators.hpp"
#include "wbsim.hpp"

namespace wbsim {
namespace {

using testing::random_frame;
using testing::random_mac;

const MacAddress kClient = MacAddress::parse("02:00:00:00:00:01");
const MacAddress kAp = MacAddress::parse("02:00:00:00:00:AA");

Bytes hex(std::string_view h) { return *from_hex(h); }

TEST(MacAddressTest, ParsesEitherCaseAndPrintsUppercase) {
  const MacAddress m = MacAddress::parse("aa:bb:cc:dd:ee:0f");
  EXPECT_EQ(m.to_string(), "AA:BB:CC:DD:EE:0F");
  EXPECT_EQ(m, MacAddress::parse("AA:BB:CC:DD:EE:0F"));
  EXPECT_EQ(m.to_string().size(), 17u);
}

TEST(MacAddressTest, RejectsBadText) {
  MacAddress m;
  for (const char* bad : {"", "AA:BB:CC:DD:EE", "AA:BB:CC:DD:EE:0G", "AA-BB-CC-DD-EE-01", "AA:BB:CC:DD:EE:011",
                          " AA:BB:CC:DD:EE:01"}) {
    EXPECT_FALSE(MacAddress::try_parse(bad, m)) << bad;
  }
  EXPECT_THROW(MacAddress::parse("nope"), Error);
}

TEST(MacAddressTest, BroadcastIsAllOnes) {
  EXPECT_EQ(MacAddress::broadcast().to_string(), "FF:FF:FF:FF:FF:FF");
  EXPECT_TRUE(MacAddress::broadcast().is_broadcast());
  EXPECT_TRUE(MacAddress::broadcast().is_multicast());
}

TEST(ClassifyAddressTest, Examples) {
  EXPECT_EQ(classify_address(MacAddress::parse("FF:FF:FF:FF:FF:FF")), AddressClass::Broadcast);
  EXPECT_EQ(classify_address(MacAddress::parse("01:00:5E:00:00:01")), AddressClass::Multicast);
  EXPECT_EQ(classify_address(MacAddress::parse("02:00:00:00:00:01")), AddressClass::Unicast);
  // Group bit set but not all ones.
  EXPECT_EQ(classify_address(MacAddress::parse("FF:FF:FF:FF:FF:FE")), AddressClass::Multicast);
}

TEST(ClassifyAddressTest, PartitionsTheAddressSpace) {
  Rng rng(11);
  for (int i = 0; i < 20000; ++i) {
    const MacAddress m = random_mac(rng);
    const AddressClass c = classify_address(m);
    // Independent bit arithmetic.
    const bool all_ones = std::all_of(m.octets().begin(), m.octets().end(), [](auto b) { return b == 0xFF; });
    const bool group = (m.octets()[0] & 1) != 0;
    const AddressClass expected =
        all_ones ? AddressClass::Broadcast : (group ? AddressClass::Multicast : AddressClass::Unicast);
    ASSERT_EQ(c, expected) << m.to_string();
    ASSERT_EQ(m.is_unicast(), c == AddressClass::Unicast);
  }
}

TEST(ChannelTest, RangeIsOneToThirteen) {
  EXPECT_NO_THROW(Channel(1));
  EXPECT_NO_THROW(Channel(13));
  for (int bad : {0, 14, -1, 36}) {
    try {
      Channel c(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::BadChannel);
    }
  }
}

// Matches scapy's Dot11(type=0, subtype=12)/Dot11Deauth(reason=7) output.
constexpr std::string_view kDeauthVector = "c000 0000 020000000001 0200000000aa 0200000000aa 0000 0700";

TEST(EncodeFrameTest, DeauthGoldenVector) {
  const Bytes bytes = encode_frame(make_deauth(kAp, kClient, 7));
  EXPECT_EQ(bytes.size(), 26u);
  EXPECT_EQ(bytes, hex(kDeauthVector));
  EXPECT_EQ(bytes[0], 0xC0);
  EXPECT_EQ(bytes[1], 0x00);
}

// Fixed fields then SSID, rates and DS parameter elements. The capability
// field is little-endian like every other 802.11 integer.
constexpr std::string_view kBeaconVector =
    "8000 0000 ffffffffffff 0200000000aa 0200000000aa 5000"
    "0807060504030201 6400 0100"
    "00 06 6573705f6170 01 04 82848b96 03 01 01";

TEST(EncodeFrameTest, BeaconGoldenVector) {
  const Frame b = make_beacon(kAp, "esp_ap", Channel(1), 0x0102030405060708ULL, 5);
  const Bytes bytes = encode_frame(b);
  EXPECT_EQ(bytes, hex(kBeaconVector));
  // Tag 0, length 6, "esp_ap" right after the 36 bytes of header and fixed fields.
  ASSERT_GE(bytes.size(), 44u);
  EXPECT_EQ(bytes[36], 0);
  EXPECT_EQ(bytes[37], 6);
  EXPECT_EQ(to_string(ByteView(bytes).subspan(38, 6)), "esp_ap");
}

TEST(EncodeFrameTest, HeaderIs24BytesForEveryKind) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const Frame f = random_frame(rng);
    const Bytes b = encode_frame(f);
    ASSERT_GE(b.size(), kHeaderSize);
    EXPECT_EQ(ByteView(b).subspan(4, 6).size(), 6u);
    EXPECT_TRUE(std::equal(b.begin() + 4, b.begin() + 10, f.receiver().octets().begin()));
    EXPECT_TRUE(std::equal(b.begin() + 10, b.begin() + 16, f.transmitter().octets().begin()));
    EXPECT_TRUE(std::equal(b.begin() + 16, b.begin() + 22, f.bssid().octets().begin()));
  }
}

TEST(DecodeFrameTest, DeauthVectorDecodes) {
  const Frame f = decode_frame(hex(kDeauthVector));
  ASSERT_NE(f.as<Deauth>(), nullptr);
  EXPECT_EQ(f.receiver(), kClient);
  EXPECT_EQ(f.transmitter(), kAp);
  EXPECT_EQ(f.bssid(), kAp);
  EXPECT_EQ(f.as<Deauth>()->reason_code, 7);
}

Errc decode_error(const Bytes& b) {
  try {
    decode_frame(b);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "decoded " << to_hex(b);
  return Errc::Io;
}

TEST(DecodeFrameTest, EmptyIsTruncated) { EXPECT_EQ(decode_error({}), Errc::Truncated); }

TEST(DecodeFrameTest, EveryPrefixOfAValidFrameIsRejected) {
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const Frame f = random_frame(rng);
    const Bytes b = encode_frame(f);
    for (std::size_t n = 0; n < b.size(); ++n) {
      const Bytes prefix(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(n));
      if (f.as<Data>() && n >= kHeaderSize + 2) {
        // A shorter payload is still a valid data frame.
        EXPECT_NO_THROW(decode_frame(prefix));
        continue;
      }
      const Errc e = decode_error(prefix);
      EXPECT_TRUE(e == Errc::Truncated || e == Errc::UnknownKind) << n;
    }
  }
}

TEST(DecodeFrameTest, FlippedSubtypeBitsAreUnknownKind) {
  const Bytes valid = hex(kDeauthVector);
  std::set<std::uint8_t> modeled = {0x00, 0x10, 0x80, 0xB0, 0xC0, 0x08};
  int checked = 0;
  for (int mask = 1; mask < 16; ++mask) {
    Bytes b = valid;
    b[0] = static_cast<std::uint8_t>(b[0] ^ (mask << 4));
    if (modeled.count(b[0])) continue;
    EXPECT_EQ(decode_error(b), Errc::UnknownKind) << std::hex << int(b[0]);
    ++checked;
  }
  EXPECT_GT(checked, 10);
  Bytes flags = valid;
  flags[1] = 0x08;  // retry flag: outside the model
  EXPECT_EQ(decode_error(flags), Errc::UnknownKind);
}

TEST(DecodeFrameTest, TrailingBytesAreMalformed) {
  Bytes b = hex(kDeauthVector);
  b.push_back(0);
  EXPECT_EQ(decode_error(b), Errc::Malformed);
}

TEST(DecodeFrameTest, BadDsChannelIsMalformed) {
  Bytes b = hex(kBeaconVector);
  b.back() = 14;
  EXPECT_EQ(decode_error(b), Errc::Malformed);
}

TEST(DecodeFrameTest, OversizedSsidIsRejected) {
  const Bytes b = hex(kBeaconVector);
  // Rewrite the SSID element with 33 bytes.
  Bytes front(b.begin(), b.begin() + 36);
  front.push_back(0);
  front.push_back(33);
  front.insert(front.end(), 33, 'x');
  front.insert(front.end(), b.begin() + 44, b.end());
  EXPECT_EQ(decode_error(front), Errc::Malformed);
}

TEST(FramePropertyTest, RoundTripTenThousandRandomFrames) {
  Rng rng(20260101);
  for (int i = 0; i < 10000; ++i) {
    const Frame f = random_frame(rng);
    const Bytes b = encode_frame(f);
    ASSERT_EQ(decode_frame(b), f) << "case " << i << ": " << to_hex(b);
    // Encoding is canonical.
    ASSERT_EQ(encode_frame(decode_frame(b)), b);
  }
}

TEST(MakeDeauthTest, AddressesOnBehalfOfTheAp) {
  const Frame f = make_deauth(kAp, kClient, 7);
  EXPECT_EQ(f.receiver(), kClient);
  EXPECT_EQ(f.transmitter(), kAp);
  EXPECT_EQ(f.bssid(), kAp);
  EXPECT_EQ(decode_frame(encode_frame(f)), f);
}

TEST(MakeDeauthTest, RejectsGroupTargets) {
  for (const char* t : {"FF:FF:FF:FF:FF:FF", "01:00:5E:00:00:01", "33:33:00:00:00:01"}) {
    try {
      make_deauth(kAp, MacAddress::parse(t));
      FAIL() << t;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::NonUnicastTarget);
    }
  }
}

TEST(MakeDeauthTest, TransmitterAlwaysEqualsBssid) {
  Rng rng(9);
  for (int i = 0; i < 2000; ++i) {
    const Frame f = make_deauth(random_mac(rng), testing::random_unicast(rng), testing::u16(rng));
    ASSERT_EQ(f.transmitter(), f.bssid());
  }
}

TEST(FakeBeaconTest, SameSeedSameFrame) {
  Rng a(42), b(42);
  EXPECT_EQ(make_fake_beacon("TestNet", a), make_fake_beacon("TestNet", b));
  Rng c(43);
  EXPECT_NE(make_fake_beacon("TestNet", a), make_fake_beacon("TestNet", c));
}

TEST(FakeBeaconTest, PreservesSsidAndRandomizesTheRest) {
  Rng rng(1);
  std::set<MacAddress> bssids;
  std::set<int> channels;
  for (int i = 0; i < 1000; ++i) {
    const std::string ssid = testing::random_ssid_bytes(rng);
    const Frame f = make_fake_beacon(ssid, rng);
    const Beacon* b = f.as<Beacon>();
    ASSERT_NE(b, nullptr);
    ASSERT_EQ(b->ssid, ssid);
    ASSERT_EQ(f.receiver(), MacAddress::broadcast());
    ASSERT_EQ(f.transmitter(), f.bssid());
    ASSERT_EQ(b->beacon_interval_tu, 100);
    const std::uint8_t o0 = f.bssid().octets()[0];
    ASSERT_EQ(o0 & 0x01, 0) << f.bssid().to_string();
    ASSERT_EQ(o0 & 0x02, 0x02) << f.bssid().to_string();
    ASSERT_EQ(classify_address(f.bssid()), AddressClass::Unicast);
    bssids.insert(f.bssid());
    channels.insert(b->ds_channel.index());
  }
  EXPECT_GT(bssids.size(), 990u);
  EXPECT_EQ(channels.size(), 13u);
}

TEST(FakeBeaconTest, BadSsid) {
  Rng rng(1);
  for (const std::string& s : {std::string(), std::string(33, 'a')}) {
    try {
      make_fake_beacon(s, rng);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::BadSsid);
    }
  }
}

TEST(BytesTest, HexRoundTrip) {
  const Bytes b = {0x00, 0x7F, 0xFF, 0x10};
  EXPECT_EQ(to_hex(b), "007fff10");
  EXPECT_EQ(to_hex(b, ' '), "00 7f ff 10");
  EXPECT_EQ(from_hex("00:7F:FF-10"), b);
  EXPECT_FALSE(from_hex("abc").has_value());
  EXPECT_FALSE(from_hex("zz").has_value());
}

TEST(FrameJsonTest, SummaryNamesTheKind) {
  const auto j = frame_to_json(make_deauth(kAp, kClient, 7));
  EXPECT_EQ(j["kind"], "deauth");
  EXPECT_EQ(j["ra"], "02:00:00:00:00:01");
  EXPECT_EQ(j["ta"], "02:00:00:00:00:AA");
}

}  // namespace
}  // namespace wbsim
