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

#include <fstream>

#include "support/worlds.hpp"
#include "wbsim.hpp"

namespace wbsim {
namespace {

using testing::json;
using testing::load;

Errc load_text_error(const std::string& text) {
  try {
    load_scenario(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted: " << text;
  return Errc::Io;
}

Errc load_error(const json& j) { return load_text_error(j.dump()); }

json minimal() {
  return {{"nodes", json::array({testing::handler_node(false)})}};
}

TEST(ScenarioTest, MinimalScenarioGetsDefaults) {
  const ScenarioConfig c = load(minimal());
  EXPECT_EQ(c.seed, 1u);
  EXPECT_DOUBLE_EQ(c.range_m, 400.0);
  EXPECT_DOUBLE_EQ(c.loss_probability, 0.0);
  EXPECT_DOUBLE_EQ(c.horizon_s, 60.0);
  ASSERT_EQ(c.nodes.size(), 1u);
  EXPECT_EQ(c.nodes[0].kind, NodeKind::Handler);
  const auto& h = std::get<HandlerConfig>(c.nodes[0].params);
  EXPECT_EQ(h.ssid, "esp_ap");
  EXPECT_EQ(h.channel, Channel(1));
  EXPECT_FALSE(h.autoselect);
}

TEST(ScenarioTest, MinimalFourNodeWorldFillsDefaults) {
  const ScenarioConfig c = load_scenario(R"({"nodes": [
    {"kind": "handler", "mac": "02:00:00:00:10:00"},
    {"kind": "ap", "mac": "AA:BB:CC:DD:EE:01", "ssid": "TestNet"},
    {"kind": "client", "mac": "02:00:00:00:00:01", "target_ssid": "TestNet"},
    {"kind": "bot", "mac": "02:00:00:00:20:00"}]})");
  ASSERT_EQ(c.nodes.size(), 4u);
  const auto& ap = std::get<ApConfig>(c.nodes[1].params);
  EXPECT_EQ(ap.channel, Channel(6));
  EXPECT_EQ(ap.beacon_interval_tu, kDefaultBeaconIntervalTu);
  const auto& cl = std::get<ClientConfig>(c.nodes[2].params);
  EXPECT_GT(cl.activity_rate, 0.0);
  EXPECT_DOUBLE_EQ(cl.backoff_s, 1.0);
  EXPECT_EQ(std::get<BotConfig>(c.nodes[3].params).handler_ssid, "esp_ap");
  EXPECT_EQ(c.nodes[0].position, (Position{0, 0}));
  EXPECT_EQ(c.nodes[2].name, "client0");
}

TEST(ScenarioTest, FullWorldParses) {
  const ScenarioConfig c = load(testing::attack_world(3, 2.0, 2));
  ASSERT_EQ(c.nodes.size(), 7u);
  const auto& ap = std::get<ApConfig>(c.find("ap")->params);
  EXPECT_EQ(ap.ssid, "TestNet");
  EXPECT_EQ(ap.channel, Channel(6));
  EXPECT_TRUE(ap.downlink.echo);
  const auto& cl = std::get<ClientConfig>(c.find("client1")->params);
  EXPECT_DOUBLE_EQ(cl.activity_rate, 2.0);
  EXPECT_EQ(c.find("02:00:00:00:00:02"), c.find("client1"));
  EXPECT_EQ(std::get<HandlerConfig>(c.find("handler")->params).autoselect, std::optional<std::string>("TestNet"));
}

TEST(ScenarioTest, UnnamedNodesAreNumberedPerKind) {
  json j = minimal();
  j["nodes"].push_back({{"kind", "bot"}, {"mac", "02:00:00:00:20:00"}});
  j["nodes"].push_back({{"kind", "bot"}, {"mac", "02:00:00:00:20:01"}});
  const ScenarioConfig c = load(j);
  EXPECT_EQ(c.nodes[1].name, "bot0");
  EXPECT_EQ(c.nodes[2].name, "bot1");
}

TEST(ScenarioTest, ExactlyOneHandler) {
  EXPECT_EQ(load_error(json{{"nodes", json::array()}}), Errc::ValidationError);
  json two = minimal();
  json h2 = testing::handler_node(false);
  h2["mac"] = "02:00:00:00:10:01";
  h2["name"] = "handler2";
  two["nodes"].push_back(h2);
  EXPECT_EQ(load_error(two), Errc::ValidationError);
}

TEST(ScenarioTest, RejectsInvalidValues) {
  json loss = minimal();
  loss["loss_probability"] = 1.5;
  EXPECT_EQ(load_error(loss), Errc::ValidationError);
  json range = minimal();
  range["range_m"] = 0;
  EXPECT_EQ(load_error(range), Errc::ValidationError);
  json horizon = minimal();
  horizon["horizon_s"] = -1;
  EXPECT_EQ(load_error(horizon), Errc::ValidationError);

  json dup = minimal();
  dup["nodes"].push_back(testing::bot_node(0));
  dup["nodes"].push_back(testing::bot_node(0));
  dup["nodes"][2]["name"] = "other";
  EXPECT_EQ(load_error(dup), Errc::ValidationError);

  json channel = minimal();
  channel["nodes"].push_back(testing::ap_node("ap", testing::kApMac, "TestNet", 14));
  EXPECT_EQ(load_error(channel), Errc::ValidationError);

  json mac = minimal();
  mac["nodes"].push_back(testing::bot_node(0));
  mac["nodes"][1]["mac"] = "not-a-mac";
  EXPECT_EQ(load_error(mac), Errc::ValidationError);

  json kind = minimal();
  kind["nodes"].push_back({{"kind", "toaster"}, {"mac", "02:00:00:00:30:00"}});
  EXPECT_EQ(load_error(kind), Errc::ValidationError);

  json ssid = minimal();
  ssid["nodes"].push_back(testing::ap_node("ap", testing::kApMac, std::string(33, 'x')));
  EXPECT_NE(load_error(ssid), Errc::Io);

  json pos = minimal();
  pos["nodes"].push_back(testing::bot_node(0, json::array({1})));
  EXPECT_EQ(load_error(pos), Errc::ValidationError);
}

TEST(ScenarioTest, RejectsBadEventsAndCommands) {
  json unknown = minimal();
  unknown["events"] = json::array({{{"at_s", 1}, {"node", "ghost"}, {"action", "power_off"}}});
  EXPECT_EQ(load_error(unknown), Errc::ValidationError);
  json action = minimal();
  action["events"] = json::array({{{"at_s", 1}, {"node", "handler"}, {"action", "explode"}}});
  EXPECT_EQ(load_error(action), Errc::ValidationError);
  json move = minimal();
  move["events"] = json::array({{{"at_s", 1}, {"node", "handler"}, {"action", "move"}}});
  EXPECT_EQ(load_error(move), Errc::ValidationError);
  json cmd = minimal();
  cmd["commands"] = json::array({{{"at_s", 1}, {"command", "dance"}}});
  EXPECT_EQ(load_error(cmd), Errc::ValidationError);
  json dur = minimal();
  dur["commands"] = json::array({{{"at_s", 1}, {"command", "attack"}, {"ssid", "x"}, {"duration_s", 0}}});
  EXPECT_EQ(load_error(dur), Errc::ValidationError);
}

TEST(ScenarioTest, ParsesEventsAndCommands) {
  json j = testing::attack_world(1, 1, 1);
  j["events"] = json::array({{{"at_s", 5}, {"node", "bot0"}, {"action", "move"}, {"position", {1, 2}}},
                             {{"at_s", 6}, {"node", "02:00:00:00:20:00"}, {"action", "power_off"}}});
  j["commands"] = json::array({{{"at_s", 4}, {"command", "scan"}},
                               {{"at_s", 8}, {"command", "attack"}, {"bssid", testing::kApMac}, {"duration_s", 9}}});
  const ScenarioConfig c = load(j);
  ASSERT_EQ(c.events.size(), 2u);
  EXPECT_EQ(c.events[0].action, WorldEvent::Action::Move);
  EXPECT_DOUBLE_EQ(c.events[0].position.y, 2.0);
  ASSERT_EQ(c.commands.size(), 2u);
  EXPECT_EQ(c.commands[1].command.type, HandlerCommand::Type::Attack);
  EXPECT_EQ(*c.commands[1].command.duration_s, 9u);
}

TEST(ScenarioTest, MalformedJsonIsAParseError) {
  EXPECT_EQ(load_text_error("{nodes:"), Errc::ParseError);
  EXPECT_EQ(load_text_error("[1, 2]"), Errc::ParseError);
  EXPECT_EQ(load_text_error(""), Errc::ParseError);
}

TEST(ScenarioTest, MissingFileIsIo) {
  try {
    load_scenario_file("/nonexistent/scenario.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Io);
  }
}

TEST(ScenarioTest, ShippedScenariosLoad) {
  for (const char* name : {"suppression", "standby", "monotonicity", "resilience", "out_of_range", "retarget",
                           "minimal"}) {
    const std::string path = std::string(WBSIM_SCENARIO_DIR) + "/" + name + ".json";
    EXPECT_NO_THROW(load_scenario_file(path)) << path;
  }
}

}  // namespace
}  // namespace wbsim
