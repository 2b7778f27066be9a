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

#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "support/log_oracle.hpp"
#include "support/worlds.hpp"
#include "wbsim.hpp"

namespace wbsim {
namespace {

using testing::json;
using testing::load;

ScenarioConfig shipped(const std::string& name) {
  return load_scenario_file(std::string(WBSIM_SCENARIO_DIR) + "/" + name + ".json");
}

/// Random world: 1..4 clients with mixed rates, 0..3 bots, optional loss.
ScenarioConfig random_world(std::uint64_t seed) {
  Rng rng(seed);
  const int clients = rng.uniform_int(1, 4);
  const int bots = rng.uniform_int(0, 3);
  json j = testing::attack_world(0, 0, bots, seed, rng.uniform_int(5, 20), 40);
  for (int i = 0; i < clients; ++i) {
    const double rates[] = {0.0, 0.1, 0.5, 2.0, 10.0};
    j["nodes"].push_back(testing::client_node(i, rates[rng.uniform_int(0, 4)]));
  }
  if (rng.bernoulli(0.5)) j["loss_probability"] = 0.2;
  return load(j);
}

void expect_oracle_matches(const ScenarioConfig& cfg) {
  const RunResult r = run_scenario(cfg);
  const Metrics oracle = testing::metrics_from_log(r.log.to_jsonl(), cfg, from_seconds(cfg.horizon_s));
  EXPECT_EQ(metrics_to_json(oracle).dump(), metrics_to_json(r.metrics).dump()) << "seed " << cfg.seed;
}

// ---- determinism ----

TEST(EngineTest, SameSeedSameLog) {
  const ScenarioConfig cfg = shipped("suppression");
  const RunResult a = run_scenario(cfg);
  const RunResult b = run_scenario(cfg);
  EXPECT_GT(a.log.size(), 1000u);
  EXPECT_EQ(a.log.to_jsonl(), b.log.to_jsonl());
  EXPECT_EQ(metrics_to_json(a.metrics), metrics_to_json(b.metrics));
}

TEST(EngineTest, SeedChangesTheRun) {
  ScenarioConfig cfg = shipped("suppression");
  const std::string a = run_scenario(cfg).log.to_jsonl();
  cfg.seed = 8;
  EXPECT_NE(a, run_scenario(cfg).log.to_jsonl());
}

TEST(EngineTest, LossyWorldsAreDeterministicToo) {
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    ScenarioConfig cfg = random_world(seed);
    cfg.loss_probability = 0.3;
    EXPECT_EQ(run_scenario(cfg).log.to_jsonl(), run_scenario(cfg).log.to_jsonl()) << seed;
  }
}

// ---- the log oracle ----

TEST(EngineTest, OracleMatchesShippedScenarios) {
  for (const char* name : {"suppression", "standby", "resilience", "out_of_range", "retarget", "minimal"}) {
    SCOPED_TRACE(name);
    expect_oracle_matches(shipped(name));
  }
}

TEST(EngineTest, OracleMatchesRandomWorlds) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) expect_oracle_matches(random_world(seed));
}

TEST(EngineTest, OracleMatchesWithPowerCycledClients) {
  json j = testing::attack_world(2, 2.0, 1, 4, 10, 40);
  j["events"] = json::array({{{"at_s", 2}, {"node", "client0"}, {"action", "power_off"}},
                             {{"at_s", 20}, {"node", "client0"}, {"action", "power_on"}},
                             {{"at_s", 25}, {"node", "client1"}, {"action", "power_off"}}});
  expect_oracle_matches(load(j));
}

// ---- causality and invariants ----

TEST(EngineTest, LogIsOrderedInTimeAndSequence) {
  const RunResult r = run_scenario(shipped("retarget"));
  const auto& recs = r.log.records();
  for (std::size_t i = 1; i < recs.size(); ++i) {
    ASSERT_LE(recs[i - 1].t, recs[i].t) << i;
    ASSERT_LT(recs[i - 1].seq, recs[i].seq) << i;
  }
}

TEST(EngineTest, EveryDeliveryFollowsItsTransmission) {
  const ScenarioConfig cfg = random_world(42);
  Simulator sim(cfg);
  sim.run();
  // A spoofed-deauth disconnect always comes just after a deauth tx that
  // listed the client as a receiver.
  std::map<std::string, std::set<SimTime>> deauth_at;
  for (const auto& rec : sim.log().records()) {
    if (rec.kind == "tx" && rec.detail["frame"]["kind"] == "deauth") {
      for (const auto& to : rec.detail["delivered"]) deauth_at[to.get<std::string>()].insert(rec.t);
    }
    if (rec.kind == "disconnected" && rec.detail["reason"] == "deauth") {
      const auto& sent = deauth_at[rec.node];
      auto it = sent.upper_bound(rec.t);
      ASSERT_NE(it, sent.begin()) << rec.node << " at " << rec.t;
      EXPECT_LT(rec.t - *std::prev(it), 100) << rec.node << " at " << rec.t;
    }
  }
}

TEST(EngineTest, ConnectionsAlternatePerClient) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RunResult r = run_scenario(random_world(seed));
    std::map<std::string, bool> up;
    for (const auto& rec : r.log.records()) {
      if (rec.kind == "connected") {
        EXPECT_FALSE(up[rec.node]) << rec.node << " joined twice";
        up[rec.node] = true;
      } else if (rec.kind == "disconnected") {
        EXPECT_TRUE(up[rec.node]) << rec.node << " left while down";
        up[rec.node] = false;
      }
    }
  }
}

TEST(EngineTest, AssociationIsExclusiveAtEveryStep) {
  const ScenarioConfig cfg = shipped("retarget");
  Simulator sim(cfg);
  while (!sim.finished()) {
    sim.run_until(sim.now() + from_millis(50));
    for (NodeId id = 0; id < sim.node_count(); ++id) {
      const ClientNode* c = sim.node(id).station();
      if (!c || !c->connected()) continue;
      int holders = 0;
      for (NodeId ap = 0; ap < sim.node_count(); ++ap) {
        if (const auto* a = dynamic_cast<const ApNode*>(&sim.node(ap))) {
          if (a->core().is_associated(c->mac()) && a->mac() == *c->associated_bssid()) ++holders;
        }
      }
      ASSERT_EQ(holders, 1) << c->name();
    }
  }
}

TEST(EngineTest, DiscoveryOnlyListsTrueClients) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const RunResult r = run_scenario(random_world(seed));
    for (const auto& d : r.metrics.discoveries) {
      EXPECT_EQ(d.discovered_count, d.listed_count) << seed;
      EXPECT_LE(d.discovered_count, d.true_client_count) << seed;
    }
  }
}

TEST(EngineTest, DeauthsOnlyTargetListedClients) {
  const ScenarioConfig cfg = shipped("standby");
  const RunResult r = run_scenario(cfg);
  std::set<std::string> listed;
  for (const auto& rec : r.log.records()) {
    if (rec.kind == "clients_discovered") {
      for (const auto& c : rec.detail["clients"]) listed.insert(c.get<std::string>());
    }
  }
  ASSERT_EQ(listed.size(), 3u);
  for (const auto& rec : r.log.records()) {
    if (rec.kind == "tx" && rec.detail["frame"]["kind"] == "deauth") {
      EXPECT_TRUE(listed.count(rec.detail["frame"]["ra"].get<std::string>()));
    }
  }
}

TEST(EngineTest, TestBenchSeesTheAttack) {
  json j = testing::attack_world(1, 2.0, 1, 13, 20, 40);
  j["nodes"].push_back({{"kind", "testbench"}, {"name", "bench"}, {"mac", "02:00:00:00:30:00"},
                        {"target_ssid", "TestNet"}, {"position", {50, 5}}});
  Simulator sim(load(j));
  sim.run();
  const auto& bench = sim.get<TestBenchNode>("bench");
  EXPECT_EQ(bench.mode(), BenchMode::StationMonitor);
  const auto& attack = sim.handler().attacks().at(0);
  bool up_before = false, down_during = false, up_after = false;
  for (const auto& r : bench.connectivity_log()) {
    const bool up = r.detail["connected"].get<bool>();
    if (r.at < attack.start) up_before |= up;
    if (r.at > attack.start + from_seconds(1) && r.at < attack.deadline) {
      down_during |= !up;
      EXPECT_FALSE(up) << r.at;
    }
    if (r.at > attack.deadline + from_seconds(5)) up_after |= up;
  }
  EXPECT_TRUE(up_before);
  EXPECT_TRUE(down_during);
  EXPECT_TRUE(up_after);
}

TEST(EngineTest, TestBenchWithoutATargetRunsItsOwnAp) {
  json j = testing::attack_world(0, 0, 0, 13, 20, 10);
  j["nodes"][0].erase("autoselect");
  j["nodes"].erase(1);
  j["nodes"].push_back({{"kind", "testbench"}, {"name", "bench"}, {"mac", "02:00:00:00:30:00"},
                        {"target_ssid", "TestNet"}, {"position", {50, 5}}});
  j["nodes"].push_back(testing::client_node(0, 1.0, "testbench", {52, 5}));
  Simulator sim(load(j));
  sim.run();
  const auto& bench = sim.get<TestBenchNode>("bench");
  EXPECT_EQ(bench.mode(), BenchMode::LocalAp);
  EXPECT_TRUE(sim.get<ClientNode>("client0").connected());
  EXPECT_EQ(bench.connectivity_log().back().detail["devices"], json::array({testing::client_mac(0)}));
}

// ---- edges ----

TEST(EngineTest, ZeroHorizonProducesNothing) {
  ScenarioConfig cfg = shipped("suppression");
  cfg.horizon_s = 0;
  const RunResult r = run_scenario(cfg);
  EXPECT_TRUE(r.log.empty());
  for (const auto& c : r.metrics.clients) {
    EXPECT_EQ(c.total_downtime_s, 0.0);
    EXPECT_FALSE(c.time_to_first_disconnect_s);
  }
  for (const auto& b : r.metrics.bots) EXPECT_EQ(b.deauth_frames_sent, 0u);
  EXPECT_TRUE(r.metrics.discoveries.empty());
}

TEST(EngineTest, HorizonBeforeTheScanEndsIsQuiet) {
  ScenarioConfig cfg = shipped("suppression");
  cfg.horizon_s = 4;
  const RunResult r = run_scenario(cfg);
  EXPECT_FALSE(r.log.empty());
  EXPECT_TRUE(r.metrics.attacks.empty());
  EXPECT_TRUE(r.metrics.discoveries.empty());
  EXPECT_EQ(r.metrics.attack().target, "");
  for (const auto& c : r.metrics.clients) EXPECT_EQ(c.total_downtime_s, 0.0);
}

TEST(EngineTest, DowntimeTracksTheAttackDuration) {
  const RunResult r = run_scenario(shipped("suppression"));
  for (const auto& c : r.metrics.clients) {
    EXPECT_GE(c.total_downtime_s, 30.0) << c.name;
    EXPECT_LE(c.total_downtime_s, 31.5) << c.name;
    EXPECT_EQ(c.reconnect_successes, 1u) << c.name;
  }
  EXPECT_EQ(r.metrics.bots[0].deauth_frames_sent, 900u);
  EXPECT_EQ(r.metrics.bots[0].beacons_sent, 300u);
}

TEST(EngineTest, MetricInvariantsHoldOnRandomWorlds) {
  for (std::uint64_t seed = 200; seed < 230; ++seed) {
    const ScenarioConfig cfg = random_world(seed);
    const RunResult r = run_scenario(cfg);
    for (const auto& c : r.metrics.clients) {
      EXPECT_GE(c.total_downtime_s, 0.0);
      EXPECT_LE(c.total_downtime_s, cfg.horizon_s);
      EXPECT_LE(c.reconnect_successes, c.reconnect_attempts);
    }
    for (const auto& d : r.metrics.discoveries) {
      if (d.true_client_count > 0) {
        EXPECT_DOUBLE_EQ(d.recall, static_cast<double>(d.discovered_count) / d.true_client_count);
      } else {
        EXPECT_EQ(d.recall, 0.0);
      }
    }
  }
}

TEST(EngineTest, NoAttackMeansNoDowntime) {
  json j = testing::attack_world(3, 2.0, 1, 9, 30, 30);
  j["nodes"][0].erase("autoselect");
  const RunResult r = run_scenario(load(j));
  for (const auto& c : r.metrics.clients) {
    EXPECT_EQ(c.total_downtime_s, 0.0) << c.name;
    EXPECT_EQ(c.reconnect_successes, 0u);
  }
  for (const auto& b : r.metrics.bots) EXPECT_EQ(b.deauth_frames_sent + b.beacons_sent, 0u);
}

TEST(EngineTest, FullLossIsolatesEveryone) {
  json j = testing::attack_world(2, 2.0, 1, 9, 30, 30);
  j["loss_probability"] = 1.0;
  const RunResult r = run_scenario(load(j));
  for (const auto& c : r.metrics.clients) EXPECT_EQ(c.reconnect_attempts, 0u);
  for (const auto& rec : r.log.records()) {
    if (rec.kind == "tx") {
      ASSERT_TRUE(rec.detail["delivered"].empty());
    }
    ASSERT_NE(rec.kind, "connected");
  }
}

TEST(EngineTest, PowerCycleAndMove) {
  json j = testing::attack_world(1, 2.0, 0, 3, 30, 30);
  j["nodes"][0].erase("autoselect");
  j["events"] = json::array({{{"at_s", 5}, {"node", "client0"}, {"action", "power_off"}},
                             {{"at_s", 8}, {"node", "client0"}, {"action", "power_on"}},
                             {{"at_s", 15}, {"node", "client0"}, {"action", "move"}, {"position", {5000, 0}}}});
  Simulator sim(load(j));
  const auto& c = sim.get<ClientNode>("client0");
  sim.run_until(from_seconds(4.9));
  EXPECT_TRUE(c.connected());
  sim.run_until(from_seconds(6));
  EXPECT_FALSE(sim.status()["clients"][0]["connected"].get<bool>());
  sim.run_until(from_seconds(14));
  EXPECT_TRUE(c.connected());
  sim.run_until(from_seconds(20));
  EXPECT_FALSE(c.connected());
  const Metrics m = sim.metrics();
  // 3 s off, the rejoin, then 2 s since the link timed out at about 18 s.
  EXPECT_GT(m.clients[0].total_downtime_s, 5.0);
  EXPECT_LT(m.clients[0].total_downtime_s, 7.0);
}

TEST(EngineTest, CommandToPoweredOffHandlerIsRejected) {
  json j = testing::attack_world(1, 2.0, 0, 3, 30, 30);
  j["nodes"][0].erase("autoselect");
  j["events"] = json::array({{{"at_s", 1}, {"node", "handler"}, {"action", "power_off"}}});
  Simulator sim(load(j));
  sim.run_until(from_seconds(2));
  const CommandResult r = sim.execute(HandlerCommand::scan());
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.error, Errc::RadioOff);
  EXPECT_EQ(sim.log().records().back().kind, "command");
  EXPECT_EQ(sim.log().records().back().detail["error"], "RadioOff");
}

TEST(EngineTest, SubmitInThePastIsRejected) {
  Simulator sim(shipped("minimal"));
  sim.run_until(from_seconds(2));
  EXPECT_THROW(sim.submit(HandlerCommand::scan(), from_seconds(1)), Error);
}

TEST(EngineTest, RunUntilStopsAtTheHorizon) {
  Simulator sim(shipped("minimal"));
  sim.run_until(from_seconds(100));
  EXPECT_EQ(sim.now(), from_seconds(10));
  EXPECT_TRUE(sim.finished());
}

TEST(EngineTest, MoreBotsDoNotChangeWhatEachSends) {
  // Frames from other bots never reach a bot's state machine.
  const RunResult one = run_scenario(load(testing::attack_world(2, 2.0, 1, 5)));
  const RunResult three = run_scenario(load(testing::attack_world(2, 2.0, 3, 5)));
  EXPECT_EQ(one.metrics.bots[0].deauth_frames_sent, three.metrics.bots[0].deauth_frames_sent);
  for (const auto& b : three.metrics.bots) EXPECT_EQ(b.deauth_frames_sent, 600u);
}

// ---- outputs ----

TEST(OutputsTest, WritesMetricsAndEvents) {
  const auto dir = std::filesystem::temp_directory_path() / "wbsim_outputs_test";
  std::filesystem::create_directories(dir);
  const RunResult r = run_scenario(shipped("suppression"));
  write_outputs(r.log, r.metrics, (dir / "m.json").string(), (dir / "e.jsonl").string());
  std::ifstream m(dir / "m.json"), e(dir / "e.jsonl");
  EXPECT_EQ(json::parse(m), metrics_to_json(r.metrics));
  std::stringstream ss;
  ss << e.rdbuf();
  EXPECT_EQ(ss.str(), r.log.to_jsonl());
  const auto back = testing::parse_jsonl(ss.str());
  ASSERT_EQ(back.size(), r.log.size());
  EXPECT_EQ(record_from_json(back[3]).kind, r.log.records()[3].kind);
  std::filesystem::remove_all(dir);
}

TEST(OutputsTest, ZeroHorizonWritesAnEmptyEventsFile) {
  const auto dir = std::filesystem::temp_directory_path() / "wbsim_outputs_empty";
  std::filesystem::create_directories(dir);
  ScenarioConfig cfg = shipped("suppression");
  cfg.horizon_s = 0;
  const RunResult r = run_scenario(cfg);
  write_outputs(r.log, r.metrics, (dir / "m.json").string(), (dir / "e.jsonl").string());
  EXPECT_TRUE(std::filesystem::exists(dir / "e.jsonl"));
  EXPECT_EQ(std::filesystem::file_size(dir / "e.jsonl"), 0u);
  std::ifstream m(dir / "m.json");
  const json metrics = json::parse(m);
  for (const auto& c : metrics["clients"]) EXPECT_EQ(c["total_downtime_s"], 0.0);
  std::filesystem::remove_all(dir);
}

TEST(OutputsTest, UnwritablePathIsIo) {
  const RunResult r = run_scenario(shipped("minimal"));
  try {
    write_outputs(r.log, r.metrics, "/nonexistent/dir/m.json", "");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::Io);
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/m.json"), std::string::npos);
  }
}

// ---- live mode ----

TEST(LiveTest, StepsMatchBatchWithScheduledCommands) {
  json j = testing::attack_world(3, 2.0, 1, 21, 10, 30);
  j["nodes"][0].erase("autoselect");
  ScenarioConfig live_cfg = load(j);
  j["commands"] = json::array({{{"at_s", 1.5}, {"command", "scan"}},
                               {{"at_s", 6.0}, {"command", "attack"}, {"bssid", testing::kApMac}}});
  const ScenarioConfig batch_cfg = load(j);

  LiveSession live(live_cfg);
  live.step_to(from_seconds(1.5));
  auto scan = live.submit(HandlerCommand::scan());
  live.step();
  EXPECT_TRUE(scan.get().accepted);
  live.step_to(from_seconds(6.0));
  auto attack = live.submit(HandlerCommand::attack(MacAddress::parse(testing::kApMac)));
  live.step();
  EXPECT_TRUE(attack.get().accepted);
  live.step_to(from_seconds(30));
  ASSERT_TRUE(live.snapshot()->finished);

  Simulator batch(batch_cfg);
  batch.run_until(from_seconds(30));
  EXPECT_EQ(live.simulator().log().to_jsonl(), batch.log().to_jsonl());
  EXPECT_EQ(metrics_to_json(live.simulator().metrics()), metrics_to_json(batch.metrics()));
}

TEST(LiveTest, AutoselectIsOffInLiveMode) {
  LiveSession live(shipped("suppression"));
  live.step_to(from_seconds(20));
  EXPECT_EQ(live.simulator().handler().scans_completed(), 0u);
  EXPECT_FALSE(live.simulator().handler().attack_active());
}

TEST(LiveTest, SnapshotsAndEventStream) {
  LiveSession live(shipped("suppression"));
  EXPECT_EQ(live.snapshot()->now, 0);
  EXPECT_EQ(live.snapshot()->status["phase"], "Serving");
  live.step_to(from_seconds(1));
  EXPECT_EQ(live.snapshot()->now, from_seconds(1));
  std::vector<std::string> events;
  const std::size_t next = live.events_since(0, events);
  EXPECT_EQ(next, events.size());
  EXPECT_EQ(events.size(), live.simulator().log().size());
  std::vector<std::string> more;
  EXPECT_EQ(live.events_since(next, more), next);
  EXPECT_TRUE(more.empty());
}

TEST(LiveTest, ThreadedLoopAppliesCommandsAndStops) {
  ScenarioConfig cfg = shipped("suppression");
  cfg.time_scale = 20;
  LiveSession live(cfg);
  live.start();
  EXPECT_TRUE(live.running());
  EXPECT_TRUE(live.submit(HandlerCommand::scan()).get().accepted);
  for (int i = 0; i < 200 && live.snapshot()->status["scans_completed"].get<int>() == 0; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  EXPECT_EQ(live.snapshot()->aps.size(), 1u) << live.snapshot()->status.dump();
  live.stop();
  EXPECT_FALSE(live.running());
  const auto late = live.submit(HandlerCommand::scan());
  live.stop();
  EXPECT_FALSE(late.wait_for(std::chrono::seconds(1)) == std::future_status::timeout);
}

}  // namespace
}  // namespace wbsim
