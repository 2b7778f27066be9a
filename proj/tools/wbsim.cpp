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

#include <csignal>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "wbsim.hpp"
#include "wbsim/http_server.hpp"

namespace {

using namespace wbsim;

MacAddress mac_arg(const std::string& text, const char* what) {
  MacAddress m;
  if (!MacAddress::try_parse(text, m)) throw Error(Errc::BadAddress, std::string(what) + ": " + text);
  return m;
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& metrics_path,
            const std::string& events_path) {
  ScenarioConfig cfg = load_scenario_file(path);
  if (seed) cfg.seed = *seed;
  const RunResult r = run_scenario(cfg);
  write_outputs(r.log, r.metrics, metrics_path, events_path);
  if (metrics_path.empty()) std::cout << metrics_to_json(r.metrics).dump(2) << "\n";
  return 0;
}

httplib::Server* g_server = nullptr;

int cmd_serve(const std::string& path, int port, const std::string& host, std::optional<double> time_scale,
              std::optional<std::uint64_t> seed, std::optional<double> horizon, const std::string& static_dir) {
  ScenarioConfig cfg = load_scenario_file(path);
  if (seed) cfg.seed = *seed;
  if (time_scale) cfg.time_scale = *time_scale;
  if (horizon) cfg.horizon_s = *horizon;
  if (!(cfg.time_scale > 0)) throw Error(Errc::ValidationError, "time scale must be positive");

  LiveSession session(cfg);
  httplib::Server server;
  mount_api(server, session, static_dir);
  session.start();
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::cerr << "serving on http://" << host << ":" << port << " (time scale " << cfg.time_scale << ")\n";
  const bool ok = server.listen(host, port);
  g_server = nullptr;
  session.stop();
  if (!ok) throw Error(Errc::Io, "cannot listen on " + host + ":" + std::to_string(port));
  return 0;
}

void print_frame(const Frame& f) {
  std::cout << to_hex(encode_frame(f), ' ') << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wbsim: discrete-event simulator of a wireless deauthentication botnet"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "run a scenario to its horizon");
  std::string run_path, metrics_path, events_path;
  std::optional<std::uint64_t> run_seed;
  run->add_option("scenario", run_path, "scenario JSON file")->required();
  run->add_option("--seed", run_seed, "override the scenario seed");
  run->add_option("--metrics", metrics_path, "write metrics JSON here (default: stdout)");
  run->add_option("--events", events_path, "write the JSONL event log here");

  // serve
  auto* serve = app.add_subcommand("serve", "run live and expose the control API");
  std::string serve_path, host = "127.0.0.1", static_dir;
  int port = 8080;
  std::optional<double> time_scale, horizon;
  std::optional<std::uint64_t> serve_seed;
  serve->add_option("scenario", serve_path, "scenario JSON file")->required();
  serve->add_option("--port", port, "TCP port")->capture_default_str();
  serve->add_option("--host", host, "bind address")->capture_default_str();
  serve->add_option("--time-scale", time_scale, "sim-seconds per wall-second");
  serve->add_option("--seed", serve_seed, "override the scenario seed");
  serve->add_option("--horizon", horizon, "override horizon_s");
  serve->add_option("--static", static_dir, "directory of console assets to serve at /");

  // craft
  auto* craft = app.add_subcommand("craft", "print an encoded frame as hex");
  craft->require_subcommand(1);
  auto* craft_deauth = craft->add_subcommand("deauth", "deauthentication frame");
  std::string ap_text, client_text;
  std::uint16_t reason = kDefaultDeauthReason, seq = 0;
  craft_deauth->add_option("--ap", ap_text, "AP BSSID")->required();
  craft_deauth->add_option("--client", client_text, "client MAC")->required();
  craft_deauth->add_option("--reason", reason, "reason code")->capture_default_str();
  craft_deauth->add_option("--seq", seq, "sequence number")->capture_default_str();
  auto* craft_beacon = app.get_subcommand("craft")->add_subcommand("beacon", "beacon frame");
  std::string bssid_text, ssid;
  int channel = 1;
  std::uint64_t timestamp = 0;
  craft_beacon->add_option("--bssid", bssid_text, "BSSID")->required();
  craft_beacon->add_option("--ssid", ssid, "SSID")->required();
  craft_beacon->add_option("--channel", channel, "DS channel")->capture_default_str();
  craft_beacon->add_option("--timestamp", timestamp, "TSF timestamp")->capture_default_str();
  craft_beacon->add_option("--seq", seq, "sequence number")->capture_default_str();

  // dissect
  auto* dissect = app.add_subcommand("dissect", "decode a hex frame");
  std::string hex;
  dissect->add_option("hex", hex, "frame bytes in hex (separators allowed)")->required();

  // encode-task / decode-task
  auto* enc = app.add_subcommand("encode-task", "print a task packet");
  int task_channel = 1;
  std::uint32_t task_duration = 30;
  std::string task_ssid, task_ap;
  std::vector<std::string> task_clients;
  bool task_hex = false;
  enc->add_option("--channel", task_channel, "target channel")->required();
  enc->add_option("--duration", task_duration, "attack duration in seconds")->required();
  enc->add_option("--ssid", task_ssid, "target SSID")->required();
  enc->add_option("--ap", task_ap, "target BSSID")->required();
  enc->add_option("--client", task_clients, "client MAC (repeatable)");
  enc->add_flag("--hex", task_hex, "print hex instead of text");
  auto* dec = app.add_subcommand("decode-task", "decode a task packet");
  std::string task_text;
  dec->add_option("payload", task_text, "packet text")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_path, run_seed, metrics_path, events_path);
    if (*serve) return cmd_serve(serve_path, port, host, time_scale, serve_seed, horizon, static_dir);
    if (*craft_deauth) {
      print_frame(make_deauth(mac_arg(ap_text, "--ap"), mac_arg(client_text, "--client"), reason, seq));
    } else if (*craft_beacon) {
      print_frame(make_beacon(mac_arg(bssid_text, "--bssid"), ssid, Channel(channel), timestamp, seq));
    } else if (*dissect) {
      const auto bytes = from_hex(hex);
      if (!bytes) throw Error(Errc::Malformed, "not a hex string");
      std::cout << frame_to_json(decode_frame(*bytes)).dump(2) << "\n";
    } else if (*enc) {
      TaskPacket t{Channel(task_channel), task_duration, task_ssid, mac_arg(task_ap, "--ap"), {}};
      for (const auto& c : task_clients) t.client_macs.push_back(mac_arg(c, "--client"));
      const std::string text = encode_task_text(t);
      std::cout << (task_hex ? to_hex(to_bytes(text)) : text) << "\n";
    } else if (*dec) {
      std::cout << task_to_json(decode_task(std::string_view(task_text))).dump(2) << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
