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

#ifndef WBSIM_OUTPUTS_HPP
#define WBSIM_OUTPUTS_HPP

#include <fstream>
#include <string>

#include "wbsim/error.hpp"
#include "wbsim/event_log.hpp"
#include "wbsim/metrics.hpp"

namespace wbsim {

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(Errc::Io, "write failed: " + path);
}

/// Metrics as a pretty-printed JSON document, events as one JSON object per
/// line. Empty paths are skipped.
inline void write_outputs(const EventLog& log, const Metrics& metrics, const std::string& metrics_path,
                          const std::string& events_path) {
  if (!metrics_path.empty()) write_text(metrics_path, metrics_to_json(metrics).dump(2) + "\n");
  if (!events_path.empty()) write_text(events_path, log.to_jsonl());
}

}  // namespace wbsim

#endif  // WBSIM_OUTPUTS_HPP
