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

#ifndef WBSIM_SIM_TIME_HPP
#define WBSIM_SIM_TIME_HPP

#include <cmath>
#include <cstdint>

namespace wbsim {

/// Simulation clock in integer microseconds.
using SimTime = std::int64_t;

inline constexpr SimTime kMicrosPerSecond = 1'000'000;
/// One 802.11 time unit.
inline constexpr SimTime kMicrosPerTu = 1024;

inline SimTime from_seconds(double s) { return static_cast<SimTime>(std::llround(s * 1e6)); }
inline constexpr SimTime from_millis(std::int64_t ms) { return ms * 1000; }
inline constexpr double to_seconds(SimTime t) { return static_cast<double>(t) / 1e6; }

}  // namespace wbsim

#endif  // WBSIM_SIM_TIME_HPP
