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

// Everything except the HTTP front end, which needs httplib.

#ifndef WBSIM_WBSIM_HPP
#define WBSIM_WBSIM_HPP

#include "wbsim/access_point.hpp"
#include "wbsim/bot.hpp"
#include "wbsim/bytes.hpp"
#include "wbsim/client.hpp"
#include "wbsim/control_api.hpp"
#include "wbsim/error.hpp"
#include "wbsim/event_log.hpp"
#include "wbsim/frames.hpp"
#include "wbsim/handler.hpp"
#include "wbsim/live_session.hpp"
#include "wbsim/mac_address.hpp"
#include "wbsim/medium.hpp"
#include "wbsim/metrics.hpp"
#include "wbsim/node.hpp"
#include "wbsim/outputs.hpp"
#include "wbsim/rng.hpp"
#include "wbsim/scenario.hpp"
#include "wbsim/sim_time.hpp"
#include "wbsim/simulator.hpp"
#include "wbsim/task_protocol.hpp"
#include "wbsim/testbench.hpp"

#endif  // WBSIM_WBSIM_HPP
