/*
 Copyright 2026 The uavmpc Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <string>
#include <vector>

#include "uavmpc/beamforming.hpp"
#include "uavmpc/mpc.hpp"

namespace uavmpc {

enum class BaselineKind { kOfflineMpc, kOfflineJoint, kMrt, kZf, kEqual, kProposed };

std::string to_string(BaselineKind kind);
/// Accepts "offline-mpc", "offline-joint", "bf-mrt", "bf-zf", "bf-equal", "bf-proposed".
BaselineKind parse_baseline(const std::string& name);

/// Plans the whole mission window by window from predicted (undisturbed)
/// states, then executes the control sequence open loop.
MissionTrace run_offline_mpc(const ScenarioConfig& cfg, const UserSet& users,
                             const MissionOptions& options = {});

/// One alternating solve over the whole mission horizon from the start,
/// executed open loop for every slot of that horizon.
MissionTrace run_offline_joint(const ScenarioConfig& cfg, const UserSet& users,
                               const MissionOptions& options = {});

/// Replays recorded controls from the start against a fresh disturbance stream.
MissionTrace execute_open_loop(const ScenarioConfig& cfg, const UserSet& users,
                               const std::vector<StepRecord>& controls,
                               const MissionOptions& options, const std::string& scheme);

/// Fixed beamformers with sum ||w_n||^2 equal to `budget`. Throws DomainError
/// for zero-forcing with fewer antennas than users or a rank-deficient stack.
SlotBeams beamform_baseline(BaselineKind kind, const std::vector<CVec>& h, double budget);

/// Percentage of steps whose weakest user meets `rate_min`.
double qos_satisfaction(const MissionTrace& trace, double rate_min);
double qos_satisfaction(const std::vector<std::vector<double>>& step_rates, double rate_min);

}  // namespace uavmpc
