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

#include "uavmpc/mpc.hpp"

namespace uavmpc {

inline constexpr int kTraceSchemaVersion = 1;

/// One row per applied step. Columns:
///   step, x, y, z, vx, vy, vz, dx, dy, dz, next_x, next_y, next_z,
///   propulsion_w, comm_w, total_w, objective, ao_iterations, ao_stop,
///   fallback, rate_floor_met, sum_rate, min_rate, rate_0..rate_{N-1},
///   sinr_0..sinr_{N-1}
/// preceded by a "# schema_version=" and a "# scheme=" comment line.
std::string trace_to_csv(const MissionTrace& trace);

/// Terminal distance, energy, mean rates and rate-floor satisfaction.
std::string trace_summary_json(const MissionTrace& trace, double rate_min);

}  // namespace uavmpc
