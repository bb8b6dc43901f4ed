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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "uavmpc/beamforming.hpp"
#include "uavmpc/optimizer.hpp"
#include "uavmpc/scenario.hpp"

namespace uavmpc {

/// One applied control and its measured outcome.
struct StepRecord {
  int step = 0;
  Vec3 position = Vec3::Zero();
  Vec3 previous_velocity = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  SlotBeams beams;
  /// Effective disturbance after the altitude clamp; next = position + velocity * t_c + disturbance.
  Vec3 disturbance = Vec3::Zero();
  Vec3 next_position = Vec3::Zero();
  std::vector<double> sinr;
  std::vector<double> rate;
  double propulsion_power_w = 0.0;
  double comm_power_w = 0.0;
  double total_power_w = 0.0;
  /// Window objective of the plan the control came from.
  double objective = 0.0;
  std::vector<double> objective_history;
  int ao_iterations = 0;
  std::string ao_stop;
  /// True when the braking fallback replaced the planned control.
  bool fallback = false;
  /// Every user met the rate floor at this step.
  bool rate_floor_met = false;
};

struct MissionTrace {
  std::string scheme = "mpc";
  std::vector<StepRecord> steps;
  std::string termination;
  Vec3 final_position = Vec3::Zero();
  double terminal_distance = 0.0;
  /// Propulsion plus communication energy over the applied steps.
  double energy_j = 0.0;
};

struct MissionOptions {
  /// Seed of the disturbance stream; defaults to the scenario seed.
  std::optional<std::uint64_t> disturbance_seed;
};

/// Uniform in the ball of radius delta, or uniform on its sphere.
Vec3 sample_disturbance(Rng& rng, double delta, DisturbanceMode mode);

/// Applies a control from `position`, adds the disturbance and clamps the
/// altitude. Returns the effective disturbance.
Vec3 apply_step(const ScenarioConfig& cfg, const Vec3& position, const Vec3& velocity,
                const Vec3& disturbance, Vec3& next_position);

/// Velocity that brakes from `previous` at the acceleration limit.
Vec3 braking_velocity(const ScenarioConfig& cfg, const Vec3& previous);

/// Fills rates, SINRs and power terms of a record from its position, velocity and beams.
void evaluate_step(const ScenarioConfig& cfg, const UserSet& users, const NlosBank& bank,
                   StepRecord& rec);

/// Receding-horizon closed loop: plan a window from the measured state, apply
/// its first control, disturb, repeat until arrival or the step cap.
MissionTrace run_mission(const ScenarioConfig& cfg, const UserSet& users,
                         const MissionOptions& options = {});

/// Independent re-check of every applied control; the empty string when all hold.
std::string audit_trace(const ScenarioConfig& cfg, const MissionTrace& trace, double tol = 1e-6);

/// Maximum deviation between recorded positions and a replay of the recorded
/// velocities and disturbances from the first position.
double replay_error(const ScenarioConfig& cfg, const MissionTrace& trace);

}  // namespace uavmpc
