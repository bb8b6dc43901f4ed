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
#include "uavmpc/channel.hpp"
#include "uavmpc/conic.hpp"
#include "uavmpc/fbl.hpp"
#include "uavmpc/propulsion.hpp"
#include "uavmpc/scenario.hpp"

namespace uavmpc {

/// Positions and velocities over a window. position[0] is the measured start
/// and position[k + 1] = position[k] + velocity[k] * t_c.
struct TrajectoryPlan {
  std::vector<Vec3> position;
  std::vector<Vec3> velocity;
  /// Auxiliary distances [slot][user]; empty rows for slot 0 (fixed position).
  std::vector<std::vector<double>> aux_distance;

  int size() const { return static_cast<int>(velocity.size()); }
};

/// Position reached after the last control of the plan.
Vec3 terminal_position(const TrajectoryPlan& plan, double slot_duration_s);

/// Window boundary condition: measured position and the velocity applied in
/// the previous step (the acceleration limit couples to it).
struct WindowStart {
  Vec3 position = Vec3::Zero();
  Vec3 previous_velocity = Vec3::Zero();
};

/// Straight run toward the destination at the largest speed the speed,
/// acceleration and power limits admit, assuming the full communication
/// budget is spent every slot.
TrajectoryPlan straight_line_init(const ScenarioConfig& cfg, const WindowStart& start, int slots);

struct ConstraintReport {
  bool ok = true;
  std::string first_violation;
  double worst = 0.0;
};

/// Independent re-evaluation of kinematics, box, speed, acceleration and
/// total power limits. comm_power_w holds the communication power per slot.
ConstraintReport check_trajectory(const ScenarioConfig& cfg, const WindowStart& start,
                                  const TrajectoryPlan& plan,
                                  const std::vector<double>& comm_power_w, double tol = 1e-6);

struct P3Options {
  double weight_rate = 0.0;
  double weight_distance = 0.0;
  double weight_power = 0.0;
  double rate_min = 0.0;
  FblParams fbl;
  SolverOptions solver;
};

P3Options p3_options(const ScenarioConfig& cfg);

struct P3Result {
  SolveStatus status = SolveStatus::kNumericalFailure;
  TrajectoryPlan plan;
  int iterations = 0;
  /// (slot, user) pairs whose tangent interval was empty and whose rate was
  /// held fixed.
  int frozen_links = 0;
};

/// One SCA step of the trajectory problem with beams fixed. `channels` are
/// evaluated along `point`; their normalized parts stay frozen.
P3Result solve_p3(const ScenarioConfig& cfg, const UserSet& users, const WindowStart& start,
                  const TrajectoryPlan& point, const BeamPlan& beams,
                  const std::vector<SlotChannels>& channels, const P3Options& options);

}  // namespace uavmpc
