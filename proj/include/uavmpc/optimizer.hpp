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

#include <functional>
#include <string>
#include <vector>

#include "uavmpc/beamforming.hpp"
#include "uavmpc/channel.hpp"
#include "uavmpc/scenario.hpp"
#include "uavmpc/trajectory.hpp"

namespace uavmpc {

struct ObjectiveWeights {
  double rate = 0.0;
  double distance = 0.0;
  double power = 0.0;

  static ObjectiveWeights from_config(const ScenarioConfig& cfg);
};

/// Unweighted sums over the window plus the weighted objective value.
struct ObjectiveTerms {
  double rate_sum = 0.0;
  double distance_sum = 0.0;
  double power_sum = 0.0;
  double value = 0.0;
};

/// True objective: weighted sum-rate minus weighted squared distance to the
/// destination minus weighted propulsion power, summed over every slot. The
/// distance term of slot k uses the position its control leads to.
ObjectiveTerms objective_eval(const ScenarioConfig& cfg, const ObjectiveWeights& weights,
                              const std::vector<SlotChannels>& channels,
                              const TrajectoryPlan& plan, const BeamPlan& beams);

/// Everything fixed for one receding-horizon window.
struct WindowProblem {
  const ScenarioConfig* cfg = nullptr;
  const UserSet* users = nullptr;
  const NlosBank* bank = nullptr;
  /// Small-scale fading is held at this step's realization across the window.
  int nlos_step = 0;
  WindowStart start;
  int slots = 1;
};

std::vector<SlotChannels> window_channels(const WindowProblem& w, const TrajectoryPlan& plan);

struct AoOptions {
  int max_iterations = 10;
  double convergence_tol = 1e-7;
  bool stop_on_decrease = true;
  double decrease_tol = 1e-6;
  ObjectiveWeights weights;
  P2Options p2;
  P3Options p3;
  double warm_start_tol = 1e-4;
  /// Called before each iteration (1-based); may tighten or relax the
  /// subproblem options for that iteration.
  std::function<void(int, P2Options&, P3Options&)> before_iteration;

  static AoOptions from_config(const ScenarioConfig& cfg);
};

struct AoIteration {
  SolveStatus p2_status = SolveStatus::kNumericalFailure;
  SolveStatus p3_status = SolveStatus::kNumericalFailure;
  double objective = 0.0;
  bool accepted = false;
  int frozen_links = 0;
};

struct AoResult {
  bool init_ok = false;
  ConstraintReport init_report;
  TrajectoryPlan plan;
  BeamPlan beams;
  std::vector<SlotChannels> channels;
  /// Objective of the initialization followed by every accepted iteration.
  std::vector<double> history;
  std::vector<AoIteration> iterations;
  std::string stop_reason;
  ObjectiveTerms terms;
};

/// Straight-line trajectory with max-min SINR beams along it.
AoResult ao_initialize(const WindowProblem& w, const AoOptions& options);

/// Alternates beamforming and trajectory SCA steps from the initialization.
/// A failed sub-solve, a failed constraint re-check or an objective drop
/// restores the last accepted iterate and ends the loop.
AoResult ao_solve(const WindowProblem& w, const AoOptions& options);

}  // namespace uavmpc
