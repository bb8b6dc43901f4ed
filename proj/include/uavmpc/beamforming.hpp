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

#include "uavmpc/channel.hpp"
#include "uavmpc/common.hpp"
#include "uavmpc/conic.hpp"
#include "uavmpc/fbl.hpp"

namespace uavmpc {

/// Beams of every user in one slot.
using SlotBeams = std::vector<CVec>;
/// Beams indexed [slot][user].
using BeamPlan = std::vector<SlotBeams>;

std::vector<CVec> channel_vectors(const SlotChannels& ch);

/// Sum of ||w_n||^2 allowed by the communication power cap.
double beam_budget(double comm_power_max_w, double efficiency);

struct WarmStartResult {
  SlotBeams beams;
  /// Largest common SINR target proven feasible.
  double sinr_target = 0.0;
  int probes = 0;
};

/// Max-min SINR beams for one slot by bisection on the common target. Each
/// probe is a minimum-power SOC program with h_n^H w_n fixed real; the
/// returned beams are scaled up to the full budget.
WarmStartResult warm_start_slot(const std::vector<CVec>& h, double noise, double budget,
                                double rel_tol, const SolverOptions& options = {});

BeamPlan warm_start_p2init(const std::vector<SlotChannels>& channels, double noise,
                           double budget, double rel_tol, const SolverOptions& options = {});

struct P2Options {
  FblParams fbl;
  double rate_min = 0.0;
  double budget = 0.0;
  double noise = 1.0;
  SolverOptions solver;
};

struct P2SlotResult {
  SolveStatus status = SolveStatus::kNumericalFailure;
  SlotBeams beams;
  /// Surrogate sum-rate at the solution and at the linearization point.
  double surrogate = 0.0;
  double surrogate_at_point = 0.0;
  int iterations = 0;
};

/// One SCA step of the convexified beamforming problem for one slot.
P2SlotResult solve_p2_slot(const std::vector<CVec>& h, const SlotBeams& point,
                           const P2Options& options);

struct P2Result {
  bool ok = false;
  BeamPlan beams;
  double surrogate = 0.0;
  double surrogate_at_point = 0.0;
  int failed_slot = -1;
  SolveStatus status = SolveStatus::kOptimal;
};

P2Result solve_p2(const std::vector<SlotChannels>& channels, const BeamPlan& point,
                  const P2Options& options);

/// Surrogate sum-rate of `beams` linearized at `point` (noise-normalized).
double p2_surrogate_value(const std::vector<CVec>& h, const SlotBeams& point,
                          const SlotBeams& beams, const P2Options& options);

/// True FBL rates of every user.
std::vector<double> slot_rates(const std::vector<CVec>& h, const SlotBeams& beams, double noise,
                               const FblParams& fbl);

}  // namespace uavmpc
