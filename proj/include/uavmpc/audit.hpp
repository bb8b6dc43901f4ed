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
#include <string>

#include "uavmpc/scenario.hpp"

namespace uavmpc {

/// Sampling audit of one bound family. Violations count samples on the wrong
/// side of the true function; the gap is relative, at the linearization point.
struct BoundAudit {
  std::int64_t samples = 0;
  std::int64_t violations = 0;
  /// Samples outside the family's declared validity region, not scored.
  std::int64_t skipped = 0;
  double max_violation = 0.0;
  double max_gap_at_point = 0.0;
};

struct SurrogateAuditReport {
  std::uint64_t seed = 0;
  BoundAudit bf_shannon;
  BoundAudit bf_dispersion;
  BoundAudit traj_shannon;
  BoundAudit traj_dispersion;
  BoundAudit propulsion;
  /// Dispersion second differences over [d_min, d_max] at 1 m spacing.
  int concavity_draws = 0;
  double concavity_max = 0.0;
  double concavity_max_analytic = 0.0;
  /// Largest relative change of a draw's maximum when the spacing is halved.
  double concavity_refinement_change = 0.0;
};

struct AuditOptions {
  /// Linearization points per family and candidates per point.
  int points = 100;
  int candidates_per_point = 100;
  int concavity_draws = 100;
};

/// Links drawn from the scenario geometry (random user in the corridor,
/// random UAV position in the flight box, matched-filter beams at the budget).
SurrogateAuditReport run_surrogate_audit(const ScenarioConfig& cfg, std::uint64_t seed,
                                         const AuditOptions& options = {});

std::string to_json(const SurrogateAuditReport& r);
/// One row per bound family plus a concavity row:
/// family,samples,violations,skipped,max_violation,max_gap_at_point.
/// The concavity row holds the draw count, 1 when the largest second
/// difference is not negative, that second difference and the refinement change.
std::string to_csv(const SurrogateAuditReport& r);

}  // namespace uavmpc
