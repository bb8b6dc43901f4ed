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

#include <vector>

#include "uavmpc/common.hpp"

namespace uavmpc {

struct ScenarioConfig;

/// Rotary-wing airframe constants.
struct PropulsionParams {
  double weight_n = 39.2;
  double air_density = 1.225;
  double rotor_area = 0.503;
  double drag_coeff = 0.08;

  static PropulsionParams from_config(const ScenarioConfig& cfg);

  /// sqrt(W / (2 rho S)).
  double hover_speed() const;
  /// W^2 / (sqrt(2) rho S), the induced-power prefactor.
  double induced_coeff() const;
  /// zeta rho S / 8, the blade-profile (cubic) coefficient.
  double parasite_coeff() const;
};

/// Induced + climb + blade-profile power at velocity v. Descent adds nothing.
double propulsion_power(const Vec3& v, const PropulsionParams& p);
double induced_power(const Vec2& vh, const PropulsionParams& p);
double hover_power(const PropulsionParams& p);

/// |v_h|^2 + sqrt(|v_h|^4 + 4 V_h^4).
double psi_horizontal(const Vec2& vh, const PropulsionParams& p);

/// (1/eta) * sum ||w_n||^2.
double comm_power(const std::vector<CVec>& beams, double efficiency);

double total_power(const Vec3& v, const std::vector<CVec>& beams, const PropulsionParams& p,
                   double efficiency);

/// Riemann sum of per-step total power.
double mission_energy(const std::vector<double>& total_power_w, double slot_duration_s);

/// First-order model of psi_horizontal at v_ref; the induced power is then
/// bounded above by induced_coeff * (a + g'(v_h - v_ref))^{-1/2}.
struct PropulsionSurrogate {
  double a = 0.0;
  Vec2 g = Vec2::Zero();
  Vec2 v_ref = Vec2::Zero();

  /// Linearised psi at v_h.
  double linear_psi(const Vec2& vh) const { return a + g.dot(vh - v_ref); }
  /// Domain floor the linearised psi must stay above.
  double floor() const { return 1e-6 * a; }
};

PropulsionSurrogate propulsion_surrogate(const Vec2& v_ref, const PropulsionParams& p);

/// Upper bound on propulsion_power(v). Throws DomainError when the linearised
/// psi at v is at or below the surrogate's floor.
double eval_ub(const PropulsionSurrogate& s, const Vec3& v, const PropulsionParams& p);

}  // namespace uavmpc
