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

#include "uavmpc/propulsion.hpp"

#include <cmath>
#include <sstream>

#include "uavmpc/scenario.hpp"

namespace uavmpc {

PropulsionParams PropulsionParams::from_config(const ScenarioConfig& cfg) {
  return {cfg.uav_weight_n, cfg.air_density_kg_m3, cfg.rotor_area_m2, cfg.profile_drag_coeff};
}

double PropulsionParams::hover_speed() const {
  return std::sqrt(weight_n / (2.0 * air_density * rotor_area));
}

double PropulsionParams::induced_coeff() const {
  return weight_n * weight_n / (std::sqrt(2.0) * air_density * rotor_area);
}

double PropulsionParams::parasite_coeff() const {
  return drag_coeff * air_density * rotor_area / 8.0;
}

double psi_horizontal(const Vec2& vh, const PropulsionParams& p) {
  const double s = vh.squaredNorm();
  const double vh4 = std::pow(p.hover_speed(), 4);
  return s + std::sqrt(s * s + 4.0 * vh4);
}

double induced_power(const Vec2& vh, const PropulsionParams& p) {
  return p.induced_coeff() / std::sqrt(psi_horizontal(vh, p));
}

double propulsion_power(const Vec3& v, const PropulsionParams& p) {
  const Vec2 vh = v.head<2>();
  const double speed = vh.norm();
  return induced_power(vh, p) + p.weight_n * std::max(v.z(), 0.0) +
         p.parasite_coeff() * speed * speed * speed;
}

double hover_power(const PropulsionParams& p) { return propulsion_power(Vec3::Zero(), p); }

double comm_power(const std::vector<CVec>& beams, double efficiency) {
  double sum = 0.0;
  for (const auto& w : beams) sum += w.squaredNorm();
  return sum / efficiency;
}

double total_power(const Vec3& v, const std::vector<CVec>& beams, const PropulsionParams& p,
                   double efficiency) {
  return propulsion_power(v, p) + comm_power(beams, efficiency);
}

double mission_energy(const std::vector<double>& total_power_w, double slot_duration_s) {
  double e = 0.0;
  for (double w : total_power_w) e += w * slot_duration_s;
  return e;
}

PropulsionSurrogate propulsion_surrogate(const Vec2& v_ref, const PropulsionParams& p) {
  PropulsionSurrogate s;
  s.v_ref = v_ref;
  s.a = psi_horizontal(v_ref, p);
  const double sq = v_ref.squaredNorm();
  const double root = std::sqrt(sq * sq + 4.0 * std::pow(p.hover_speed(), 4));
  s.g = 2.0 * (1.0 + sq / root) * v_ref;
  return s;
}

double eval_ub(const PropulsionSurrogate& s, const Vec3& v, const PropulsionParams& p) {
  const Vec2 vh = v.head<2>();
  const double lin = s.linear_psi(vh);
  if (!(lin > s.floor())) {
    std::ostringstream msg;
    msg << "propulsion surrogate outside its domain at v_h = (" << vh.x() << ", " << vh.y()
        << "): linearised psi " << lin << " <= floor " << s.floor();
    throw DomainError(msg.str());
  }
  const double speed = vh.norm();
  return p.induced_coeff() / std::sqrt(lin) + p.weight_n * std::max(v.z(), 0.0) +
         p.parasite_coeff() * speed * speed * speed;
}

}  // namespace uavmpc
