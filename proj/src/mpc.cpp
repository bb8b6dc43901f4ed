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

#include "uavmpc/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "uavmpc/channel.hpp"
#include "uavmpc/fbl.hpp"
#include "uavmpc/propulsion.hpp"

namespace uavmpc {

Vec3 sample_disturbance(Rng& rng, double delta, DisturbanceMode mode) {
  if (delta < 0.0) throw DomainError("disturbance magnitude must be non-negative");
  std::normal_distribution<double> n01(0.0, 1.0);
  Vec3 dir(n01(rng), n01(rng), n01(rng));
  while (dir.norm() == 0.0) dir = Vec3(n01(rng), n01(rng), n01(rng));
  dir.normalize();
  double mag = delta;
  if (mode == DisturbanceMode::kUniformBall) mag = std::uniform_real_distribution<double>(0.0, delta)(rng);
  return dir * mag;
}

Vec3 apply_step(const ScenarioConfig& cfg, const Vec3& position, const Vec3& velocity,
                const Vec3& disturbance, Vec3& next_position) {
  const Vec3 base = position + velocity * cfg.slot_duration_s;
  Vec3 target = base + disturbance;
  target.z() = std::clamp(target.z(), cfg.altitude_min_m, cfg.altitude_max_m);
  const Vec3 effective = target - base;
  next_position = base + effective;
  return effective;
}

Vec3 braking_velocity(const ScenarioConfig& cfg, const Vec3& previous) {
  const double speed = previous.norm();
  if (speed == 0.0) return Vec3::Zero();
  const double dv = cfg.max_acceleration_mps2 * cfg.slot_duration_s;
  return previous * std::max(0.0, 1.0 - dv / speed);
}

void evaluate_step(const ScenarioConfig& cfg, const UserSet& users, const NlosBank& bank,
                   StepRecord& rec) {
  const PropulsionParams prop = PropulsionParams::from_config(cfg);
  const FblParams fbl = FblParams::make(cfg.blocklength, cfg.error_probability);
  const double noise = cfg.noise_power_w();
  rec.sinr.clear();
  rec.rate.clear();
  rec.rate_floor_met = true;
  if (users.size() > 0 && !rec.beams.empty()) {
    const std::vector<CVec> h = channel_vectors(channels_at(cfg, users, rec.position, bank, rec.step));
    for (int n = 0; n < users.size(); ++n) {
      const double g = sinr(h, rec.beams, n, noise);
      rec.sinr.push_back(g);
      rec.rate.push_back(fbl_rate(g, fbl));
      if (rec.rate.back() < cfg.rate_min_nats) rec.rate_floor_met = false;
    }
  }
  rec.propulsion_power_w = propulsion_power(rec.velocity, prop);
  rec.comm_power_w = rec.beams.empty() ? 0.0 : comm_power(rec.beams, cfg.amplifier_efficiency);
  rec.total_power_w = rec.propulsion_power_w + rec.comm_power_w;
}

namespace {

bool control_admissible(const ScenarioConfig& cfg, const Vec3& position, const Vec3& previous,
                        const Vec3& v, const SlotBeams& beams) {
  TrajectoryPlan one;
  one.position.push_back(position);
  one.velocity.push_back(v);
  const double comm = beams.empty() ? 0.0 : comm_power(beams, cfg.amplifier_efficiency);
  if (comm > cfg.comm_power_max_w + 1e-6) return false;
  return check_trajectory(cfg, WindowStart{position, previous}, one, {comm}).ok;
}

}  // namespace

MissionTrace run_mission(const ScenarioConfig& cfg, const UserSet& users,
                         const MissionOptions& options) {
  const NlosBank bank(cfg.rng_seed, users.size(), cfg.num_antennas);
  Rng drng = make_stream(options.disturbance_seed.value_or(cfg.rng_seed), Stream::kDisturbance);
  const double delta = cfg.disturbance_m;
  const AoOptions ao = AoOptions::from_config(cfg);

  MissionTrace trace;
  Vec3 r = cfg.start_m;
  Vec3 v_prev = Vec3::Zero();
  SlotBeams incumbent;
  for (int t = 0;; ++t) {
    if ((r - cfg.destination_m).norm() <= cfg.arrival_tolerance_m) {
      trace.termination = "arrived";
      break;
    }
    if (t >= cfg.mission_cap_slots) {
      trace.termination = "step-cap";
      break;
    }
    const WindowProblem w{&cfg, &users, &bank, t, WindowStart{r, v_prev}, cfg.horizon_slots};
    const AoResult plan = ao_solve(w, ao);

    StepRecord rec;
    rec.step = t;
    rec.position = r;
    rec.previous_velocity = v_prev;
    rec.objective = plan.history.back();
    rec.objective_history = plan.history;
    rec.ao_iterations = static_cast<int>(plan.iterations.size());
    rec.ao_stop = plan.stop_reason;
    rec.velocity = plan.plan.velocity[0];
    rec.beams = plan.beams[0];
    if (!plan.init_ok || !control_admissible(cfg, r, v_prev, rec.velocity, rec.beams)) {
      rec.fallback = true;
      rec.velocity = braking_velocity(cfg, v_prev);
      if (!incumbent.empty()) rec.beams = incumbent;
    }
    const Vec3 d = delta > 0.0 ? sample_disturbance(drng, delta, cfg.disturbance_mode) : Vec3::Zero();
    rec.disturbance = apply_step(cfg, r, rec.velocity, d, rec.next_position);
    evaluate_step(cfg, users, bank, rec);
    trace.energy_j += rec.total_power_w * cfg.slot_duration_s;
    r = rec.next_position;
    v_prev = rec.velocity;
    incumbent = rec.beams;
    trace.steps.push_back(std::move(rec));
  }
  trace.final_position = r;
  trace.terminal_distance = (r - cfg.destination_m).norm();
  return trace;
}

std::string audit_trace(const ScenarioConfig& cfg, const MissionTrace& trace, double tol) {
  const PropulsionParams prop = PropulsionParams::from_config(cfg);
  const double tc = cfg.slot_duration_s;
  std::ostringstream out;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const StepRecord& s = trace.steps[i];
    auto flag = [&](const char* what, double excess) {
      if (out.tellp() == 0) out << "step " << s.step << ": " << what << " exceeded by " << excess;
    };
    const Vec3 prev = i == 0 ? Vec3::Zero() : trace.steps[i - 1].velocity;
    if ((s.previous_velocity - prev).norm() > 0.0) flag("C5 previous velocity mismatch", (s.previous_velocity - prev).norm());
    const double vh = s.velocity.head<2>().norm();
    if (vh > cfg.max_horizontal_speed_mps + tol) flag("C3", vh - cfg.max_horizontal_speed_mps);
    if (std::abs(s.velocity.z()) > cfg.max_vertical_speed_mps + tol) {
      flag("C4", std::abs(s.velocity.z()) - cfg.max_vertical_speed_mps);
    }
    const double dv = (s.velocity - prev).norm();
    if (dv > cfg.max_acceleration_mps2 * tc + tol) flag("C5", dv - cfg.max_acceleration_mps2 * tc);
    double beam_power = 0.0;
    for (const auto& w : s.beams) beam_power += w.squaredNorm();
    const double comm = beam_power / cfg.amplifier_efficiency;
    if (comm > cfg.comm_power_max_w + tol) flag("C7", comm - cfg.comm_power_max_w);
    const double total = propulsion_power(s.velocity, prop) + comm;
    if (total > cfg.total_power_max_w + tol) flag("C6", total - cfg.total_power_max_w);
    if (i > 0) {
      const Vec3& p = s.position;
      if (p.x() < cfg.x_min_m - tol || p.x() > cfg.x_max_m + tol) flag("C2 x", std::abs(p.x()));
      if (p.y() < cfg.y_min_m - tol || p.y() > cfg.y_max_m + tol) flag("C2 y", std::abs(p.y()));
      if (p.z() < cfg.altitude_min_m - tol || p.z() > cfg.altitude_max_m + tol) flag("C2 z", p.z());
    }
    if (s.disturbance.norm() > std::max(cfg.disturbance_m, 0.0) + tol) {
      flag("disturbance bound", s.disturbance.norm() - cfg.disturbance_m);
    }
  }
  return out.str();
}

double replay_error(const ScenarioConfig& cfg, const MissionTrace& trace) {
  if (trace.steps.empty()) return 0.0;
  Vec3 r = trace.steps.front().position;
  double worst = 0.0;
  for (const StepRecord& s : trace.steps) {
    worst = std::max(worst, (r - s.position).norm());
    r = (r + s.velocity * cfg.slot_duration_s) + s.disturbance;
  }
  return std::max(worst, (r - trace.final_position).norm());
}

}  // namespace uavmpc
