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

#include "uavmpc/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavmpc/surrogates.hpp"

namespace uavmpc {

namespace {

double comm_power_budget(const ScenarioConfig& cfg) { return cfg.comm_power_max_w; }

/// Largest v_z keeping total power within the cap for a fixed horizontal part.
double climb_cap(const ScenarioConfig& cfg, const PropulsionParams& p, const Vec2& vh,
                 double comm_w) {
  const double level = propulsion_power(Vec3(vh.x(), vh.y(), 0.0), p);
  return std::max(0.0, (cfg.total_power_max_w - comm_w - level) / p.weight_n);
}

/// Distance covered when braking from `speed` by `dv` per slot, including the current slot.
double stopping_distance(double speed, double dv, double tc) {
  const double m = std::floor(speed / dv);
  return tc * ((m + 1.0) * speed - dv * m * (m + 1.0) / 2.0);
}

/// Largest speed from which the vehicle can still stop within `dist`.
double stoppable_speed(double dist, double dv, double tc, double cap) {
  if (stopping_distance(cap, dv, tc) <= dist) return cap;
  double lo = 0.0, hi = cap;
  for (int i = 0; i < 100 && hi - lo > 1e-12 * cap; ++i) {
    const double mid = 0.5 * (lo + hi);
    (stopping_distance(mid, dv, tc) <= dist ? lo : hi) = mid;
  }
  return lo;
}

void fail(ConstraintReport& r, const std::string& what, double amount) {
  if (r.ok) r.first_violation = what;
  r.ok = false;
  r.worst = std::max(r.worst, amount);
}

}  // namespace

Vec3 terminal_position(const TrajectoryPlan& plan, double slot_duration_s) {
  return plan.position.back() + plan.velocity.back() * slot_duration_s;
}

TrajectoryPlan straight_line_init(const ScenarioConfig& cfg, const WindowStart& start, int slots) {
  if (slots <= 0) throw Error(ErrorCode::kInvalidArgument, "window needs at least one slot");
  const PropulsionParams prop = PropulsionParams::from_config(cfg);
  const double tc = cfg.slot_duration_s;
  const double dv_max = cfg.max_acceleration_mps2 * tc;
  TrajectoryPlan plan;
  plan.position.push_back(start.position);
  Vec3 prev = start.previous_velocity;
  for (int k = 0; k < slots; ++k) {
    const Vec3 pos = plan.position.back();
    const Vec3 delta = cfg.destination_m - pos;
    const double dist = delta.norm();
    Vec3 target = Vec3::Zero();
    if (dist > 0.0) {
      const Vec3 dir = delta / dist;
      double cap = std::numeric_limits<double>::infinity();
      const double dh = dir.head<2>().norm();
      if (dh > 0.0) cap = std::min(cap, cfg.max_horizontal_speed_mps / dh);
      if (std::abs(dir.z()) > 0.0) cap = std::min(cap, cfg.max_vertical_speed_mps / std::abs(dir.z()));
      target = dir * stoppable_speed(dist, dv_max, tc, cap);
    }
    Vec3 step = target - prev;
    if (step.norm() > dv_max) step *= dv_max / step.norm();
    Vec3 v = prev + step;
    const double cap = climb_cap(cfg, prop, v.head<2>(), comm_power_budget(cfg));
    if (v.z() > cap) v.z() = cap;
    const double z_next = pos.z() + v.z() * tc;
    if (z_next < cfg.altitude_min_m) v.z() = (cfg.altitude_min_m - pos.z()) / tc;
    if (z_next > cfg.altitude_max_m) v.z() = (cfg.altitude_max_m - pos.z()) / tc;
    plan.velocity.push_back(v);
    if (k + 1 < slots) plan.position.push_back(pos + v * tc);
    prev = v;
  }
  plan.aux_distance.assign(slots, {});
  return plan;
}

ConstraintReport check_trajectory(const ScenarioConfig& cfg, const WindowStart& start,
                                  const TrajectoryPlan& plan,
                                  const std::vector<double>& comm_power_w, double tol) {
  ConstraintReport r;
  const int k_n = plan.size();
  if (static_cast<int>(plan.position.size()) != k_n ||
      static_cast<int>(comm_power_w.size()) != k_n) {
    fail(r, "plan dimensions", 1.0);
    return r;
  }
  const PropulsionParams prop = PropulsionParams::from_config(cfg);
  const double tc = cfg.slot_duration_s;
  if ((plan.position[0] - start.position).norm() > tol * (1.0 + start.position.norm())) {
    fail(r, "C1 start", (plan.position[0] - start.position).norm());
  }
  for (int k = 0; k < k_n; ++k) {
    const Vec3& p = plan.position[k];
    const Vec3& v = plan.velocity[k];
    if (k + 1 < k_n) {
      const double e = (plan.position[k + 1] - (p + v * tc)).norm();
      if (e > tol * (1.0 + p.norm())) fail(r, "C1 kinematics", e);
    }
    {
      const Vec3 q = k + 1 < k_n ? plan.position[k + 1] : terminal_position(plan, tc);
      const double lo[3] = {cfg.x_min_m, cfg.y_min_m, cfg.altitude_min_m};
      const double hi[3] = {cfg.x_max_m, cfg.y_max_m, cfg.altitude_max_m};
      const char* name[3] = {"C2a box x", "C2b box y", "C2c altitude"};
      for (int i = 0; i < 3; ++i) {
        if (q[i] < lo[i] - tol) fail(r, name[i], lo[i] - q[i]);
        if (q[i] > hi[i] + tol) fail(r, name[i], q[i] - hi[i]);
      }
    }
    const double vh = v.head<2>().norm();
    if (vh > cfg.max_horizontal_speed_mps + tol) fail(r, "C3 horizontal speed", vh - cfg.max_horizontal_speed_mps);
    if (std::abs(v.z()) > cfg.max_vertical_speed_mps + tol) {
      fail(r, "C4 vertical speed", std::abs(v.z()) - cfg.max_vertical_speed_mps);
    }
    const Vec3 prev = k == 0 ? start.previous_velocity : plan.velocity[k - 1];
    const double dv = (v - prev).norm();
    const double dv_max = cfg.max_acceleration_mps2 * tc;
    if (dv > dv_max + tol) fail(r, "C5 acceleration", dv - dv_max);
    const double ptot = propulsion_power(v, prop) + comm_power_w[k];
    if (ptot > cfg.total_power_max_w + tol) fail(r, "C6 total power", ptot - cfg.total_power_max_w);
  }
  return r;
}

P3Options p3_options(const ScenarioConfig& cfg) {
  P3Options o;
  o.weight_rate = cfg.effective_weight_rate();
  o.weight_distance = cfg.effective_weight_distance();
  o.weight_power = cfg.effective_weight_power();
  o.rate_min = cfg.rate_min_nats;
  o.fbl = FblParams::make(cfg.blocklength, cfg.error_probability);
  o.solver.tolerance = cfg.solver_tolerance;
  o.solver.max_iterations = cfg.solver_max_iterations;
  return o;
}

P3Result solve_p3(const ScenarioConfig& cfg, const UserSet& users, const WindowStart& start,
                  const TrajectoryPlan& point, const BeamPlan& beams,
                  const std::vector<SlotChannels>& channels, const P3Options& options) {
  const int k_n = point.size();
  if (static_cast<int>(beams.size()) != k_n || static_cast<int>(channels.size()) != k_n) {
    throw Error(ErrorCode::kInvalidArgument, "solve_p3: plan, beams and channels differ in length");
  }
  const int n_users = users.size();
  const PropulsionParams prop = PropulsionParams::from_config(cfg);
  const double tc = cfg.slot_duration_s;
  const double noise = cfg.noise_power_w();
  const double kappa = noise / cfg.reference_gain;
  const double rho = cfg.pathloss_exponent;

  ConicProblem p;
  std::vector<int> vel(k_n);
  for (int k = 0; k < k_n; ++k) vel[k] = p.add_variables(3);
  auto v_expr = [&](int k, int i) { return LinExpr::var(vel[k] + i); };
  auto pos_expr = [&](int k, int i) {
    LinExpr e(start.position[i]);
    for (int j = 0; j < k; ++j) e.add(vel[j] + i, tc);
    return e;
  };

  std::vector<std::pair<int, double>> hint;
  auto var_with_hint = [&](double value) {
    const int idx = p.add_variable();
    hint.emplace_back(idx, value);
    return idx;
  };
  for (int k = 0; k < k_n; ++k) {
    for (int i = 0; i < 3; ++i) hint.emplace_back(vel[k] + i, point.velocity[k][i]);
  }

  P3Result res;
  LinExpr objective;
  // Box limits and squared distance to the destination for the position
  // reached after k controls.
  auto add_position_terms = [&](int k, const Vec3& ref) {
    const double lo[3] = {cfg.x_min_m, cfg.y_min_m, cfg.altitude_min_m};
    const double hi[3] = {cfg.x_max_m, cfg.y_max_m, cfg.altitude_max_m};
    std::vector<LinExpr> to_goal;
    for (int i = 0; i < 3; ++i) {
      const LinExpr pe = pos_expr(k, i);
      p.add_le(LinExpr(lo[i]), pe);
      p.add_le(pe, LinExpr(hi[i]));
      to_goal.push_back(pe - cfg.destination_m[i]);
    }
    const int e = var_with_hint(1.001 * (ref - cfg.destination_m).squaredNorm() + 1.0);
    p.add_quadratic_epigraph(LinExpr::var(e), to_goal);
    objective += options.weight_distance * LinExpr::var(e);
  };
  std::vector<std::vector<std::pair<int, double>>> dist_vars(k_n);

  for (int k = 0; k < k_n; ++k) {
    const Vec3& vk = point.velocity[k];
    const Vec2 vh_ref = vk.head<2>();
    double comm = 0.0;
    for (const auto& w : beams[k]) comm += w.squaredNorm();
    comm /= cfg.amplifier_efficiency;

    // Speed, vertical speed and acceleration limits.
    p.add_soc(LinExpr(cfg.max_horizontal_speed_mps), {v_expr(k, 0), v_expr(k, 1)});
    p.add_le(v_expr(k, 2), LinExpr(cfg.max_vertical_speed_mps));
    p.add_le(LinExpr(-cfg.max_vertical_speed_mps), v_expr(k, 2));
    std::vector<LinExpr> dv;
    for (int i = 0; i < 3; ++i) {
      dv.push_back(k == 0 ? v_expr(k, i) - start.previous_velocity[i] : v_expr(k, i) - v_expr(k - 1, i));
    }
    p.add_soc(LinExpr(cfg.max_acceleration_mps2 * tc), dv);

    // Propulsion upper bound: induced term through the linearised psi, cubic
    // blade-profile term and the climb term as a max with zero.
    const PropulsionSurrogate sur = propulsion_surrogate(vh_ref, prop);
    LinExpr lin(sur.a - sur.g.dot(sur.v_ref));
    lin.add(vel[k], sur.g.x()).add(vel[k] + 1, sur.g.y());
    p.add_nonneg(lin - sur.floor());
    const double speed = vh_ref.norm();
    const int t_ind = var_with_hint(1.01 / std::sqrt(sur.a) + 1e-6);
    const int s_sp = var_with_hint(speed + 1e-2);
    const int q_cub = var_with_hint(1.01 * std::pow(speed + 1e-2, 3) + 1e-3);
    const int z_clb = var_with_hint(std::max(vk.z(), 0.0) + 1e-2);
    p.add_inv_sqrt_epigraph(LinExpr::var(t_ind), lin);
    p.add_soc(LinExpr::var(s_sp), {v_expr(k, 0), v_expr(k, 1)});
    p.add_cubic_epigraph(LinExpr::var(q_cub), LinExpr::var(s_sp));
    p.add_le(v_expr(k, 2), LinExpr::var(z_clb));
    p.add_nonneg(LinExpr::var(z_clb));
    const LinExpr p_ub = LinExpr::var(t_ind, prop.induced_coeff()) +
                         LinExpr::var(z_clb, prop.weight_n) +
                         LinExpr::var(q_cub, prop.parasite_coeff());
    p.add_le(p_ub, LinExpr(cfg.total_power_max_w - comm));
    objective += options.weight_power * p_ub;

    if (k == 0) continue;

    const Vec3 pos_ref = point.position[k];
    add_position_terms(k, pos_ref);

    for (int n = 0; n < n_users; ++n) {
      const CVec& hh = channels[k][n].hhat;
      const double a = std::norm(hh.dot(beams[k][n]));
      double b = 0.0;
      for (int j = 0; j < n_users; ++j) {
        if (j != n) b += std::norm(hh.dot(beams[k][j]));
      }
      const DistanceInterval iv = traj_trust_interval(a, b, kappa, rho, options.fbl.penalty_coeff,
                                                      cfg.distance_min_m, cfg.distance_max_m);
      if (iv.empty() || !(a > 0.0)) {
        ++res.frozen_links;
        continue;
      }
      const Vec3& u = users.positions[n];
      const double d_ref = std::clamp((u - pos_ref).norm(), iv.lo, iv.hi);
      const TrajLinearizationPoint tp =
          make_traj_point(a, b, kappa, rho, options.fbl.penalty_coeff, d_ref, iv.lo, iv.hi);
      const double hint_d = std::clamp(std::max((u - pos_ref).norm(), iv.lo) + 1e-3,
                                       iv.lo, iv.hi);
      const int dt = var_with_hint(0.5 * (hint_d + std::min(iv.hi, hint_d + 1.0)));
      dist_vars[k].emplace_back(n, iv.lo);
      std::vector<LinExpr> diff;
      for (int i = 0; i < 3; ++i) diff.push_back(pos_expr(k, i) - u[i]);
      p.add_soc(LinExpr::var(dt), diff);
      p.add_le(LinExpr(iv.lo), LinExpr::var(dt));
      p.add_le(LinExpr::var(dt), LinExpr(iv.hi));
      const double slope = tp.shannon_slope - tp.dispersion_slope;
      LinExpr rate(tp.shannon - tp.dispersion - slope * d_ref);
      rate.add(dt, slope);
      p.add_nonneg(rate - options.rate_min);
      objective -= options.weight_rate * rate;
    }
  }
  add_position_terms(k_n, terminal_position(point, tc));
  p.minimize(objective);

  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(p.num_variables());
  for (const auto& [i, v] : hint) x0[i] = v;
  const SolveResult r = solve(p, options.solver, &x0);
  res.status = r.status;
  res.iterations = r.iterations;
  if (!r.optimal()) return res;

  TrajectoryPlan& plan = res.plan;
  plan.position.push_back(start.position);
  for (int k = 0; k < k_n; ++k) {
    plan.velocity.emplace_back(r.x[vel[k]], r.x[vel[k] + 1], r.x[vel[k] + 2]);
    if (k + 1 < k_n) plan.position.push_back(plan.position.back() + plan.velocity.back() * tc);
  }
  plan.aux_distance.assign(k_n, std::vector<double>(n_users, 0.0));
  for (int k = 1; k < k_n; ++k) {
    for (int n = 0; n < n_users; ++n) {
      plan.aux_distance[k][n] = (users.positions[n] - plan.position[k]).norm();
    }
    for (const auto& [n, lo] : dist_vars[k]) {
      plan.aux_distance[k][n] = std::max(lo, plan.aux_distance[k][n]);
    }
  }
  return res;
}

}  // namespace uavmpc
