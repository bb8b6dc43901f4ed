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

#include "uavmpc/baselines.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "uavmpc/channel.hpp"

namespace uavmpc {

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kOfflineMpc: return "offline-mpc";
    case BaselineKind::kOfflineJoint: return "offline-joint";
    case BaselineKind::kMrt: return "bf-mrt";
    case BaselineKind::kZf: return "bf-zf";
    case BaselineKind::kEqual: return "bf-equal";
    case BaselineKind::kProposed: return "bf-proposed";
  }
  return "unknown";
}

BaselineKind parse_baseline(const std::string& name) {
  for (BaselineKind k : {BaselineKind::kOfflineMpc, BaselineKind::kOfflineJoint, BaselineKind::kMrt,
                         BaselineKind::kZf, BaselineKind::kEqual, BaselineKind::kProposed}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown baseline '" + name + "'");
}

MissionTrace execute_open_loop(const ScenarioConfig& cfg, const UserSet& users,
                               const std::vector<StepRecord>& controls,
                               const MissionOptions& options, const std::string& scheme) {
  const NlosBank bank(cfg.rng_seed, users.size(), cfg.num_antennas);
  Rng drng = make_stream(options.disturbance_seed.value_or(cfg.rng_seed), Stream::kDisturbance);
  MissionTrace trace;
  trace.scheme = scheme;
  Vec3 r = cfg.start_m;
  for (const StepRecord& planned : controls) {
    StepRecord rec = planned;
    rec.position = r;
    const Vec3 d = cfg.disturbance_m > 0.0
                       ? sample_disturbance(drng, cfg.disturbance_m, cfg.disturbance_mode)
                       : Vec3::Zero();
    rec.disturbance = apply_step(cfg, r, rec.velocity, d, rec.next_position);
    evaluate_step(cfg, users, bank, rec);
    trace.energy_j += rec.total_power_w * cfg.slot_duration_s;
    r = rec.next_position;
    trace.steps.push_back(std::move(rec));
  }
  trace.final_position = r;
  trace.terminal_distance = (r - cfg.destination_m).norm();
  trace.termination = trace.terminal_distance <= cfg.arrival_tolerance_m ? "arrived" : "plan-exhausted";
  return trace;
}

MissionTrace run_offline_mpc(const ScenarioConfig& cfg, const UserSet& users,
                             const MissionOptions& options) {
  ScenarioConfig predicted = cfg;
  predicted.disturbance_m = 0.0;
  const MissionTrace plan = run_mission(predicted, users, options);
  return execute_open_loop(cfg, users, plan.steps, options, "offline-mpc");
}

MissionTrace run_offline_joint(const ScenarioConfig& cfg, const UserSet& users,
                               const MissionOptions& options) {
  const NlosBank bank(cfg.rng_seed, users.size(), cfg.num_antennas);
  const int horizon = cfg.mission_cap_slots;
  const WindowProblem w{&cfg, &users, &bank, 0, WindowStart{cfg.start_m, Vec3::Zero()}, horizon};
  const AoResult res = ao_solve(w, AoOptions::from_config(cfg));

  const TrajectoryPlan& p = res.plan;
  std::vector<StepRecord> controls;
  for (int k = 0; k < horizon; ++k) {
    StepRecord rec;
    rec.step = k;
    rec.previous_velocity = k == 0 ? Vec3::Zero() : p.velocity[k - 1];
    rec.velocity = p.velocity[k];
    rec.beams = res.beams[k];
    rec.objective = res.history.back();
    if (k == 0) rec.objective_history = res.history;
    rec.ao_iterations = static_cast<int>(res.iterations.size());
    rec.ao_stop = res.stop_reason;
    controls.push_back(std::move(rec));
  }
  return execute_open_loop(cfg, users, controls, options, "offline-joint");
}

SlotBeams beamform_baseline(BaselineKind kind, const std::vector<CVec>& h, double budget) {
  const int n = static_cast<int>(h.size());
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "beamform_baseline needs at least one user");
  const int m = static_cast<int>(h.front().size());
  const double per_user = std::sqrt(budget / n);
  SlotBeams w(n, CVec::Zero(m));
  switch (kind) {
    case BaselineKind::kMrt:
      for (int u = 0; u < n; ++u) {
        const double norm = h[u].norm();
        if (norm > 0.0) w[u] = per_user * h[u] / norm;
      }
      return w;
    case BaselineKind::kEqual:
      for (int u = 0; u < n; ++u) w[u] = CVec::Constant(m, Complex(per_user / std::sqrt(m), 0.0));
      return w;
    case BaselineKind::kZf: {
      if (m < n) throw DomainError("zero-forcing needs at least as many antennas as users");
      using CMat = Eigen::MatrixXcd;
      CMat hs(n, m);
      for (int u = 0; u < n; ++u) hs.row(u) = h[u].adjoint();
      const CMat gram = hs * hs.adjoint();
      const Eigen::SelfAdjointEigenSolver<CMat> eig(gram);
      const double top = eig.eigenvalues().maxCoeff();
      if (!(top > 0.0) || eig.eigenvalues().minCoeff() <= 1e-12 * top) {
        throw DomainError("zero-forcing channel stack is rank deficient");
      }
      const CMat pinv = hs.adjoint() * gram.inverse();
      for (int u = 0; u < n; ++u) w[u] = per_user * pinv.col(u) / pinv.col(u).norm();
      return w;
    }
    default:
      throw Error(ErrorCode::kInvalidArgument, "beamform_baseline: not a fixed beamformer");
  }
}

double qos_satisfaction(const std::vector<std::vector<double>>& step_rates, double rate_min) {
  if (step_rates.empty()) throw Error(ErrorCode::kInvalidArgument, "qos_satisfaction: no steps");
  int ok = 0;
  for (const auto& r : step_rates) {
    if (!r.empty() && *std::min_element(r.begin(), r.end()) >= rate_min) ++ok;
  }
  return 100.0 * ok / static_cast<double>(step_rates.size());
}

double qos_satisfaction(const MissionTrace& trace, double rate_min) {
  std::vector<std::vector<double>> rates;
  for (const auto& s : trace.steps) rates.push_back(s.rate);
  return qos_satisfaction(rates, rate_min);
}

}  // namespace uavmpc
