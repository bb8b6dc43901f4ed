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

#include "uavmpc/optimizer.hpp"

#include <cmath>

#include "uavmpc/fbl.hpp"
#include "uavmpc/propulsion.hpp"

namespace uavmpc {

ObjectiveWeights ObjectiveWeights::from_config(const ScenarioConfig& cfg) {
  return {cfg.effective_weight_rate(), cfg.effective_weight_distance(),
          cfg.effective_weight_power()};
}

ObjectiveTerms objective_eval(const ScenarioConfig& cfg, const ObjectiveWeights& weights,
                              const std::vector<SlotChannels>& channels,
                              const TrajectoryPlan& plan, const BeamPlan& beams) {
  const int k_n = plan.size();
  if (static_cast<int>(channels.size()) != k_n || static_cast<int>(beams.size()) != k_n ||
      static_cast<int>(plan.position.size()) != k_n) {
    throw Error(ErrorCode::kInvalidArgument, "objective_eval: window dimensions differ");
  }
  const FblParams fbl = FblParams::make(cfg.blocklength, cfg.error_probability);
  const PropulsionParams prop = PropulsionParams::from_config(cfg);
  const double noise = cfg.noise_power_w();
  ObjectiveTerms t;
  for (int k = 0; k < k_n; ++k) {
    if (!channels[k].empty()) {
      for (double r : slot_rates(channel_vectors(channels[k]), beams[k], noise, fbl)) t.rate_sum += r;
    }
    const Vec3 next = k + 1 < k_n ? plan.position[k + 1] : terminal_position(plan, cfg.slot_duration_s);
    t.distance_sum += (next - cfg.destination_m).squaredNorm();
    t.power_sum += propulsion_power(plan.velocity[k], prop);
  }
  t.value = weights.rate * t.rate_sum - weights.distance * t.distance_sum -
            weights.power * t.power_sum;
  return t;
}

std::vector<SlotChannels> window_channels(const WindowProblem& w, const TrajectoryPlan& plan) {
  std::vector<SlotChannels> ch;
  ch.reserve(plan.position.size());
  for (const auto& r : plan.position) ch.push_back(channels_at(*w.cfg, *w.users, r, *w.bank, w.nlos_step));
  return ch;
}

AoOptions AoOptions::from_config(const ScenarioConfig& cfg) {
  AoOptions o;
  o.max_iterations = cfg.ao_max_iterations;
  o.convergence_tol = cfg.ao_convergence_tol;
  o.stop_on_decrease = cfg.ao_stop_on_decrease;
  o.weights = ObjectiveWeights::from_config(cfg);
  o.p3 = p3_options(cfg);
  o.p2.fbl = o.p3.fbl;
  o.p2.rate_min = cfg.rate_min_nats;
  o.p2.budget = beam_budget(cfg.comm_power_max_w, cfg.amplifier_efficiency);
  o.p2.noise = cfg.noise_power_w();
  o.p2.solver = o.p3.solver;
  o.warm_start_tol = cfg.warm_start_tolerance;
  return o;
}

namespace {

std::vector<double> comm_powers(const ScenarioConfig& cfg, const BeamPlan& beams) {
  std::vector<double> p;
  p.reserve(beams.size());
  for (const auto& b : beams) p.push_back(comm_power(b, cfg.amplifier_efficiency));
  return p;
}

}  // namespace

AoResult ao_initialize(const WindowProblem& w, const AoOptions& options) {
  const ScenarioConfig& cfg = *w.cfg;
  AoResult res;
  res.plan = straight_line_init(cfg, w.start, w.slots);
  res.channels = window_channels(w, res.plan);
  if (w.users->size() > 0) {
    res.beams = warm_start_p2init(res.channels, options.p2.noise, options.p2.budget,
                                  options.warm_start_tol, options.p2.solver);
  } else {
    res.beams.assign(w.slots, SlotBeams{});
  }
  res.init_report = check_trajectory(cfg, w.start, res.plan, comm_powers(cfg, res.beams));
  res.init_ok = res.init_report.ok;
  res.terms = objective_eval(cfg, options.weights, res.channels, res.plan, res.beams);
  res.history.push_back(res.terms.value);
  return res;
}

AoResult ao_solve(const WindowProblem& w, const AoOptions& options) {
  const ScenarioConfig& cfg = *w.cfg;
  AoResult res = ao_initialize(w, options);
  if (!res.init_ok) {
    res.stop_reason = "init-infeasible";
    return res;
  }
  res.stop_reason = "max-iterations";
  const bool has_users = w.users->size() > 0;
  for (int i = 1; i <= options.max_iterations; ++i) {
    P2Options p2 = options.p2;
    P3Options p3 = options.p3;
    if (options.before_iteration) options.before_iteration(i, p2, p3);
    AoIteration rec;
    const double prev = res.history.back();

    BeamPlan beams = res.beams;
    if (has_users) {
      const P2Result r2 = solve_p2(res.channels, res.beams, p2);
      rec.p2_status = r2.ok ? SolveStatus::kOptimal : r2.status;
      if (!r2.ok) {
        res.iterations.push_back(rec);
        res.stop_reason = "p2-failed";
        break;
      }
      beams = r2.beams;
    } else {
      rec.p2_status = SolveStatus::kOptimal;
    }

    const P3Result r3 = solve_p3(cfg, *w.users, w.start, res.plan, beams, res.channels, p3);
    rec.p3_status = r3.status;
    rec.frozen_links = r3.frozen_links;
    if (r3.status != SolveStatus::kOptimal) {
      res.iterations.push_back(rec);
      res.stop_reason = "p3-failed";
      break;
    }
    const ConstraintReport check = check_trajectory(cfg, w.start, r3.plan, comm_powers(cfg, beams));
    if (!check.ok) {
      res.iterations.push_back(rec);
      res.stop_reason = "constraint-check";
      break;
    }
    std::vector<SlotChannels> channels = window_channels(w, r3.plan);
    const ObjectiveTerms terms = objective_eval(cfg, options.weights, channels, r3.plan, beams);
    rec.objective = terms.value;
    if (options.stop_on_decrease && terms.value < prev - options.decrease_tol * std::abs(prev)) {
      res.iterations.push_back(rec);
      res.stop_reason = "objective-decrease";
      break;
    }
    rec.accepted = true;
    res.iterations.push_back(rec);
    res.plan = r3.plan;
    res.beams = std::move(beams);
    res.channels = std::move(channels);
    res.terms = terms;
    res.history.push_back(terms.value);
    if (terms.value - prev <= options.convergence_tol * std::abs(prev)) {
      res.stop_reason = "converged";
      break;
    }
  }
  return res;
}

}  // namespace uavmpc
