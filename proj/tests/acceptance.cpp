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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "uavmpc/audit.hpp"
#include "uavmpc/baselines.hpp"
#include "uavmpc/experiments.hpp"
#include "uavmpc/fbl.hpp"
#include "uavmpc/mpc.hpp"
#include "uavmpc/optimizer.hpp"
#include "uavmpc/propulsion.hpp"

using namespace uavmpc;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

/// Traces gathered by the mission criteria for the constraint ledger.
std::vector<std::pair<ScenarioConfig, MissionTrace>> g_traces;

UserSet users_for(const ScenarioConfig& cfg) {
  Rng rng = make_stream(cfg.rng_seed, Stream::kUsers);
  return place_users(cfg, rng);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// erf(x) = 2/sqrt(pi) exp(-x^2) sum 2^n x^(2n+1) / (1*3*...*(2n+1)); all terms positive.
double erfc_series(double x) {
  double term = x, sum = x;
  for (int n = 1; n < 500 && term > 1e-18 * sum; ++n) {
    term *= 2.0 * x * x / (2.0 * n + 1.0);
    sum += term;
  }
  return 1.0 - 2.0 / std::sqrt(3.14159265358979323846) * std::exp(-x * x) * sum;
}

double inv_q_bisection(double eps) {
  double lo = 0.0, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * erfc_series(mid / std::sqrt(2.0)) > eps ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome hover_power_check() {
  const double w = 39.2, rho = 1.225, s = 0.503;
  const double oracle = std::pow(w, 1.5) / std::sqrt(2.0 * rho * s);
  const double got = propulsion_power(Vec3::Zero(), PropulsionParams::from_config(ScenarioConfig{}));
  const double rel = std::abs(got - oracle) / oracle;
  return {rel <= 1e-9 && std::abs(got - 221.09) < 0.01,
          fmt("P(0) = %.6f W, relative error %.2e", got, rel)};
}

Outcome fbl_constants() {
  const double oracle_q = inv_q_bisection(1e-5);
  const double q = inv_q(1e-5);
  const double oracle_r = std::log(11.0) - std::sqrt(1.0 - 1.0 / 121.0) * oracle_q / std::sqrt(1000.0);
  const double r = fbl_rate(10.0, FblParams::make(1000, 1e-5));
  const bool ok = std::abs(q - 4.264891) <= 1e-5 && std::abs(q - oracle_q) <= 1e-5 &&
                  std::abs(r - 2.26359) <= 1e-4 && std::abs(r - oracle_r) <= 1e-4;
  return {ok, fmt("inv_q(1e-5) = %.7f, ", q) + fmt("rate(10) = %.6f nats", r)};
}

Outcome surrogate_suite() {
  const SurrogateAuditReport r = run_surrogate_audit(ScenarioConfig{}, 1);
  bool ok = true;
  std::string detail;
  for (const auto& [name, a] : std::vector<std::pair<std::string, const BoundAudit*>>{
           {"bf-shannon", &r.bf_shannon},
           {"traj-shannon", &r.traj_shannon},
           {"traj-dispersion", &r.traj_dispersion},
           {"propulsion", &r.propulsion}}) {
    ok = ok && a->samples >= 10000 && a->violations == 0 && a->max_gap_at_point <= 1e-9;
    detail += name + " " + std::to_string(a->violations) + "/" + std::to_string(a->samples) + ", ";
  }
  detail += "bf-dispersion (reported) " + std::to_string(r.bf_dispersion.violations) + "/" +
            std::to_string(r.bf_dispersion.samples) + fmt(" gap at point %.3g", r.bf_dispersion.max_gap_at_point);
  return {ok, detail};
}

Outcome concavity() {
  const SurrogateAuditReport r = run_surrogate_audit(ScenarioConfig{}, 1);
  const bool ok = r.concavity_draws >= 100 && r.concavity_max < 0.0 &&
                  r.concavity_refinement_change < 0.05;
  return {ok, std::to_string(r.concavity_draws) + " draws" +
                  fmt(", max second difference %.3e, x2 refinement change %.2e",
                      r.concavity_max, r.concavity_refinement_change)};
}

Outcome ao_monotonicity() {
  int bad = 0, with_rejects = 0, iterations = 0;
  double worst = 0.0;
  for (int s = 1; s <= 20; ++s) {
    ScenarioConfig cfg;
    cfg.rng_seed = s;
    const UserSet users = users_for(cfg);
    const NlosBank bank(cfg.rng_seed, cfg.num_users, cfg.num_antennas);
    const double f = (s - 1) / 20.0;
    const Vec3 r = cfg.start_m + f * (cfg.destination_m - cfg.start_m);
    const WindowProblem w{&cfg, &users, &bank, s, WindowStart{r, Vec3::Zero()}, cfg.horizon_slots};
    const AoOptions o = AoOptions::from_config(cfg);
    const AoResult res = ao_solve(w, o);
    if (!res.init_ok) {
      ++bad;
      continue;
    }
    for (std::size_t i = 1; i < res.history.size(); ++i) {
      const double drop = (res.history[i - 1] - res.history[i]) / std::abs(res.history[i - 1]);
      worst = std::max(worst, drop);
      if (drop > 1e-6) ++bad;
    }
    const ObjectiveTerms t = objective_eval(cfg, o.weights, window_channels(w, res.plan),
                                            res.plan, res.beams);
    if (std::abs(t.value - res.history.back()) > 1e-9 * std::abs(t.value)) ++bad;
    iterations += static_cast<int>(res.iterations.size());
    for (const auto& it : res.iterations) {
      if (!it.accepted) {
        ++with_rejects;
        break;
      }
    }
  }
  return {bad == 0, "20 windows, " + std::to_string(iterations) + " iterations, " +
                        std::to_string(with_rejects) + " windows ended on a restored snapshot" +
                        fmt(", largest relative drop %.2e", worst)};
}

Outcome closed_vs_open_loop() {
  std::vector<double> online, offline, joint;
  bool ok = true;
  for (std::uint64_t s = 1; s <= 10; ++s) {
    ScenarioConfig cfg;
    cfg.rng_seed = s;
    cfg.disturbance_m = 6.0;
    const UserSet users = users_for(cfg);
    const MissionTrace a = run_mission(cfg, users);
    const MissionTrace b = run_offline_mpc(cfg, users);
    const MissionTrace c = run_offline_joint(cfg, users);
    online.push_back(a.terminal_distance);
    offline.push_back(b.terminal_distance);
    joint.push_back(c.terminal_distance);
    ok = ok && a.terminal_distance <= cfg.arrival_tolerance_m &&
         b.terminal_distance > a.terminal_distance && c.terminal_distance > a.terminal_distance;
    std::printf("  seed %2llu: online %.2f m, offline-mpc %.2f m, offline-joint %.2f m\n",
                static_cast<unsigned long long>(s), a.terminal_distance, b.terminal_distance,
                c.terminal_distance);
    g_traces.push_back({cfg, a});
    g_traces.push_back({cfg, b});
    g_traces.push_back({cfg, c});
  }
  ok = ok && median(joint) >= median(offline);
  return {ok, fmt("max online %.2f m, ", *std::max_element(online.begin(), online.end())) +
                  fmt("median offline-mpc %.2f m, median offline-joint %.2f m", median(offline),
                      median(joint))};
}

bool same_step(const StepRecord& a, const StepRecord& b) {
  if (a.position != b.position || a.velocity != b.velocity || a.next_position != b.next_position ||
      a.disturbance != b.disturbance || a.rate != b.rate || a.sinr != b.sinr ||
      a.beams.size() != b.beams.size() || a.total_power_w != b.total_power_w) {
    return false;
  }
  for (std::size_t k = 0; k < a.beams.size(); ++k) {
    if (a.beams[k] != b.beams[k]) return false;
  }
  return true;
}

Outcome zero_disturbance() {
  bool ok = true;
  int steps = 0;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    ScenarioConfig cfg;
    cfg.rng_seed = s;
    cfg.disturbance_m = 0.0;
    const UserSet users = users_for(cfg);
    const MissionTrace a = run_mission(cfg, users);
    const MissionTrace b = run_offline_mpc(cfg, users);
    ok = ok && a.steps.size() == b.steps.size() && a.final_position == b.final_position;
    for (std::size_t t = 0; ok && t < a.steps.size(); ++t) ok = same_step(a.steps[t], b.steps[t]);
    steps += static_cast<int>(a.steps.size());
    g_traces.push_back({cfg, a});
    g_traces.push_back({cfg, b});
  }
  return {ok, "3 seeds, " + std::to_string(steps) + " steps compared field by field"};
}

Outcome beamforming_ordering() {
  ScenarioConfig cfg;
  SweepSpec spec;
  spec.param = SweepParam::kRateMin;
  spec.grid = {0.5, 1, 2, 3, 4, 5, 6, 7, 8};
  spec.schemes = {"bf-proposed", "bf-zf", "bf-mrt", "bf-equal"};
  spec.seeds = {1};
  spec.fixed_trajectory = true;
  const ResultTable t = run_sweep(spec, cfg);
  std::map<std::string, std::vector<double>> qos;
  for (const auto& r : t.rows) {
    if (r.metric == "qos_pct") qos[r.scheme].push_back(r.value);
  }
  bool ok = t.failures.empty();
  for (const auto& s : spec.schemes) ok = ok && qos[s].size() == spec.grid.size();
  if (!ok) return {false, "sweep incomplete"};
  for (std::size_t g = 0; g < spec.grid.size(); ++g) {
    if (spec.grid[g] <= 4.0) ok = ok && qos["bf-proposed"][g] >= 95.0 && qos["bf-zf"][g] >= 95.0;
  }
  for (const char* s : {"bf-mrt", "bf-equal"}) {
    for (std::size_t g = 1; g < spec.grid.size(); ++g) ok = ok && qos[s][g] <= qos[s][g - 1];
    ok = ok && qos[s].back() < std::min(qos["bf-proposed"].back(), qos["bf-zf"].back());
  }
  std::string detail = "qos % at R_min";
  for (const auto& s : spec.schemes) {
    detail += " " + s + " [";
    for (std::size_t g = 0; g < spec.grid.size(); ++g) detail += (g ? " " : "") + fmt("%.0f", qos[s][g]);
    detail += "]";
  }
  return {ok, detail};
}

Outcome trends() {
  struct Case {
    SweepParam param;
    std::vector<double> grid;
    int users;
  };
  const std::vector<Case> cases = {{SweepParam::kCommPower, {0.25, 0.5, 1.0, 2.0}, 3},
                                   {SweepParam::kAntennas, {6, 7, 8}, 5},
                                   {SweepParam::kBlocklength, {200, 500, 1000, 2000}, 3}};
  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    ScenarioConfig cfg;
    cfg.num_users = c.users;
    SweepSpec spec;
    spec.param = c.param;
    spec.grid = c.grid;
    spec.schemes = {"bf-proposed"};
    spec.seeds = {1, 2, 3, 4, 5};
    spec.fixed_trajectory = true;
    const ResultTable t = run_sweep(spec, cfg);
    std::vector<double> means;
    for (const auto& a : aggregate(t)) {
      if (a.metric == "mean_sum_rate") {
        means.push_back(a.mean);
        ok = ok && a.count == 5;
      }
    }
    ok = ok && t.failures.empty() && means.size() == c.grid.size();
    for (std::size_t g = 1; g < means.size(); ++g) ok = ok && means[g] >= means[g - 1];
    detail += (detail.empty() ? "" : "; ") + to_string(c.param) + " [";
    for (std::size_t g = 0; g < means.size(); ++g) detail += (g ? " " : "") + fmt("%.3f", means[g]);
    detail += "]";
  }
  return {ok, detail};
}

Outcome constraint_ledger() {
  if (g_traces.empty()) {
    for (std::uint64_t s = 1; s <= 3; ++s) {
      ScenarioConfig cfg;
      cfg.rng_seed = s;
      cfg.disturbance_m = 6.0;
      const UserSet users = users_for(cfg);
      g_traces.push_back({cfg, run_mission(cfg, users)});
      g_traces.push_back({cfg, run_offline_mpc(cfg, users)});
    }
  }
  int steps = 0, bad = 0;
  double replay = 0.0;
  std::string first;
  for (const auto& [cfg, trace] : g_traces) {
    const std::string msg = audit_trace(cfg, trace);
    if (!msg.empty()) {
      ++bad;
      if (first.empty()) first = trace.scheme + " seed " + std::to_string(cfg.rng_seed) + ": " + msg;
    }
    replay = std::max(replay, replay_error(cfg, trace));
    steps += static_cast<int>(trace.steps.size());
  }
  const bool ok = bad == 0 && replay <= 1e-9;
  return {ok, std::to_string(g_traces.size()) + " traces, " + std::to_string(steps) +
                  " applied controls" + fmt(", max replay error %.1e m", replay) +
                  (first.empty() ? "" : ", first failure " + first)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"hover power", hover_power_check},
      {"FBL constants", fbl_constants},
      {"surrogate validity", surrogate_suite},
      {"dispersion concavity", concavity},
      {"AO monotonicity", ao_monotonicity},
      {"closed-loop vs open-loop", closed_vs_open_loop},
      {"zero-disturbance equivalence", zero_disturbance},
      {"beamforming baseline ordering", beamforming_ordering},
      {"sum-rate trends", trends},
      {"constraint ledger", constraint_ledger},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("CRITERION %d %s: %s (%s; %.1f s)\n", id, o.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
