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

#include "uavmpc/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include <json.hpp>

#include "uavmpc/baselines.hpp"
#include "uavmpc/beamforming.hpp"
#include "uavmpc/channel.hpp"
#include "uavmpc/fbl.hpp"
#include "uavmpc/propulsion.hpp"
#include "uavmpc/surrogates.hpp"

namespace uavmpc {

namespace {

enum Family : std::uint64_t { kBf = 1, kTraj = 2, kProp = 3, kConcavity = 4 };

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// One user's link seen from a random UAV position. The base beams (matched
/// filter, or zero forcing when `nulling`) get a random component of relative
/// size `mix` and are scaled to the budget.
struct LinkDraw {
  std::vector<CVec> h;
  std::vector<CVec> hhat;
  std::vector<CVec> beams;
  int user = 0;
};

LinkDraw draw_link(const ScenarioConfig& cfg, Rng& rng, double budget, bool nulling, double mix) {
  const UserSet users = place_users(cfg, rng);
  const Vec3 r(uniform(rng, cfg.x_min_m, cfg.x_max_m), uniform(rng, cfg.y_min_m, cfg.y_max_m),
               uniform(rng, cfg.altitude_min_m, cfg.altitude_max_m));
  LinkDraw out;
  for (const Vec3& u : users.positions) {
    const ChannelEntry e = synthesize_channel(cfg, u, r, rng);
    out.h.push_back(e.h);
    out.hhat.push_back(e.hhat);
  }
  out.beams = beamform_baseline(BaselineKind::kMrt, out.hhat, budget);
  if (nulling && cfg.num_antennas >= cfg.num_users) {
    try {
      out.beams = beamform_baseline(BaselineKind::kZf, out.hhat, budget);
    } catch (const DomainError&) {
    }
  }
  std::normal_distribution<double> n01(0.0, 1.0);
  double power = 0.0;
  for (auto& w : out.beams) {
    const double scale = w.norm();
    for (auto& x : w) x += mix * scale * Complex(n01(rng), n01(rng)) / std::sqrt(2.0 * w.size());
    power += w.squaredNorm();
  }
  for (auto& w : out.beams) w *= std::sqrt(budget / power);
  out.user = std::uniform_int_distribution<int>(0, cfg.num_users - 1)(rng);
  return out;
}

void record(BoundAudit& a, double excess, double tol) {
  ++a.samples;
  if (excess > tol) {
    ++a.violations;
    a.max_violation = std::max(a.max_violation, excess);
  }
}

void audit_bf(const ScenarioConfig& cfg, std::uint64_t seed, const AuditOptions& o,
              SurrogateAuditReport& rep) {
  const FblParams fbl = FblParams::make(cfg.blocklength, cfg.error_probability);
  const double budget = beam_budget(cfg.comm_power_max_w, cfg.amplifier_efficiency);
  const double sigma = std::sqrt(cfg.noise_power_w());
  std::normal_distribution<double> n01(0.0, 1.0);
  for (int p = 0; p < o.points; ++p) {
    Rng rng = make_stream(seed, Stream::kAudit, kBf, p);
    const LinkDraw link = draw_link(cfg, rng, budget, false, uniform(rng, 0.0, 1.0));
    const CVec g = link.h[link.user] / sigma;
    const BfLinearizationPoint pt = make_bf_point(g, link.beams, link.user, 1.0, fbl);
    const double c0 = std::log1p(pt.gamma);
    const double d0 = pt.c * std::sqrt(pt.v);
    rep.bf_shannon.max_gap_at_point = std::max(
        rep.bf_shannon.max_gap_at_point,
        std::abs(shannon_lb(pt, g, link.beams) - c0) / std::max(1.0, c0));
    rep.bf_dispersion.max_gap_at_point =
        std::max(rep.bf_dispersion.max_gap_at_point,
                 std::abs(dispersion_ub(pt, g, link.beams) - d0) / std::max(1.0, d0));
    std::int64_t scored = 0;
    for (int s = 0; scored < o.candidates_per_point && s < 20 * o.candidates_per_point; ++s) {
      const double step = std::pow(10.0, uniform(rng, -4.0, 0.0));
      std::vector<CVec> w = link.beams;
      double power = 0.0;
      for (auto& b : w) {
        const double scale = b.norm();
        for (auto& x : b) x += step * scale * Complex(n01(rng), n01(rng)) / std::sqrt(2.0 * b.size());
        power += b.squaredNorm();
      }
      if (power > budget) {
        for (auto& b : w) b *= std::sqrt(budget / power);
      }
      if (!signal_trust_region(pt, g, w) || !fraction_trust_region(pt, g, w)) {
        ++rep.bf_shannon.skipped;
        ++rep.bf_dispersion.skipped;
        continue;
      }
      ++scored;
      const double sig = signal_power(g, w, link.user);
      const double inter = interference_power(g, w, link.user, 1.0);
      const double c_true = std::log1p(sig / inter);
      record(rep.bf_shannon, shannon_lb(pt, g, w) - c_true, 1e-12 * std::max(1.0, c_true));
      const double d_true = pt.c * std::sqrt(dispersion(sig / inter));
      record(rep.bf_dispersion, d_true - dispersion_ub(pt, g, w), 1e-12);
    }
  }
}

void audit_traj(const ScenarioConfig& cfg, std::uint64_t seed, const AuditOptions& o,
                SurrogateAuditReport& rep) {
  const FblParams fbl = FblParams::make(cfg.blocklength, cfg.error_probability);
  const double budget = beam_budget(cfg.comm_power_max_w, cfg.amplifier_efficiency);
  const double kappa = cfg.noise_power_w() / cfg.reference_gain;
  const double rho = cfg.pathloss_exponent;
  int accepted = 0;
  for (int p = 0; accepted < o.points && p < 50 * o.points; ++p) {
    Rng rng = make_stream(seed, Stream::kAudit, kTraj, p);
    const LinkDraw link = draw_link(cfg, rng, budget, true, std::pow(10.0, uniform(rng, -6.0, -1.0)));
    const CVec& hh = link.hhat[link.user];
    const double a = std::norm(hh.dot(link.beams[link.user]));
    double b = 0.0;
    for (int k = 0; k < static_cast<int>(link.beams.size()); ++k) {
      if (k != link.user) b += std::norm(hh.dot(link.beams[k]));
    }
    const DistanceInterval iv =
        traj_trust_interval(a, b, kappa, rho, fbl.penalty_coeff, cfg.distance_min_m,
                            cfg.distance_max_m);
    if (iv.empty() || !(a > 0.0)) {
      rep.traj_shannon.skipped += o.candidates_per_point;
      rep.traj_dispersion.skipped += o.candidates_per_point;
      continue;
    }
    ++accepted;
    const double d_ref = uniform(rng, iv.lo, iv.hi);
    const TrajLinearizationPoint pt =
        make_traj_point(a, b, kappa, rho, fbl.penalty_coeff, d_ref, iv.lo, iv.hi);
    const double c0 = traj_shannon(pt, d_ref);
    const double dd0 = traj_dispersion(pt, d_ref);
    rep.traj_shannon.max_gap_at_point = std::max(
        rep.traj_shannon.max_gap_at_point, std::abs(traj_shannon_lb(pt, d_ref) - c0) / std::max(1.0, c0));
    rep.traj_dispersion.max_gap_at_point =
        std::max(rep.traj_dispersion.max_gap_at_point,
                 std::abs(traj_dispersion_ub(pt, d_ref) - dd0) / std::max(1.0, dd0));
    for (int s = 0; s < o.candidates_per_point; ++s) {
      const double d = s == 0 ? iv.lo : s == 1 ? iv.hi : uniform(rng, iv.lo, iv.hi);
      const double c_true = traj_shannon(pt, d);
      record(rep.traj_shannon, traj_shannon_lb(pt, d) - c_true, 1e-12 * std::max(1.0, c_true));
      const double d_true = traj_dispersion(pt, d);
      record(rep.traj_dispersion, d_true - traj_dispersion_ub(pt, d), 1e-12);
    }
  }
}

void audit_propulsion(const ScenarioConfig& cfg, std::uint64_t seed, const AuditOptions& o,
                      SurrogateAuditReport& rep) {
  const PropulsionParams prop = PropulsionParams::from_config(cfg);
  const double vmax = cfg.max_horizontal_speed_mps;
  const double umax = cfg.max_vertical_speed_mps;
  auto horizontal = [&](Rng& rng) {
    const double r = vmax * std::sqrt(uniform(rng, 0.0, 1.0));
    const double phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
    return Vec2(r * std::cos(phi), r * std::sin(phi));
  };
  for (int p = 0; p < o.points; ++p) {
    Rng rng = make_stream(seed, Stream::kAudit, kProp, p);
    const Vec2 ref = horizontal(rng);
    const PropulsionSurrogate sur = propulsion_surrogate(ref, prop);
    const Vec3 at(ref.x(), ref.y(), uniform(rng, -umax, umax));
    const double p0 = propulsion_power(at, prop);
    rep.propulsion.max_gap_at_point =
        std::max(rep.propulsion.max_gap_at_point, std::abs(eval_ub(sur, at, prop) - p0) / p0);
    std::int64_t scored = 0;
    for (int s = 0; scored < o.candidates_per_point && s < 20 * o.candidates_per_point; ++s) {
      const Vec2 vh = horizontal(rng);
      const Vec3 v(vh.x(), vh.y(), uniform(rng, -umax, umax));
      if (!(sur.linear_psi(vh) > sur.floor())) {
        ++rep.propulsion.skipped;
        continue;
      }
      ++scored;
      const double truth = propulsion_power(v, prop);
      record(rep.propulsion, truth - eval_ub(sur, v, prop), 1e-12 * truth);
    }
  }
}

void audit_concavity(const ScenarioConfig& cfg, std::uint64_t seed, const AuditOptions& o,
                     SurrogateAuditReport& rep) {
  const FblParams fbl = FblParams::make(cfg.blocklength, cfg.error_probability);
  const double budget = beam_budget(cfg.comm_power_max_w, cfg.amplifier_efficiency);
  const double kappa = cfg.noise_power_w() / cfg.reference_gain;
  rep.concavity_max = -std::numeric_limits<double>::infinity();
  rep.concavity_max_analytic = -std::numeric_limits<double>::infinity();
  for (int p = 0; rep.concavity_draws < o.concavity_draws && p < 50 * o.concavity_draws; ++p) {
    Rng rng = make_stream(seed, Stream::kAudit, kConcavity, p);
    const LinkDraw link = draw_link(cfg, rng, budget, false, uniform(rng, 0.0, 1.0));
    const CVec& hh = link.hhat[link.user];
    const double a = std::norm(hh.dot(link.beams[link.user]));
    if (!(a > 0.0)) continue;
    double b = 0.0;
    for (int k = 0; k < static_cast<int>(link.beams.size()); ++k) {
      if (k != link.user) b += std::norm(hh.dot(link.beams[k]));
    }
    ++rep.concavity_draws;
    const ConcavityAudit coarse = dispersion_second_derivative_audit(
        a, b, kappa, cfg.pathloss_exponent, fbl.penalty_coeff, cfg.distance_min_m,
        cfg.distance_max_m, 1.0);
    // Same interior points as the coarse grid, plus the midpoints.
    const ConcavityAudit fine = dispersion_second_derivative_audit(
        a, b, kappa, cfg.pathloss_exponent, fbl.penalty_coeff, cfg.distance_min_m + 0.5,
        cfg.distance_max_m - 0.5, 0.5);
    rep.concavity_max = std::max(rep.concavity_max, coarse.max_second_difference);
    rep.concavity_max_analytic = std::max(rep.concavity_max_analytic, coarse.max_analytic);
    rep.concavity_refinement_change =
        std::max(rep.concavity_refinement_change,
                 std::abs(fine.max_second_difference - coarse.max_second_difference) /
                     std::abs(coarse.max_second_difference));
  }
}

nlohmann::ordered_json bound_json(const BoundAudit& a) {
  return {{"samples", a.samples},
          {"violations", a.violations},
          {"skipped", a.skipped},
          {"max_violation", a.max_violation},
          {"max_gap_at_point", a.max_gap_at_point}};
}

}  // namespace

SurrogateAuditReport run_surrogate_audit(const ScenarioConfig& cfg, std::uint64_t seed,
                                         const AuditOptions& options) {
  SurrogateAuditReport rep;
  rep.seed = seed;
  audit_bf(cfg, seed, options, rep);
  audit_traj(cfg, seed, options, rep);
  audit_propulsion(cfg, seed, options, rep);
  audit_concavity(cfg, seed, options, rep);
  return rep;
}

std::string to_json(const SurrogateAuditReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["seed"] = r.seed;
  j["bf_shannon"] = bound_json(r.bf_shannon);
  j["bf_dispersion"] = bound_json(r.bf_dispersion);
  j["traj_shannon"] = bound_json(r.traj_shannon);
  j["traj_dispersion"] = bound_json(r.traj_dispersion);
  j["propulsion"] = bound_json(r.propulsion);
  j["concavity"] = {{"draws", r.concavity_draws},
                    {"max_second_difference", r.concavity_max},
                    {"max_analytic", r.concavity_max_analytic},
                    {"refinement_change", r.concavity_refinement_change}};
  return j.dump(2) + "\n";
}

std::string to_csv(const SurrogateAuditReport& r) {
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  std::string out = "# schema_version=1\n# seed=" + std::to_string(r.seed) +
                    "\nfamily,samples,violations,skipped,max_violation,max_gap_at_point\n";
  const std::pair<const char*, const BoundAudit*> rows[] = {
      {"bf_shannon", &r.bf_shannon},       {"bf_dispersion", &r.bf_dispersion},
      {"traj_shannon", &r.traj_shannon},   {"traj_dispersion", &r.traj_dispersion},
      {"propulsion", &r.propulsion}};
  for (const auto& [name, a] : rows) {
    out += std::string(name) + ',' + std::to_string(a->samples) + ',' +
           std::to_string(a->violations) + ',' + std::to_string(a->skipped) + ',' +
           num(a->max_violation) + ',' + num(a->max_gap_at_point) + '\n';
  }
  out += "concavity," + std::to_string(r.concavity_draws) + ',' +
         std::to_string(r.concavity_max < 0.0 ? 0 : 1) + ",0," + num(r.concavity_max) + ',' +
         num(r.concavity_refinement_change) + '\n';
  return out;
}

}  // namespace uavmpc
