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

#include "uavmpc/beamforming.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uavmpc/surrogates.hpp"

namespace uavmpc {

namespace {

/// Real and imaginary parts of g^H w_k as affine forms in the stacked beam
/// variables; w_k occupies [base, base + 2M) as (Re, Im).
struct ComplexForm {
  LinExpr re;
  LinExpr im;
};

ComplexForm inner(const CVec& g, int base) {
  const int m = static_cast<int>(g.size());
  ComplexForm f;
  for (int i = 0; i < m; ++i) {
    const double a = g[i].real();
    const double b = g[i].imag();
    f.re.add(base + i, a).add(base + m + i, b);
    f.im.add(base + m + i, a).add(base + i, -b);
  }
  return f;
}

int beam_base(int user, int m) { return 2 * m * user; }

SlotBeams unpack(const Eigen::VectorXd& x, int n_users, int m) {
  SlotBeams beams(n_users, CVec(m));
  for (int k = 0; k < n_users; ++k) {
    const int base = beam_base(k, m);
    for (int i = 0; i < m; ++i) beams[k][i] = Complex(x[base + i], x[base + m + i]);
  }
  return beams;
}

void pack(const SlotBeams& beams, Eigen::VectorXd& x) {
  const int m = static_cast<int>(beams.front().size());
  for (std::size_t k = 0; k < beams.size(); ++k) {
    const int base = beam_base(static_cast<int>(k), m);
    for (int i = 0; i < m; ++i) {
      x[base + i] = beams[k][i].real();
      x[base + m + i] = beams[k][i].imag();
    }
  }
}

std::vector<CVec> normalize(const std::vector<CVec>& h, double noise) {
  const double s = 1.0 / std::sqrt(noise);
  std::vector<CVec> g;
  g.reserve(h.size());
  for (const auto& v : h) g.push_back(v * s);
  return g;
}

double total_norm2(const SlotBeams& beams) {
  double s = 0.0;
  for (const auto& w : beams) s += w.squaredNorm();
  return s;
}

void scale_to_budget(SlotBeams& beams, double budget) {
  const double p = total_norm2(beams);
  if (!(p > 0.0)) return;
  const double s = std::sqrt(budget / p);
  for (auto& w : beams) w *= s;
}

/// Minimum-power beams meeting a common SINR target; false when the solve fails.
bool probe(const std::vector<CVec>& g, double target, const SolverOptions& options,
           SlotBeams& out, double& power) {
  const int n = static_cast<int>(g.size());
  const int m = static_cast<int>(g.front().size());
  ConicProblem p;
  p.add_variables(2 * m * n);
  const int t = p.add_variable();
  std::vector<LinExpr> all;
  for (int j = 0; j < 2 * m * n; ++j) all.push_back(LinExpr::var(j));
  p.add_soc(LinExpr::var(t), all);
  const double inv = 1.0 / std::sqrt(target);
  for (int u = 0; u < n; ++u) {
    std::vector<LinExpr> rest;
    for (int k = 0; k < n; ++k) {
      const ComplexForm f = inner(g[u], beam_base(k, m));
      if (k == u) {
        p.add_equality(f.im);
        continue;
      }
      rest.push_back(f.re);
      rest.push_back(f.im);
    }
    rest.emplace_back(1.0);
    p.add_soc(inv * inner(g[u], beam_base(u, m)).re, rest);
  }
  p.minimize(LinExpr::var(t));
  const SolveResult r = solve(p, options);
  if (!r.optimal()) return false;
  out = unpack(r.x, n, m);
  power = total_norm2(out);
  return true;
}

}  // namespace

std::vector<CVec> channel_vectors(const SlotChannels& ch) {
  std::vector<CVec> h;
  h.reserve(ch.size());
  for (const auto& e : ch) h.push_back(e.h);
  return h;
}

double beam_budget(double comm_power_max_w, double efficiency) {
  return comm_power_max_w * efficiency;
}

WarmStartResult warm_start_slot(const std::vector<CVec>& h, double noise, double budget,
                                double rel_tol, const SolverOptions& options) {
  if (h.empty()) throw Error(ErrorCode::kInvalidArgument, "warm start needs at least one user");
  if (!(budget > 0.0) || !(noise > 0.0) || !(rel_tol > 0.0)) {
    throw DomainError("warm start: budget, noise and tolerance must be positive");
  }
  const std::vector<CVec> g = normalize(h, noise);
  WarmStartResult res;
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& v : g) hi = std::min(hi, budget * v.squaredNorm());
  double lo = 0.0;
  SlotBeams best;
  while (hi - lo > rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    SlotBeams beams;
    double power = 0.0;
    ++res.probes;
    if (probe(g, mid, options, beams, power) && power <= budget * (1.0 + 1e-9)) {
      lo = mid;
      best = std::move(beams);
    } else {
      hi = mid;
    }
  }
  if (best.empty()) {
    // No positive target was certified: fall back to matched filters.
    best.reserve(h.size());
    for (const auto& v : h) best.push_back(v.norm() > 0.0 ? CVec(v / v.norm()) : CVec(v));
  }
  scale_to_budget(best, budget);
  res.beams = std::move(best);
  res.sinr_target = lo;
  return res;
}

BeamPlan warm_start_p2init(const std::vector<SlotChannels>& channels, double noise,
                           double budget, double rel_tol, const SolverOptions& options) {
  BeamPlan plan;
  plan.reserve(channels.size());
  for (const auto& ch : channels) {
    plan.push_back(warm_start_slot(channel_vectors(ch), noise, budget, rel_tol, options).beams);
  }
  return plan;
}

std::vector<double> slot_rates(const std::vector<CVec>& h, const SlotBeams& beams, double noise,
                               const FblParams& fbl) {
  std::vector<double> r(h.size());
  for (std::size_t n = 0; n < h.size(); ++n) {
    r[n] = fbl_rate(sinr(h, beams, static_cast<int>(n), noise), fbl);
  }
  return r;
}

double p2_surrogate_value(const std::vector<CVec>& h, const SlotBeams& point,
                          const SlotBeams& beams, const P2Options& options) {
  const std::vector<CVec> g = normalize(h, options.noise);
  double total = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    const BfLinearizationPoint pt =
        make_bf_point(g[n], point, static_cast<int>(n), 1.0, options.fbl);
    total += shannon_lb(pt, g[n], beams) - dispersion_ub(pt, g[n], beams);
  }
  return total;
}

P2SlotResult solve_p2_slot(const std::vector<CVec>& h, const SlotBeams& point,
                           const P2Options& options) {
  const int n = static_cast<int>(h.size());
  if (n == 0 || static_cast<int>(point.size()) != n) {
    throw Error(ErrorCode::kInvalidArgument, "solve_p2_slot: channel and beam counts differ");
  }
  const int m = static_cast<int>(h.front().size());
  const std::vector<CVec> g = normalize(h, options.noise);

  ConicProblem p;
  p.add_variables(2 * m * n);
  const int q0 = p.add_variables(n);
  std::vector<LinExpr> all;
  for (int j = 0; j < 2 * m * n; ++j) all.push_back(LinExpr::var(j));
  p.add_soc(LinExpr(std::sqrt(options.budget)), all);

  LinExpr objective;
  for (int u = 0; u < n; ++u) {
    const BfLinearizationPoint pt = make_bf_point(g[u], point, u, 1.0, options.fbl);
    std::vector<LinExpr> parts;
    LinExpr s_bar;
    LinExpr i_bar(1.0);
    for (int k = 0; k < n; ++k) {
      const ComplexForm f = inner(g[u], beam_base(k, m));
      parts.push_back(f.re);
      parts.push_back(f.im);
      const Complex chi = pt.chi[k];
      LinExpr lin = 2.0 * chi.real() * f.re + 2.0 * chi.imag() * f.im;
      lin += -std::norm(chi);
      if (k == u) {
        s_bar = lin;
      } else {
        i_bar += lin;
      }
    }
    const LinExpr q = LinExpr::var(q0 + u);
    p.add_quadratic_epigraph(q, parts);

    const Complex chi = pt.chi[u];
    const ComplexForm fu = inner(g[u], beam_base(u, m));
    LinExpr c_bar(std::log1p(pt.gamma) - pt.gamma - pt.eta);
    c_bar += (2.0 * chi.real() / pt.i) * fu.re + (2.0 * chi.imag() / pt.i) * fu.im;
    c_bar -= pt.eta * q;
    const LinExpr xi = pt.alpha * i_bar + pt.beta * (s_bar + i_bar) + LinExpr(pt.psi);
    const LinExpr d_bar = pt.c * (LinExpr(pt.b_sqrt) - pt.a_sqrt * xi);
    const LinExpr rate = c_bar - d_bar;
    objective -= rate;
    p.add_nonneg(rate - options.rate_min);

    p.add_nonneg(s_bar - 1e-6 * pt.s);
    const double t_i = pt.s + pt.i;
    p.add_le(s_bar + i_bar, LinExpr(2.0 * t_i));
    p.add_le(pt.i * (s_bar + i_bar), 2.0 * t_i * i_bar);
  }
  p.minimize(objective);

  Eigen::VectorXd hint = Eigen::VectorXd::Zero(p.num_variables());
  SlotBeams shrunk = point;
  for (auto& w : shrunk) w *= 1.0 - 1e-6;
  pack(shrunk, hint);
  for (int u = 0; u < n; ++u) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += std::norm(g[u].dot(shrunk[k]));
    hint[q0 + u] = sum * (1.0 + 1e-3) + 1e-3;
  }

  P2SlotResult res;
  res.surrogate_at_point = p2_surrogate_value(h, point, point, options);
  const SolveResult r = solve(p, options.solver, &hint);
  res.status = r.status;
  res.iterations = r.iterations;
  if (!r.optimal()) return res;
  res.beams = unpack(r.x, n, m);
  const double power = total_norm2(res.beams);
  if (power > options.budget) scale_to_budget(res.beams, options.budget);
  res.surrogate = p2_surrogate_value(h, point, res.beams, options);
  return res;
}

P2Result solve_p2(const std::vector<SlotChannels>& channels, const BeamPlan& point,
                  const P2Options& options) {
  if (channels.size() != point.size()) {
    throw Error(ErrorCode::kInvalidArgument, "solve_p2: slot counts differ");
  }
  P2Result res;
  res.beams.reserve(point.size());
  for (std::size_t s = 0; s < channels.size(); ++s) {
    const P2SlotResult r = solve_p2_slot(channel_vectors(channels[s]), point[s], options);
    if (r.status != SolveStatus::kOptimal) {
      res.failed_slot = static_cast<int>(s);
      res.status = r.status;
      return res;
    }
    res.beams.push_back(r.beams);
    res.surrogate += r.surrogate;
    res.surrogate_at_point += r.surrogate_at_point;
  }
  res.ok = true;
  return res;
}

}  // namespace uavmpc
