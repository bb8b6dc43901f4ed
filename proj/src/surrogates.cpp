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

#include "uavmpc/surrogates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace uavmpc {

double sqrt_bound_a(double v) { return 1.0 / (2.0 * std::sqrt(v)); }

double sqrt_bound_b(double v) { return sqrt_bound_a(v) + 0.5 * std::sqrt(v); }

void fraction_coefficients(double s, double i, double& alpha, double& beta, double& psi) {
  const double t = s + i;
  alpha = 4.0 * i / (t * t);
  beta = 2.0 * i * i / (t * t * t);
  psi = i * i / (t * t);
}

BfLinearizationPoint make_bf_point(const CVec& h, const std::vector<CVec>& beams, int user,
                                   double noise, const FblParams& fbl) {
  if (user < 0 || user >= static_cast<int>(beams.size())) {
    throw Error(ErrorCode::kInvalidArgument, "make_bf_point: user index out of range");
  }
  if (!(noise > 0.0)) throw DomainError("make_bf_point: noise power must be positive");
  BfLinearizationPoint pt;
  pt.user = user;
  pt.noise = noise;
  pt.c = fbl.penalty_coeff;
  pt.chi.reserve(beams.size());
  for (const auto& w : beams) pt.chi.push_back(h.dot(w));
  pt.s = std::norm(pt.chi[user]);
  pt.i = noise;
  for (std::size_t k = 0; k < beams.size(); ++k) {
    if (static_cast<int>(k) != user) pt.i += std::norm(pt.chi[k]);
  }
  pt.gamma = pt.s / pt.i;
  pt.eta = pt.s / (pt.i * (pt.s + pt.i));
  pt.v = dispersion(pt.gamma);
  if (pt.v > 0.0) {
    pt.a_sqrt = sqrt_bound_a(pt.v);
    pt.b_sqrt = sqrt_bound_b(pt.v);
  }
  fraction_coefficients(pt.s, pt.i, pt.alpha, pt.beta, pt.psi);
  return pt;
}

double signal_power(const CVec& h, const std::vector<CVec>& beams, int user) {
  return std::norm(h.dot(beams.at(user)));
}

double interference_power(const CVec& h, const std::vector<CVec>& beams, int user,
                          double noise) {
  double i = noise;
  for (std::size_t k = 0; k < beams.size(); ++k) {
    if (static_cast<int>(k) != user) i += std::norm(h.dot(beams[k]));
  }
  return i;
}

double signal_lb(const BfLinearizationPoint& pt, const CVec& h, const std::vector<CVec>& beams) {
  const Complex chi = pt.chi[pt.user];
  return 2.0 * std::real(std::conj(chi) * h.dot(beams.at(pt.user))) - std::norm(chi);
}

double interference_lb(const BfLinearizationPoint& pt, const CVec& h,
                       const std::vector<CVec>& beams) {
  double i = pt.noise;
  for (std::size_t k = 0; k < beams.size(); ++k) {
    if (static_cast<int>(k) == pt.user) continue;
    i += 2.0 * std::real(std::conj(pt.chi[k]) * h.dot(beams[k])) - std::norm(pt.chi[k]);
  }
  return i;
}

double shannon_lb(const BfLinearizationPoint& pt, const CVec& h, const std::vector<CVec>& beams) {
  const Complex chi = pt.chi[pt.user];
  const double lin = 2.0 * std::real(std::conj(chi) * h.dot(beams.at(pt.user))) / pt.i;
  const double s = signal_power(h, beams, pt.user);
  const double i = interference_power(h, beams, pt.user, pt.noise);
  return std::log1p(pt.gamma) - pt.gamma + lin - pt.eta * (s + i);
}

double dispersion_ub(const BfLinearizationPoint& pt, const CVec& h,
                     const std::vector<CVec>& beams) {
  const double s_bar = signal_lb(pt, h, beams);
  const double i_bar = interference_lb(pt, h, beams);
  const double xi = pt.alpha * i_bar + pt.beta * (s_bar + i_bar) + pt.psi;
  return pt.c * (pt.b_sqrt - pt.a_sqrt * xi);
}

double sqrt_bound(const BfLinearizationPoint& pt, double s, double i) {
  const double frac = i * i / ((s + i) * (s + i));
  return pt.b_sqrt - pt.a_sqrt * frac;
}

bool signal_trust_region(const BfLinearizationPoint& pt, const CVec& h,
                         const std::vector<CVec>& beams) {
  return signal_lb(pt, h, beams) > 0.0;
}

bool fraction_trust_region(const BfLinearizationPoint& pt, const CVec& h,
                           const std::vector<CVec>& beams) {
  const double s_bar = signal_lb(pt, h, beams);
  const double i_bar = interference_lb(pt, h, beams);
  const double t_i = pt.s + pt.i;
  return s_bar + i_bar <= 2.0 * t_i && (s_bar + i_bar) * pt.i <= 2.0 * i_bar * t_i;
}

BfAuditReport audit_bf_surrogate(const BfLinearizationPoint& pt, const CVec& h,
                                 const std::vector<CVec>& point_beams,
                                 const std::vector<std::vector<CVec>>& samples) {
  BfAuditReport r;
  const double c0 = std::log1p(pt.gamma);
  r.shannon_gap_at_point = std::abs(shannon_lb(pt, h, point_beams) - c0) / std::max(1.0, c0);
  const double d0 = pt.c * std::sqrt(pt.v);
  r.dispersion_gap_at_point = std::abs(dispersion_ub(pt, h, point_beams) - d0);
  for (const auto& w : samples) {
    ++r.samples;
    if (!signal_trust_region(pt, h, w) || !fraction_trust_region(pt, h, w)) {
      ++r.trust_region_failures;
      if (!signal_trust_region(pt, h, w)) continue;
    }
    const double s = signal_power(h, w, pt.user);
    const double i = interference_power(h, w, pt.user, pt.noise);
    const double c_true = std::log1p(s / i);
    const double c_lb = shannon_lb(pt, h, w);
    const double tol = 1e-12 * std::max(1.0, std::abs(c_true));
    if (c_lb > c_true + tol) {
      ++r.shannon_violations;
      r.max_shannon_violation = std::max(r.max_shannon_violation, c_lb - c_true);
    }
    const double d_true = pt.c * std::sqrt(dispersion(s / i));
    const double d_ub = dispersion_ub(pt, h, w);
    if (d_ub < d_true - 1e-12) {
      ++r.dispersion_violations;
      r.max_dispersion_violation = std::max(r.max_dispersion_violation, d_true - d_ub);
    }
  }
  return r;
}

double dispersion_complement(double gamma) {
  const double u = 1.0 / (1.0 + gamma);
  return u * u / (1.0 + std::sqrt(dispersion(gamma)));
}

TrajLinearizationPoint make_traj_point(double a, double b, double kappa, double rho, double c,
                                       double d, double d_min, double d_max) {
  if (!(a >= 0.0) || !(b >= 0.0) || !(kappa > 0.0) || !(rho > 0.0)) {
    throw DomainError("make_traj_point: need a, b >= 0 and kappa, rho > 0");
  }
  if (!(d_min > 0.0) || !(d_min <= d && d <= d_max)) {
    throw DomainError("make_traj_point: linearization distance outside [d_min, d_max]");
  }
  TrajLinearizationPoint pt;
  pt.a = a;
  pt.b = b;
  pt.kappa = kappa;
  pt.rho = rho;
  pt.c = c;
  pt.d = d;
  pt.d_min = d_min;
  pt.d_max = d_max;
  const double x = kappa * std::pow(d, rho);
  const double den = b + x;
  pt.gamma = a / den;
  pt.shannon = std::log1p(pt.gamma);
  pt.dispersion = c * std::sqrt(dispersion(pt.gamma));
  const double dgamma = -a * kappa * rho * std::pow(d, rho - 1.0) / (den * den);
  pt.shannon_slope = dgamma / (1.0 + pt.gamma);
  if (pt.gamma > 0.0) {
    const double u = 1.0 / (1.0 + pt.gamma);
    pt.dispersion_slope = c * u * u * u / std::sqrt(dispersion(pt.gamma)) * dgamma;
  }
  return pt;
}

double traj_gamma(const TrajLinearizationPoint& pt, double d) {
  return pt.a / (pt.b + pt.kappa * std::pow(d, pt.rho));
}

double traj_shannon(const TrajLinearizationPoint& pt, double d) {
  return std::log1p(traj_gamma(pt, d));
}

double traj_dispersion(const TrajLinearizationPoint& pt, double d) {
  return pt.c * std::sqrt(dispersion(traj_gamma(pt, d)));
}

namespace {

void check_interval(const TrajLinearizationPoint& pt, double d) {
  if (!(pt.d_min <= d && d <= pt.d_max)) {
    std::ostringstream msg;
    msg << "distance " << d << " outside [" << pt.d_min << ", " << pt.d_max << "]";
    throw DomainError(msg.str());
  }
}

}  // namespace

double traj_shannon_lb(const TrajLinearizationPoint& pt, double d) {
  check_interval(pt, d);
  return pt.shannon + pt.shannon_slope * (d - pt.d);
}

double traj_dispersion_ub(const TrajLinearizationPoint& pt, double d) {
  check_interval(pt, d);
  if (!(pt.gamma > 0.0)) throw DomainError("dispersion slope undefined at zero SINR");
  return pt.dispersion + pt.dispersion_slope * (d - pt.d);
}

double dispersion_second_derivative(double a, double b, double kappa, double rho, double c,
                                    double d) {
  const double x = kappa * std::pow(d, rho);
  const double x1 = rho * x / d;
  const double x2 = rho * (rho - 1.0) * x / (d * d);
  const double den = b + x;
  const double gamma = a / den;
  const double g1 = -a * x1 / (den * den);
  const double g2 = -a * x2 / (den * den) + 2.0 * a * x1 * x1 / (den * den * den);
  const double v = dispersion(gamma);
  if (!(v > 0.0)) return 0.0;
  const double u = 1.0 / (1.0 + gamma);
  const double sv = std::sqrt(v);
  const double f1 = u * u * u / sv;
  const double f2 = -3.0 * std::pow(u, 4) / sv - std::pow(u, 6) / (v * sv);
  return c * (f2 * g1 * g1 + f1 * g2);
}

double shannon_convexity_threshold(double a, double b, double kappa, double rho) {
  if (!(b > 0.0) || !(a > 0.0)) return 0.0;
  // Convex iff (rho + 1) x^2 + (a + 2b) x - (rho - 1) b (a + b) >= 0, x = kappa d^rho.
  const double qa = rho + 1.0;
  const double qb = a + 2.0 * b;
  const double qc = -(rho - 1.0) * b * (a + b);
  const double x = -2.0 * qc / (qb + std::sqrt(qb * qb - 4.0 * qa * qc));
  return std::pow(x / kappa, 1.0 / rho);
}

double dispersion_concavity_limit(double a, double b, double kappa, double rho, double c,
                                  double d_lo, double d_hi) {
  auto convex_at = [&](double d) {
    return dispersion_second_derivative(a, b, kappa, rho, c, d) > 0.0;
  };
  constexpr int kGrid = 512;
  const double ratio = std::pow(d_hi / d_lo, 1.0 / kGrid);
  double prev = d_lo;
  if (convex_at(d_lo)) return d_lo;
  for (int k = 1; k <= kGrid; ++k) {
    const double d = k == kGrid ? d_hi : d_lo * std::pow(ratio, k);
    if (convex_at(d)) {
      double lo = prev, hi = d;
      while (hi - lo > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        (convex_at(mid) ? hi : lo) = mid;
      }
      return lo;
    }
    prev = d;
  }
  return d_hi;
}

DistanceInterval traj_trust_interval(double a, double b, double kappa, double rho, double c,
                                     double d_min, double d_max) {
  DistanceInterval out;
  out.lo = std::max(d_min, shannon_convexity_threshold(a, b, kappa, rho));
  out.hi = out.lo <= d_max ? dispersion_concavity_limit(a, b, kappa, rho, c, out.lo, d_max) : d_min;
  return out;
}

ConcavityAudit dispersion_second_derivative_audit(double a, double b, double kappa, double rho,
                                                  double c, double d_lo, double d_hi, double h) {
  if (!(d_lo > 0.0) || !(d_hi > d_lo) || !(h > 0.0)) {
    throw DomainError("concavity audit: need 0 < d_lo < d_hi and h > 0");
  }
  ConcavityAudit out;
  out.max_second_difference = -std::numeric_limits<double>::infinity();
  out.max_analytic = -std::numeric_limits<double>::infinity();
  auto e = [&](double d) { return dispersion_complement(a / (b + kappa * std::pow(d, rho))); };
  const int steps = static_cast<int>(std::floor((d_hi - d_lo) / h + 1e-9));
  // Interior grid points have both neighbours inside the interval.
  for (int k = 1; k < steps; ++k) {
    const double d = d_lo + k * h;
    const double second = -c * (e(d + h) - 2.0 * e(d) + e(d - h)) / (h * h);
    if (second > out.max_second_difference) {
      out.max_second_difference = second;
      out.argmax_d = d;
    }
    out.max_analytic =
        std::max(out.max_analytic, dispersion_second_derivative(a, b, kappa, rho, c, d));
    ++out.grid_points;
  }
  return out;
}

std::string to_json(const BfAuditReport& r) {
  nlohmann::json j;
  j["samples"] = r.samples;
  j["shannon_violations"] = r.shannon_violations;
  j["dispersion_violations"] = r.dispersion_violations;
  j["trust_region_failures"] = r.trust_region_failures;
  j["shannon_gap_at_point"] = r.shannon_gap_at_point;
  j["dispersion_gap_at_point"] = r.dispersion_gap_at_point;
  j["max_shannon_violation"] = r.max_shannon_violation;
  j["max_dispersion_violation"] = r.max_dispersion_violation;
  return j.dump(2);
}

std::string to_json(const ConcavityAudit& r) {
  nlohmann::json j;
  j["max_second_difference"] = r.max_second_difference;
  j["argmax_d"] = r.argmax_d;
  j["max_analytic"] = r.max_analytic;
  j["grid_points"] = r.grid_points;
  return j.dump(2);
}

}  // namespace uavmpc
