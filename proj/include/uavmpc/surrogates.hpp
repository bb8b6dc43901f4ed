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

#include <cstdint>
#include <string>
#include <vector>

#include "uavmpc/common.hpp"
#include "uavmpc/fbl.hpp"

namespace uavmpc {

/// Beamforming-side linearization constants for one user in one slot.
/// chi[k] = h^H w_k at the linearization beams; chi[user] is the signal term.
struct BfLinearizationPoint {
  int user = 0;
  std::vector<Complex> chi;
  double noise = 0.0;
  double s = 0.0;
  double i = 0.0;
  double gamma = 0.0;
  double eta = 0.0;
  double v = 0.0;
  /// Square-root bound coefficients.
  double a_sqrt = 0.0;
  double b_sqrt = 0.0;
  /// Fraction bound coefficients.
  double alpha = 0.0;
  double beta = 0.0;
  double psi = 0.0;
  /// Dispersion penalty multiplier c.
  double c = 0.0;
};

BfLinearizationPoint make_bf_point(const CVec& h, const std::vector<CVec>& beams, int user,
                                   double noise, const FblParams& fbl);

double sqrt_bound_a(double v);
double sqrt_bound_b(double v);
void fraction_coefficients(double s, double i, double& alpha, double& beta, double& psi);

/// Signal and interference of the user under candidate beams.
double signal_power(const CVec& h, const std::vector<CVec>& beams, int user);
double interference_power(const CVec& h, const std::vector<CVec>& beams, int user,
                          double noise);

/// Affine minorants of S and I at the linearization point.
double signal_lb(const BfLinearizationPoint& pt, const CVec& h, const std::vector<CVec>& beams);
double interference_lb(const BfLinearizationPoint& pt, const CVec& h,
                       const std::vector<CVec>& beams);

/// Concave lower bound of ln(1 + gamma) in the beams.
double shannon_lb(const BfLinearizationPoint& pt, const CVec& h, const std::vector<CVec>& beams);

/// Affine dispersion surrogate c (B - A Xi).
double dispersion_ub(const BfLinearizationPoint& pt, const CVec& h,
                     const std::vector<CVec>& beams);

/// Upper bound of sqrt(V) alone, as a function of the true S and I.
double sqrt_bound(const BfLinearizationPoint& pt, double s, double i);

/// Signal trust region: linearized signal strictly positive.
bool signal_trust_region(const BfLinearizationPoint& pt, const CVec& h,
                         const std::vector<CVec>& beams);
/// Both fraction-bound trust regions, evaluated on the linearized S and I.
bool fraction_trust_region(const BfLinearizationPoint& pt, const CVec& h,
                           const std::vector<CVec>& beams);

struct BfAuditReport {
  std::int64_t samples = 0;
  std::int64_t shannon_violations = 0;
  std::int64_t dispersion_violations = 0;
  std::int64_t trust_region_failures = 0;
  double shannon_gap_at_point = 0.0;
  double dispersion_gap_at_point = 0.0;
  double max_shannon_violation = 0.0;
  double max_dispersion_violation = 0.0;
};

/// Counts bound violations over candidate beam sets. Samples outside the
/// signal trust region count as trust-region failures and are not scored.
BfAuditReport audit_bf_surrogate(const BfLinearizationPoint& pt, const CVec& h,
                                 const std::vector<CVec>& point_beams,
                                 const std::vector<std::vector<CVec>>& samples);

/// Trajectory-side constants for one user in one slot, with the normalized
/// channel frozen. gamma(d) = a / (b + kappa d^rho).
struct TrajLinearizationPoint {
  double a = 0.0;
  double b = 0.0;
  double kappa = 0.0;
  double rho = 2.3;
  double c = 0.0;
  double d = 1.0;
  double d_min = 1.0;
  double d_max = 2000.0;
  double gamma = 0.0;
  double shannon = 0.0;
  double dispersion = 0.0;
  double shannon_slope = 0.0;
  double dispersion_slope = 0.0;
};

TrajLinearizationPoint make_traj_point(double a, double b, double kappa, double rho, double c,
                                       double d, double d_min, double d_max);

double traj_gamma(const TrajLinearizationPoint& pt, double d);
double traj_shannon(const TrajLinearizationPoint& pt, double d);
double traj_dispersion(const TrajLinearizationPoint& pt, double d);

/// Tangent of ln(1 + gamma(d)) at pt.d. Throws DomainError off [d_min, d_max].
double traj_shannon_lb(const TrajLinearizationPoint& pt, double d);
/// Tangent of the dispersion penalty at pt.d. Throws DomainError off
/// [d_min, d_max] or when gamma at the point is zero.
double traj_dispersion_ub(const TrajLinearizationPoint& pt, double d);

/// Distances d >= shannon_convexity_threshold keep ln(1 + gamma(d)) convex;
/// zero when b = 0.
double shannon_convexity_threshold(double a, double b, double kappa, double rho);

/// Largest distance in [d_lo, d_hi] up to which the dispersion penalty stays
/// concave (d_hi when it is concave on the whole interval).
double dispersion_concavity_limit(double a, double b, double kappa, double rho, double c,
                                  double d_lo, double d_hi);

/// Sub-interval of [d_min, d_max] on which both trajectory tangents are valid
/// bounds. Empty when lo > hi.
struct DistanceInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool empty() const { return lo > hi; }
};

DistanceInterval traj_trust_interval(double a, double b, double kappa, double rho, double c,
                                     double d_min, double d_max);

/// Dispersion penalty in complement form: D = c - c * dispersion_complement.
double dispersion_complement(double gamma);

struct ConcavityAudit {
  double max_second_difference = 0.0;
  double argmax_d = 0.0;
  double max_analytic = 0.0;
  int grid_points = 0;
};

/// Central second differences of D(d) on [d_lo, d_hi] with spacing h, plus
/// the analytic second derivative on the same grid.
ConcavityAudit dispersion_second_derivative_audit(double a, double b, double kappa, double rho,
                                                  double c, double d_lo, double d_hi,
                                                  double h = 1.0);

/// Closed-form D''(d).
double dispersion_second_derivative(double a, double b, double kappa, double rho, double c,
                                    double d);

std::string to_json(const BfAuditReport& r);
std::string to_json(const ConcavityAudit& r);

}  // namespace uavmpc
