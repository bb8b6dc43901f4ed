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

namespace uavmpc {

/// Gaussian tail probability Q(x) = P[Z > x].
double q_function(double x);

/// Inverse of Q on (0, 1): safeguarded Newton iterations inside a shrinking
/// bisection bracket, converged to 1e-13 in x.
double inv_q(double eps);

/// Normal-approximation constants for blocklength L and error target eps.
struct FblParams {
  int blocklength = 1000;
  double error_probability = 1e-5;
  /// Q^{-1}(eps) / sqrt(L); the dispersion penalty multiplier.
  double penalty_coeff = 0.0;

  static FblParams make(int blocklength, double error_probability);
};

/// 1 - (1 + sinr)^{-2}.
double dispersion(double sinr);

/// Shannon term ln(1 + sinr) minus penalty_coeff * sqrt(dispersion(sinr)),
/// in nats per channel use. Not clamped; small SINR can give negative rates.
double fbl_rate(double sinr, const FblParams& params);

/// Penalty term alone, penalty_coeff * sqrt(dispersion(sinr)).
double fbl_penalty(double sinr, const FblParams& params);

}  // namespace uavmpc
