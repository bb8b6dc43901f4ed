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

#include "uavmpc/fbl.hpp"

#include <cmath>
#include <numbers>

#include "uavmpc/common.hpp"

namespace uavmpc {

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double inv_q(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw DomainError("inv_q: probability must lie in (0, 1)");
  }
  if (eps == 0.5) return 0.0;
  if (eps > 0.5) return -inv_q(1.0 - eps);

  // Q is decreasing; work on log Q so Newton behaves for tiny eps.
  double lo = 0.0;
  double hi = 40.0;
  const double target = std::log(eps);
  double x = std::sqrt(-2.0 * std::log(eps));  // tail-asymptotic starting point
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double q = q_function(x);
    const double f = std::log(q) - target;
    if (f > 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    // d/dx log Q(x) = -pdf / Q
    double next = x + f * q / pdf;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) < 1e-14 || hi - lo < 1e-14) return next;
    x = next;
  }
  return x;
}

FblParams FblParams::make(int blocklength, double error_probability) {
  if (blocklength < 1) throw DomainError("blocklength must be >= 1");
  FblParams p;
  p.blocklength = blocklength;
  p.error_probability = error_probability;
  p.penalty_coeff = inv_q(error_probability) / std::sqrt(static_cast<double>(blocklength));
  return p;
}

double dispersion(double sinr) {
  const double a = 1.0 + sinr;
  return 1.0 - 1.0 / (a * a);
}

double fbl_penalty(double sinr, const FblParams& params) {
  return params.penalty_coeff * std::sqrt(std::max(dispersion(sinr), 0.0));
}

double fbl_rate(double sinr, const FblParams& params) {
  return std::log1p(sinr) - fbl_penalty(sinr, params);
}

}  // namespace uavmpc
