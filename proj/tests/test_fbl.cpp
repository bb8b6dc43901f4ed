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

#include <cmath>

#include <gtest/gtest.h>

#include "uavmpc/common.hpp"
#include "uavmpc/fbl.hpp"

namespace uavmpc {
namespace {

TEST(FblTest, InverseQ) {
  EXPECT_NEAR(inv_q(0.5), 0.0, 1e-12);
  EXPECT_NEAR(inv_q(1e-5), 4.264891, 1e-5);
  for (double eps : {1e-3, 1e-5, 1e-7}) {
    EXPECT_NEAR(q_function(inv_q(eps)), eps, 1e-10 * eps);
  }
  EXPECT_THROW(inv_q(0.0), Error);
  EXPECT_THROW(inv_q(1.0), Error);
}

TEST(FblTest, DispersionValues) {
  EXPECT_EQ(dispersion(0.0), 0.0);
  EXPECT_DOUBLE_EQ(dispersion(1.0), 0.75);
  double prev = 0.0;
  for (double g = 0.01; g < 1e6; g *= 1.5) {
    const double v = dispersion(g);
    EXPECT_GT(v, prev);
    EXPECT_LT(v, 1.0);
    prev = v;
  }
}

TEST(FblTest, RateValues) {
  const FblParams p = FblParams::make(1000, 1e-5);
  const double c = 4.2648908 / std::sqrt(1000.0);
  EXPECT_NEAR(p.penalty_coeff, c, 1e-8);
  EXPECT_EQ(fbl_rate(0.0, p), 0.0);
  EXPECT_NEAR(fbl_rate(10.0, p), std::log(11.0) - c * std::sqrt(1.0 - 1.0 / 121.0), 1e-7);
  EXPECT_NEAR(fbl_rate(10.0, p), 2.26359, 1e-4);
  EXPECT_LT(fbl_rate(1e-4, p), 0.0);
}

TEST(FblTest, RateBelowShannonAndMonotone) {
  const FblParams short_block = FblParams::make(200, 1e-5);
  const FblParams long_block = FblParams::make(2000, 1e-5);
  const FblParams strict = FblParams::make(1000, 1e-7);
  const FblParams loose = FblParams::make(1000, 1e-3);
  for (double g = 0.01; g < 1e5; g *= 2.0) {
    EXPECT_LT(fbl_rate(g, short_block), std::log1p(g));
    EXPECT_LT(fbl_rate(g, short_block), fbl_rate(g, long_block));
    EXPECT_LT(fbl_rate(g, strict), fbl_rate(g, loose));
  }
  EXPECT_GT(FblParams::make(1000000000, 1e-5).penalty_coeff, 0.0);
  EXPECT_LT(FblParams::make(1000000000, 1e-5).penalty_coeff, 2e-4);
}

}  // namespace
}  // namespace uavmpc
