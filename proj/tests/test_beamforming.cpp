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
#include <random>

#include <gtest/gtest.h>

#include "uavmpc/beamforming.hpp"
#include "uavmpc/channel.hpp"
#include "uavmpc/fbl.hpp"

namespace uavmpc {
namespace {

constexpr double kNoise = 1.9905e-14;

std::vector<CVec> random_channels(int n, int m, std::uint64_t seed, double scale = 1e-5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01(0.0, std::sqrt(0.5));
  std::vector<CVec> h(n, CVec(m));
  for (auto& v : h) {
    for (int i = 0; i < m; ++i) v[i] = scale * Complex(n01(rng), n01(rng));
  }
  return h;
}

P2Options options_for(double budget, double rate_min = 0.0) {
  P2Options o;
  o.fbl = FblParams::make(1000, 1e-5);
  o.budget = budget;
  o.noise = kNoise;
  o.rate_min = rate_min;
  return o;
}

double power(const SlotBeams& b) {
  double s = 0.0;
  for (const auto& w : b) s += w.squaredNorm();
  return s;
}

TEST(WarmStartTest, SingleUserIsMatchedFilterAtFullBudget) {
  const auto h = random_channels(1, 4, 3);
  const double budget = 0.5;
  const WarmStartResult r = warm_start_slot(h, kNoise, budget, 1e-4);
  const double expected = std::log1p(budget * h[0].squaredNorm() / kNoise);
  EXPECT_NEAR(std::log1p(sinr(h, r.beams, 0, kNoise)), expected, 1e-9 * expected);
  EXPECT_NEAR(power(r.beams), budget, 1e-12);
}

TEST(WarmStartTest, SymmetricOrthogonalUsersGetEqualSinr) {
  std::vector<CVec> h(2, CVec::Zero(4));
  h[0][0] = Complex(1e-5, 0.0);
  h[1][1] = Complex(0.0, 1e-5);
  const WarmStartResult r = warm_start_slot(h, kNoise, 0.5, 1e-4);
  const double g0 = sinr(h, r.beams, 0, kNoise);
  const double g1 = sinr(h, r.beams, 1, kNoise);
  EXPECT_NEAR(g0 / g1, 1.0, 0.01);
}

TEST(WarmStartTest, BisectionTerminatesAndMeetsTarget) {
  const auto h = random_channels(3, 4, 5);
  const WarmStartResult r = warm_start_slot(h, kNoise, 0.5, 1e-4);
  EXPECT_LE(r.probes, 40);
  EXPECT_GT(r.sinr_target, 0.0);
  for (int n = 0; n < 3; ++n) EXPECT_GE(sinr(h, r.beams, n, kNoise), r.sinr_target * (1 - 1e-6));
  EXPECT_NEAR(power(r.beams), 0.5, 1e-12);
}

TEST(P2Test, SurrogateDoesNotDropBelowWarmStart) {
  const auto h = random_channels(3, 4, 7);
  const P2Options o = options_for(0.5, 0.1);
  const SlotBeams start = warm_start_slot(h, kNoise, o.budget, 1e-4).beams;
  const P2SlotResult r = solve_p2_slot(h, start, o);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_GE(r.surrogate, r.surrogate_at_point - 1e-8);
  EXPECT_LE(power(r.beams), o.budget * (1.0 + 1e-9));
}

TEST(P2Test, ZeroRateFloorIsAlwaysFeasible) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto h = random_channels(3, 4, seed, 3e-7);
    SlotBeams start(3, CVec::Zero(4));
    for (int n = 0; n < 3; ++n) start[n][n] = Complex(0.3, 0.0);
    const P2SlotResult r = solve_p2_slot(h, start, options_for(0.5, 0.0));
    EXPECT_EQ(r.status, SolveStatus::kOptimal) << "seed " << seed;
  }
}

TEST(P2Test, SingleUserConvergesToMatchedFilter) {
  const auto h = random_channels(1, 4, 9);
  const P2Options o = options_for(0.5);
  SlotBeams w{CVec::Constant(4, Complex(0.2, 0.1))};
  for (int it = 0; it < 30; ++it) {
    const P2SlotResult r = solve_p2_slot(h, w, o);
    ASSERT_EQ(r.status, SolveStatus::kOptimal);
    w = r.beams;
  }
  const double ratio = std::abs(h[0].dot(w[0])) / (h[0].norm() * w[0].norm());
  EXPECT_GE(ratio, 0.999);
}

TEST(P2Test, TrueSumRateImprovesFromWarmStartOnAverage) {
  const FblParams fbl = FblParams::make(1000, 1e-5);
  double before = 0.0, after = 0.0;
  for (std::uint64_t seed = 11; seed < 16; ++seed) {
    const auto h = random_channels(3, 4, seed);
    const P2Options o = options_for(0.5, 0.1);
    SlotBeams w = warm_start_slot(h, kNoise, o.budget, 1e-4).beams;
    for (double r : slot_rates(h, w, kNoise, fbl)) before += r;
    for (int it = 0; it < 5; ++it) {
      const P2SlotResult r = solve_p2_slot(h, w, o);
      ASSERT_EQ(r.status, SolveStatus::kOptimal);
      w = r.beams;
    }
    for (double r : slot_rates(h, w, kNoise, fbl)) after += r;
  }
  EXPECT_GE(after, before);
}

TEST(P2Test, UnreachableRateFloorIsReportedInfeasible) {
  const auto h = random_channels(2, 4, 13);
  const P2Options o = options_for(0.5, 1e3);
  const SlotBeams start = warm_start_slot(h, kNoise, o.budget, 1e-4).beams;
  EXPECT_NE(solve_p2_slot(h, start, o).status, SolveStatus::kOptimal);
}

}  // namespace
}  // namespace uavmpc
