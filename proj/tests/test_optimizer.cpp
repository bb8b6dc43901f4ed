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

#include "uavmpc/optimizer.hpp"
#include "uavmpc/propulsion.hpp"

namespace uavmpc {
namespace {

struct Fixture {
  ScenarioConfig cfg;
  UserSet users;
  NlosBank bank;

  explicit Fixture(std::uint64_t seed)
      : cfg(with_seed(seed)), users(make_users(cfg)), bank(seed, cfg.num_users, cfg.num_antennas) {}

  static ScenarioConfig with_seed(std::uint64_t seed) {
    ScenarioConfig c;
    c.rng_seed = seed;
    return c;
  }
  static UserSet make_users(const ScenarioConfig& c) {
    Rng rng = make_stream(c.rng_seed, Stream::kUsers);
    return place_users(c, rng);
  }
  WindowProblem window(const Vec3& r, const Vec3& v_prev, int step = 0) const {
    return WindowProblem{&cfg, &users, &bank, step, WindowStart{r, v_prev}, cfg.horizon_slots};
  }
};

double hover_closed_form(const ScenarioConfig& c) {
  return std::pow(c.uav_weight_n, 1.5) / std::sqrt(2.0 * c.air_density_kg_m3 * c.rotor_area_m2);
}

TEST(ObjectiveTest, ParkedAtDestinationWithoutBeamsCostsHoverPower) {
  ScenarioConfig cfg;
  const int k = 4;
  TrajectoryPlan plan;
  plan.position.assign(k, cfg.destination_m);
  plan.velocity.assign(k, Vec3::Zero());
  const BeamPlan beams(k, SlotBeams(cfg.num_users, CVec::Zero(cfg.num_antennas)));
  Rng rng = make_stream(cfg.rng_seed, Stream::kUsers);
  const UserSet users = place_users(cfg, rng);
  const NlosBank bank(cfg.rng_seed, cfg.num_users, cfg.num_antennas);
  std::vector<SlotChannels> ch(k, channels_at(cfg, users, cfg.destination_m, bank, 0));
  const ObjectiveWeights w = ObjectiveWeights::from_config(cfg);
  const ObjectiveTerms t = objective_eval(cfg, w, ch, plan, beams);
  const double expected = -w.power * k * hover_closed_form(cfg);
  EXPECT_NEAR(t.value, expected, 1e-12 * std::abs(expected));
}

TEST(ObjectiveTest, ZeroWeightsGiveZeroAndWeightsAreLinear) {
  Fixture f(3);
  const AoResult init = ao_initialize(f.window(f.cfg.start_m, Vec3::Zero()), AoOptions::from_config(f.cfg));
  const ObjectiveTerms zero = objective_eval(f.cfg, {}, init.channels, init.plan, init.beams);
  EXPECT_EQ(zero.value, 0.0);
  const ObjectiveTerms one = objective_eval(f.cfg, {0.0, 1.0, 0.0}, init.channels, init.plan, init.beams);
  const ObjectiveTerms two = objective_eval(f.cfg, {0.0, 2.0, 0.0}, init.channels, init.plan, init.beams);
  EXPECT_EQ(two.value, 2.0 * one.value);
  EXPECT_LT(one.value, 0.0);
}

TEST(AoTest, ZeroIterationsReturnsInitialization) {
  Fixture f(2);
  AoOptions o = AoOptions::from_config(f.cfg);
  o.max_iterations = 0;
  const WindowProblem w = f.window(f.cfg.start_m, Vec3::Zero());
  const AoResult init = ao_initialize(w, o);
  const AoResult r = ao_solve(w, o);
  ASSERT_TRUE(r.init_ok);
  EXPECT_EQ(r.history.size(), 1u);
  for (int k = 0; k < w.slots; ++k) {
    EXPECT_EQ(r.plan.velocity[k], init.plan.velocity[k]);
    for (int n = 0; n < f.users.size(); ++n) EXPECT_EQ(r.beams[k][n], init.beams[k][n]);
  }
}

TEST(AoTest, InfeasibleSecondIterationRestoresFirst) {
  Fixture f(4);
  AoOptions o = AoOptions::from_config(f.cfg);
  o.stop_on_decrease = false;
  o.convergence_tol = -1.0;
  const WindowProblem w = f.window(f.cfg.start_m, Vec3::Zero());
  AoOptions one = o;
  one.max_iterations = 1;
  const AoResult first = ao_solve(w, one);
  ASSERT_EQ(first.history.size(), 2u);

  o.before_iteration = [](int i, P2Options& p2, P3Options&) {
    if (i == 2) p2.rate_min = 1e3;
  };
  const AoResult r = ao_solve(w, o);
  EXPECT_EQ(r.stop_reason, "p2-failed");
  ASSERT_EQ(r.history.size(), 2u);
  EXPECT_EQ(r.history.back(), first.history.back());
  for (int k = 0; k < w.slots; ++k) EXPECT_EQ(r.plan.velocity[k], first.plan.velocity[k]);
}

TEST(AoTest, ObjectiveIsNonDecreasingAcrossWindows) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Fixture f(seed);
    Rng rng = make_stream(seed, Stream::kAudit);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Vec3 r = f.cfg.start_m + u(rng) * (f.cfg.destination_m - f.cfg.start_m);
    const Vec3 v(4.0 * u(rng), 4.0 * u(rng), -4.0 * u(rng));
    const AoResult res = ao_solve(f.window(r, v, static_cast<int>(seed)), AoOptions::from_config(f.cfg));
    ASSERT_TRUE(res.init_ok);
    for (std::size_t i = 1; i < res.history.size(); ++i) {
      EXPECT_GE(res.history[i], res.history[i - 1] - 1e-6 * std::abs(res.history[i - 1])) << "seed " << seed;
    }
  }
}

}  // namespace
}  // namespace uavmpc
