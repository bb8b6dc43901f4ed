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

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "uavmpc/common.hpp"
#include "uavmpc/conic.hpp"

namespace uavmpc {
namespace {

TEST(ConicTest, SecondOrderConeOfFixedPoint) {
  ConicProblem p;
  const int t = p.add_variable();
  p.add_soc(LinExpr::var(t), {LinExpr(1.0), LinExpr(1.0)});
  p.minimize(LinExpr::var(t));
  const SolveResult r = solve(p);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.x[t], std::sqrt(2.0), 1e-8);
}

TEST(ConicTest, InverseSqrtEpigraph) {
  ConicProblem p;
  const int t = p.add_variable();
  const int s = p.add_variable();
  p.add_inv_sqrt_epigraph(LinExpr::var(t), LinExpr::var(s));
  p.add_equality(LinExpr::var(s) - 4.0);
  p.minimize(LinExpr::var(t));
  const SolveResult r = solve(p);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.x[t], 0.5, 1e-8);
}

TEST(ConicTest, InverseSqrtEpigraphWithBoundsInsteadOfEquality) {
  ConicProblem p;
  const int t = p.add_variable();
  const int s = p.add_variable();
  p.add_inv_sqrt_epigraph(LinExpr::var(t), LinExpr::var(s));
  p.add_le(LinExpr::var(s), LinExpr(4.0));
  p.minimize(LinExpr::var(t));
  const SolveResult r = solve(p);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.x[t], 0.5, 1e-8);
}

TEST(ConicTest, CubicEpigraph) {
  ConicProblem p;
  const int q = p.add_variable();
  const int s = p.add_variable();
  p.add_cubic_epigraph(LinExpr::var(q), LinExpr::var(s));
  p.add_equality(LinExpr::var(s) - 2.0);
  p.minimize(LinExpr::var(q));
  const SolveResult r = solve(p);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.x[q], 8.0, 1e-7);
}

TEST(ConicTest, EmptyFeasibleSetIsInfeasible) {
  ConicProblem p;
  const int x = p.add_variable();
  p.add_nonneg(LinExpr::var(x) - 1.0);
  p.add_le(LinExpr::var(x), LinExpr(0.0));
  p.minimize(LinExpr::var(x));
  EXPECT_EQ(solve(p).status, SolveStatus::kInfeasible);
}

TEST(ConicTest, InconsistentEqualitiesAreInfeasible) {
  ConicProblem p;
  const int x = p.add_variable();
  p.add_equality(LinExpr::var(x) - 1.0);
  p.add_equality(LinExpr::var(x) - 2.0);
  p.add_nonneg(LinExpr::var(x));
  EXPECT_EQ(solve(p).status, SolveStatus::kInfeasible);
}

TEST(ConicTest, UnboundedLinearProgram) {
  ConicProblem p;
  const int x = p.add_variable();
  p.add_nonneg(LinExpr::var(x));
  p.minimize(LinExpr::var(x, -1.0));
  EXPECT_EQ(solve(p).status, SolveStatus::kUnbounded);
}

TEST(ConicTest, DegenerateSocIsAbsoluteValue) {
  // |2x - 3| <= t, minimise t + 0.1 x  ->  x = 1.5, t = 0
  ConicProblem p;
  const int x = p.add_variable();
  const int t = p.add_variable();
  p.add_soc(LinExpr::var(t), {2.0 * LinExpr::var(x) - 3.0});
  p.minimize(LinExpr::var(t) + 0.1 * LinExpr::var(x));
  const SolveResult r = solve(p);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.x[x], 1.5, 1e-6);
  EXPECT_NEAR(r.x[t], 0.0, 1e-6);
}

TEST(ConicTest, QuadraticEpigraphMatchesSquaredNorm) {
  ConicProblem p;
  const int q = p.add_variable();
  const int y = p.add_variables(2);
  p.add_quadratic_epigraph(LinExpr::var(q), {LinExpr::var(y), LinExpr::var(y + 1)});
  p.add_equality(LinExpr::var(y) - 3.0);
  p.add_equality(LinExpr::var(y + 1) + 4.0);
  p.minimize(LinExpr::var(q));
  const SolveResult r = solve(p);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.x[q], 25.0, 1e-6);
}

TEST(ConicTest, ReportedObjectiveMatchesIndependentEvaluation) {
  ConicProblem p;
  const int x = p.add_variables(3);
  p.add_soc(LinExpr(1.0), {LinExpr::var(x), LinExpr::var(x + 1), LinExpr::var(x + 2)});
  LinExpr obj = LinExpr::var(x, 1.0) + LinExpr::var(x + 1, -2.0) + LinExpr::var(x + 2, 0.5);
  obj += 7.0;
  p.minimize(obj);
  const SolveResult r = solve(p);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  const double expected = 7.0 - std::sqrt(1.0 + 4.0 + 0.25);
  EXPECT_NEAR(r.objective, expected, 1e-7);
  EXPECT_NEAR(p.objective_value(r.x), r.objective, 1e-12);
}

TEST(ConicTest, MinimumNormPointInPolytope) {
  // minimise ||x|| s.t. x1 + x2 >= 2  ->  x = (1, 1)
  ConicProblem p;
  const int x = p.add_variables(2);
  const int t = p.add_variable();
  p.add_soc(LinExpr::var(t), {LinExpr::var(x), LinExpr::var(x + 1)});
  p.add_nonneg(LinExpr::var(x) + LinExpr::var(x + 1) - 2.0);
  p.minimize(LinExpr::var(t));
  const SolveResult r = solve(p);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.x[x], 1.0, 1e-6);
  EXPECT_NEAR(r.x[x + 1], 1.0, 1e-6);
  EXPECT_NEAR(r.objective, std::sqrt(2.0), 1e-8);
}

TEST(ConicTest, DeterministicAcrossRepeatedSolves) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n01;
  ConicProblem p;
  const int x = p.add_variables(6);
  const int t = p.add_variable();
  std::vector<LinExpr> rows;
  for (int i = 0; i < 6; ++i) rows.push_back(LinExpr::var(x + i) - n01(rng));
  p.add_soc(LinExpr::var(t), rows);
  for (int i = 0; i < 6; ++i) p.add_le(LinExpr::var(x + i), LinExpr(0.3));
  p.minimize(LinExpr::var(t));
  const SolveResult a = solve(p);
  const SolveResult b = solve(p);
  ASSERT_EQ(a.status, SolveStatus::kOptimal);
  EXPECT_EQ(a.status, b.status);
  EXPECT_NEAR(a.objective, b.objective, 1e-8);
}

TEST(ConicTest, RandomLinearProgramsMatchVertexEnumeration) {
  // 2-variable LPs: brute force over pairwise constraint intersections.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::array<double, 3>> cons;  // a x + b y <= c
    for (int k = 0; k < 6; ++k) cons.push_back({u(rng), u(rng), 1.0 + 0.5 * u(rng)});
    cons.push_back({1.0, 0.0, 2.0});
    cons.push_back({-1.0, 0.0, 2.0});
    cons.push_back({0.0, 1.0, 2.0});
    cons.push_back({0.0, -1.0, 2.0});
    const double cx = u(rng), cy = u(rng);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cons.size(); ++i) {
      for (std::size_t j = i + 1; j < cons.size(); ++j) {
        const double det = cons[i][0] * cons[j][1] - cons[i][1] * cons[j][0];
        if (std::abs(det) < 1e-12) continue;
        const double px = (cons[i][2] * cons[j][1] - cons[i][1] * cons[j][2]) / det;
        const double py = (cons[i][0] * cons[j][2] - cons[i][2] * cons[j][0]) / det;
        bool ok = true;
        for (const auto& c : cons) ok = ok && c[0] * px + c[1] * py <= c[2] + 1e-12;
        if (ok) best = std::min(best, cx * px + cy * py);
      }
    }
    ConicProblem p;
    const int x = p.add_variables(2);
    for (const auto& c : cons) {
      p.add_le(LinExpr::var(x, c[0]) + LinExpr::var(x + 1, c[1]), LinExpr(c[2]));
    }
    p.minimize(LinExpr::var(x, cx) + LinExpr::var(x + 1, cy));
    const SolveResult r = solve(p);
    ASSERT_EQ(r.status, SolveStatus::kOptimal) << "trial " << trial;
    EXPECT_NEAR(r.objective, best, 1e-7) << "trial " << trial;
  }
}

TEST(ConicTest, StrictlyFeasibleHintIsAccepted) {
  ConicProblem p;
  const int t = p.add_variable();
  p.add_soc(LinExpr::var(t), {LinExpr(3.0), LinExpr(4.0)});
  p.minimize(LinExpr::var(t));
  Eigen::VectorXd hint(1);
  hint << 10.0;
  const SolveResult r = solve(p, {}, &hint);
  ASSERT_EQ(r.status, SolveStatus::kOptimal);
  EXPECT_NEAR(r.x[t], 5.0, 1e-7);
}

TEST(ConicTest, IterationCapIsReported) {
  ConicProblem p;
  const int t = p.add_variable();
  p.add_soc(LinExpr::var(t), {LinExpr(1.0), LinExpr(1.0)});
  p.minimize(LinExpr::var(t));
  SolverOptions opt;
  opt.max_iterations = 1;
  EXPECT_EQ(solve(p, opt).status, SolveStatus::kIterationLimit);
}

TEST(ConicTest, RejectsBadExponentAndUnknownVariable) {
  ConicProblem p;
  const int x = p.add_variable();
  EXPECT_THROW(p.add_power(LinExpr::var(x), LinExpr(1.0), LinExpr(0.0), 1.0), Error);
  EXPECT_THROW(p.add_nonneg(LinExpr::var(x + 1)), Error);
}

TEST(ConicTest, DumpListsEveryCone) {
  ConicProblem p;
  const int x = p.add_variable();
  p.add_nonneg(LinExpr::var(x));
  p.add_cubic_epigraph(LinExpr::var(x), LinExpr(1.0));
  std::ostringstream out;
  p.write(out);
  EXPECT_NE(out.str().find("cones 2"), std::string::npos);
  EXPECT_NE(out.str().find("power"), std::string::npos);
}

}  // namespace
}  // namespace uavmpc
