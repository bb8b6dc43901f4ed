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

#include <iosfwd>

#include "uavmpc/common.hpp"
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace uavmpc {

/// Sparse affine expression sum_i coef_i * x_i + constant.
struct LinExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  LinExpr() = default;
  explicit LinExpr(double c) : constant(c) {}
  static LinExpr var(int index, double coef = 1.0);

  LinExpr& add(int index, double coef);
  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator-=(const LinExpr& o);
  LinExpr& operator*=(double s);
  LinExpr& operator+=(double c) {
    constant += c;
    return *this;
  }

  double eval(const Eigen::VectorXd& x) const;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator*(double s, LinExpr a);
LinExpr operator+(LinExpr a, double c);
LinExpr operator-(LinExpr a, double c);

enum class ConeKind {
  kNonnegative,   ///< row >= 0
  kSecondOrder,   ///< rows[0] >= ||rows[1..]||
  kPower,         ///< rows[0]^a * rows[1]^(1-a) >= |rows[2]|
};

struct Cone {
  ConeKind kind = ConeKind::kNonnegative;
  double alpha = 0.5;
  std::vector<LinExpr> rows;
};

/// Convex problem in conic form: minimise a linear objective over real
/// variables subject to affine equalities and cone memberships of affine maps.
class ConicProblem {
 public:
  int add_variable();
  /// Returns the index of the first of k new consecutive variables.
  int add_variables(int k);
  int num_variables() const { return num_vars_; }

  void minimize(LinExpr objective);
  const LinExpr& objective() const { return objective_; }

  /// e == 0
  void add_equality(LinExpr e);
  /// e >= 0
  void add_nonneg(LinExpr e);
  /// lhs <= rhs
  void add_le(const LinExpr& lhs, const LinExpr& rhs) { add_nonneg(rhs - lhs); }
  /// ||xs|| <= t
  void add_soc(LinExpr t, std::vector<LinExpr> xs);
  /// x^alpha * y^(1-alpha) >= |z|, x, y >= 0, alpha in (0, 1)
  void add_power(LinExpr x, LinExpr y, LinExpr z, double alpha);
  /// t^2 * s >= 1 with t, s >= 0, i.e. t >= s^{-1/2}
  void add_inv_sqrt_epigraph(LinExpr t, LinExpr s);
  /// q >= s^3 for s >= 0 (q >= |s|^3 in general)
  void add_cubic_epigraph(LinExpr q, LinExpr s);
  /// ||ys||^2 <= q, as a rotated second-order cone
  void add_quadratic_epigraph(LinExpr q, std::vector<LinExpr> ys);

  const std::vector<LinExpr>& equalities() const { return equalities_; }
  const std::vector<Cone>& cones() const { return cones_; }

  double objective_value(const Eigen::VectorXd& x) const { return objective_.eval(x); }

  /// Largest violation of any equality / cone at x (0 when feasible).
  double max_violation(const Eigen::VectorXd& x) const;

  /// Plain-text standard-form dump for offline cross-checking.
  void write(std::ostream& out) const;

 private:
  void check(const LinExpr& e) const;

  int num_vars_ = 0;
  LinExpr objective_;
  std::vector<LinExpr> equalities_;
  std::vector<Cone> cones_;
};

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kNumericalFailure,
  kIterationLimit,
};

const char* to_string(SolveStatus s);

struct SolverOptions {
  /// Relative optimality tolerance on the objective.
  double tolerance = 1e-8;
  /// Cap on Newton steps across both phases.
  int max_iterations = 200;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kNumericalFailure;
  /// Present (sized) only when status is kOptimal.
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
  double equality_residual = 0.0;
  double duality_gap = 0.0;
  double cone_violation = 0.0;

  bool optimal() const { return status == SolveStatus::kOptimal; }
};

/// Log-barrier interior-point solve (phase I for a strictly feasible start,
/// then path following). A strictly feasible hint skips phase I.
SolveResult solve(const ConicProblem& problem, const SolverOptions& options = {},
                  const Eigen::VectorXd* hint = nullptr);

}  // namespace uavmpc
