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

#include "uavmpc/conic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "uavmpc/common.hpp"

namespace uavmpc {

LinExpr LinExpr::var(int index, double coef) {
  LinExpr e;
  e.terms.emplace_back(index, coef);
  return e;
}

LinExpr& LinExpr::add(int index, double coef) {
  terms.emplace_back(index, coef);
  return *this;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  constant += o.constant;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& o) {
  for (const auto& [i, c] : o.terms) terms.emplace_back(i, -c);
  constant -= o.constant;
  return *this;
}

LinExpr& LinExpr::operator*=(double s) {
  for (auto& t : terms) t.second *= s;
  constant *= s;
  return *this;
}

double LinExpr::eval(const Eigen::VectorXd& x) const {
  double v = constant;
  for (const auto& [i, c] : terms) v += c * x[i];
  return v;
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator*(double s, LinExpr a) { return a *= s; }
LinExpr operator+(LinExpr a, double c) { return a += c; }
LinExpr operator-(LinExpr a, double c) { return a += -c; }

int ConicProblem::add_variable() { return num_vars_++; }

int ConicProblem::add_variables(int k) {
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "negative variable count");
  const int first = num_vars_;
  num_vars_ += k;
  return first;
}

void ConicProblem::check(const LinExpr& e) const {
  for (const auto& [i, c] : e.terms) {
    if (i < 0 || i >= num_vars_)
      throw Error(ErrorCode::kInvalidArgument, "expression references unknown variable");
    if (!std::isfinite(c))
      throw Error(ErrorCode::kNumerical, "non-finite coefficient in conic problem");
  }
  if (!std::isfinite(e.constant))
    throw Error(ErrorCode::kNumerical, "non-finite constant in conic problem");
}

void ConicProblem::minimize(LinExpr objective) {
  check(objective);
  objective_ = std::move(objective);
}

void ConicProblem::add_equality(LinExpr e) {
  check(e);
  equalities_.push_back(std::move(e));
}

void ConicProblem::add_nonneg(LinExpr e) {
  check(e);
  cones_.push_back(Cone{ConeKind::kNonnegative, 0.0, {std::move(e)}});
}

void ConicProblem::add_soc(LinExpr t, std::vector<LinExpr> xs) {
  Cone c{ConeKind::kSecondOrder, 0.0, {}};
  check(t);
  c.rows.push_back(std::move(t));
  for (auto& x : xs) {
    check(x);
    c.rows.push_back(std::move(x));
  }
  cones_.push_back(std::move(c));
}

void ConicProblem::add_power(LinExpr x, LinExpr y, LinExpr z, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw Error(ErrorCode::kInvalidArgument, "power cone exponent must lie in (0, 1)");
  check(x);
  check(y);
  check(z);
  cones_.push_back(Cone{ConeKind::kPower, alpha, {std::move(x), std::move(y), std::move(z)}});
}

void ConicProblem::add_inv_sqrt_epigraph(LinExpr t, LinExpr s) {
  add_power(std::move(t), std::move(s), LinExpr(1.0), 2.0 / 3.0);
}

void ConicProblem::add_cubic_epigraph(LinExpr q, LinExpr s) {
  add_power(std::move(q), LinExpr(1.0), std::move(s), 1.0 / 3.0);
}

void ConicProblem::add_quadratic_epigraph(LinExpr q, std::vector<LinExpr> ys) {
  std::vector<LinExpr> rows;
  rows.reserve(ys.size() + 1);
  for (auto& y : ys) rows.push_back(2.0 * std::move(y));
  rows.push_back(q - 1.0);
  add_soc(q + 1.0, std::move(rows));
}

double ConicProblem::max_violation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (const auto& e : equalities_) worst = std::max(worst, std::abs(e.eval(x)));
  for (const auto& c : cones_) {
    switch (c.kind) {
      case ConeKind::kNonnegative:
        worst = std::max(worst, -c.rows[0].eval(x));
        break;
      case ConeKind::kSecondOrder: {
        double sq = 0.0;
        for (std::size_t i = 1; i < c.rows.size(); ++i) {
          const double v = c.rows[i].eval(x);
          sq += v * v;
        }
        worst = std::max(worst, std::sqrt(sq) - c.rows[0].eval(x));
        break;
      }
      case ConeKind::kPower: {
        const double a = c.rows[0].eval(x);
        const double b = c.rows[1].eval(x);
        const double z = c.rows[2].eval(x);
        worst = std::max({worst, -a, -b});
        const double lhs = std::pow(std::max(a, 0.0), c.alpha) *
                           std::pow(std::max(b, 0.0), 1.0 - c.alpha);
        worst = std::max(worst, std::abs(z) - lhs);
        break;
      }
    }
  }
  return worst;
}

namespace {

void write_expr(std::ostream& out, const LinExpr& e) {
  out << e.terms.size();
  for (const auto& [i, c] : e.terms) out << ' ' << i << ':' << c;
  out << " | " << e.constant << '\n';
}

}  // namespace

void ConicProblem::write(std::ostream& out) const {
  const auto old = out.precision(17);
  out << "conic-problem v1\n";
  out << "variables " << num_vars_ << '\n';
  out << "objective ";
  write_expr(out, objective_);
  out << "equalities " << equalities_.size() << '\n';
  for (const auto& e : equalities_) write_expr(out, e);
  out << "cones " << cones_.size() << '\n';
  for (const auto& c : cones_) {
    const char* kind = c.kind == ConeKind::kNonnegative   ? "nonneg"
                       : c.kind == ConeKind::kSecondOrder ? "soc"
                                                          : "power";
    out << kind << ' ' << c.alpha << ' ' << c.rows.size() << '\n';
    for (const auto& r : c.rows) write_expr(out, r);
  }
  out.precision(old);
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kUnbounded: return "unbounded";
    case SolveStatus::kNumericalFailure: return "numerical_failure";
    case SolveStatus::kIterationLimit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

constexpr double kUnboundedNorm = 1e12;

struct Row {
  std::vector<int> idx;
  std::vector<double> val;
  double c = 0.0;

  double eval(const Eigen::VectorXd& x) const {
    double v = c;
    for (std::size_t k = 0; k < idx.size(); ++k) v += val[k] * x[idx[k]];
    return v;
  }
};

// Dense restriction of a cone block to the columns it touches.
struct Block {
  ConeKind kind = ConeKind::kSecondOrder;
  double alpha = 0.5;
  std::vector<int> cols;
  Eigen::MatrixXd g;
  Eigen::VectorXd h;
};

struct Standard {
  int n = 0;
  Eigen::VectorXd c;
  std::vector<Row> lp;
  std::vector<Block> blocks;
  double nu = 0.0;
};

Row compile(const LinExpr& e) {
  std::map<int, double> merged;
  for (const auto& [i, c] : e.terms) merged[i] += c;
  Row r;
  r.c = e.constant;
  for (const auto& [i, c] : merged) {
    if (c != 0.0) {
      r.idx.push_back(i);
      r.val.push_back(c);
    }
  }
  return r;
}

// Affine change of variables x = x0 + Z y applied to a row.
Row reduce(const Row& r, const Eigen::MatrixXd& z, const Eigen::VectorXd& x0) {
  Eigen::VectorXd coef = Eigen::VectorXd::Zero(z.cols());
  Row out;
  out.c = r.c;
  for (std::size_t k = 0; k < r.idx.size(); ++k) {
    coef += r.val[k] * z.row(r.idx[k]).transpose();
    out.c += r.val[k] * x0[r.idx[k]];
  }
  const double scale = coef.cwiseAbs().maxCoeff() * 1e-15;
  for (int j = 0; j < coef.size(); ++j) {
    if (std::abs(coef[j]) > scale) {
      out.idx.push_back(j);
      out.val.push_back(coef[j]);
    }
  }
  return out;
}

Block make_block(ConeKind kind, double alpha, const std::vector<Row>& rows) {
  Block b;
  b.kind = kind;
  b.alpha = alpha;
  for (const auto& r : rows) b.cols.insert(b.cols.end(), r.idx.begin(), r.idx.end());
  std::sort(b.cols.begin(), b.cols.end());
  b.cols.erase(std::unique(b.cols.begin(), b.cols.end()), b.cols.end());
  const int k = static_cast<int>(rows.size());
  b.g = Eigen::MatrixXd::Zero(k, static_cast<int>(b.cols.size()));
  b.h.resize(k);
  for (int a = 0; a < k; ++a) {
    b.h[a] = rows[a].c;
    for (std::size_t q = 0; q < rows[a].idx.size(); ++q) {
      const auto it = std::lower_bound(b.cols.begin(), b.cols.end(), rows[a].idx[q]);
      b.g(a, static_cast<int>(it - b.cols.begin())) += rows[a].val[q];
    }
  }
  return b;
}

double block_nu(const Block& b) {
  return b.kind == ConeKind::kSecondOrder ? 2.0 : 3.0;
}

Eigen::VectorXd gather(const Eigen::VectorXd& x, const std::vector<int>& cols) {
  Eigen::VectorXd v(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) v[i] = x[cols[i]];
  return v;
}

// Slack vector: LP rows first, then each block in order.
struct Slack {
  Eigen::VectorXd lp;
  std::vector<Eigen::VectorXd> blocks;
};

Slack slack(const Standard& s, const Eigen::VectorXd& x, bool with_constant) {
  Slack z;
  z.lp.resize(static_cast<int>(s.lp.size()));
  for (std::size_t i = 0; i < s.lp.size(); ++i) {
    z.lp[i] = with_constant ? s.lp[i].eval(x) : s.lp[i].eval(x) - s.lp[i].c;
  }
  z.blocks.reserve(s.blocks.size());
  for (const auto& b : s.blocks) {
    Eigen::VectorXd v = b.g * gather(x, b.cols);
    if (with_constant) v += b.h;
    z.blocks.push_back(std::move(v));
  }
  return z;
}

Slack axpy(const Slack& z, double a, const Slack& dz) {
  Slack out;
  out.lp = z.lp + a * dz.lp;
  out.blocks.reserve(z.blocks.size());
  for (std::size_t i = 0; i < z.blocks.size(); ++i) out.blocks.push_back(z.blocks[i] + a * dz.blocks[i]);
  return out;
}

// z0^2 - ||u||^2, factoring out the dominant component of u to limit
// cancellation when z0 is large.
double soc_psi(const Eigen::VectorXd& z) {
  const int k = static_cast<int>(z.size()) - 1;
  if (k == 0) return z[0] * z[0];
  int j = 0;
  z.tail(k).cwiseAbs().maxCoeff(&j);
  const double uj = std::abs(z[1 + j]);
  double rest = 0.0;
  for (int i = 0; i < k; ++i) {
    if (i != j) rest += z[1 + i] * z[1 + i];
  }
  return (z[0] - uj) * (z[0] + uj) - rest;
}

bool block_interior(const Block& b, const Eigen::VectorXd& z) {
  if (!z.allFinite()) return false;
  if (b.kind == ConeKind::kSecondOrder) {
    return z[0] > 0.0 && soc_psi(z) > 0.0;
  }
  if (z[0] <= 0.0 || z[1] <= 0.0) return false;
  const double lg = b.alpha * std::log(z[0]) + (1.0 - b.alpha) * std::log(z[1]);
  return lg > std::log(std::abs(z[2])) || z[2] == 0.0;
}

bool interior(const Standard& s, const Slack& z) {
  if (z.lp.size() > 0 && !(z.lp.minCoeff() > 0.0)) return false;
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    if (!block_interior(s.blocks[i], z.blocks[i])) return false;
  }
  return true;
}

double barrier_value(const Standard& s, const Slack& z) {
  double f = 0.0;
  for (int i = 0; i < z.lp.size(); ++i) f -= std::log(z.lp[i]);
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    const auto& b = s.blocks[i];
    const auto& v = z.blocks[i];
    if (b.kind == ConeKind::kSecondOrder) {
      f -= std::log(soc_psi(v));
    } else {
      const double p = std::exp(2.0 * b.alpha * std::log(v[0]) +
                                (2.0 - 2.0 * b.alpha) * std::log(v[1]));
      f -= std::log(p - v[2] * v[2]) + (1.0 - b.alpha) * std::log(v[0]) +
           b.alpha * std::log(v[1]);
    }
  }
  return f;
}

void block_derivatives(const Block& b, const Eigen::VectorXd& v, Eigen::VectorXd& g,
                       Eigen::MatrixXd& h) {
  const int k = static_cast<int>(v.size());
  if (b.kind == ConeKind::kSecondOrder) {
    const double psi = soc_psi(v);
    Eigen::VectorXd jz = -v;
    jz[0] = v[0];
    g = -2.0 * jz / psi;
    h = (4.0 / (psi * psi)) * jz * jz.transpose();
    h(0, 0) -= 2.0 / psi;
    for (int i = 1; i < k; ++i) h(i, i) += 2.0 / psi;
    return;
  }
  const double a = b.alpha;
  const double x = v[0], y = v[1], z = v[2];
  const double p = std::exp(2.0 * a * std::log(x) + (2.0 - 2.0 * a) * std::log(y));
  const double psi = p - z * z;
  Eigen::Vector3d dpsi(2.0 * a * p / x, (2.0 - 2.0 * a) * p / y, -2.0 * z);
  Eigen::Matrix3d d2;
  d2 << 2.0 * a * (2.0 * a - 1.0) * p / (x * x), 2.0 * a * (2.0 - 2.0 * a) * p / (x * y), 0.0,
      2.0 * a * (2.0 - 2.0 * a) * p / (x * y), (2.0 - 2.0 * a) * (1.0 - 2.0 * a) * p / (y * y), 0.0,
      0.0, 0.0, -2.0;
  g = -dpsi / psi;
  g[0] -= (1.0 - a) / x;
  g[1] -= a / y;
  h = -d2 / psi + dpsi * dpsi.transpose() / (psi * psi);
  h(0, 0) += (1.0 - a) / (x * x);
  h(1, 1) += a / (y * y);
}

void assemble(const Standard& s, const Slack& z, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
  grad = Eigen::VectorXd::Zero(s.n);
  hess = Eigen::MatrixXd::Zero(s.n, s.n);
  for (std::size_t i = 0; i < s.lp.size(); ++i) {
    const Row& r = s.lp[i];
    const double inv = 1.0 / z.lp[i];
    const double w = inv * inv;
    for (std::size_t a = 0; a < r.idx.size(); ++a) {
      grad[r.idx[a]] -= inv * r.val[a];
      for (std::size_t b = 0; b < r.idx.size(); ++b) {
        hess(r.idx[a], r.idx[b]) += w * r.val[a] * r.val[b];
      }
    }
  }
  Eigen::VectorXd gb;
  Eigen::MatrixXd hb;
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    const Block& b = s.blocks[i];
    const int u = static_cast<int>(b.cols.size());
    if (b.kind == ConeKind::kSecondOrder) {
      // grad = -2 G'Jz / psi, hess = 4 (G'Jz)(G'Jz)' / psi^2 + 2 G'JG / psi with
      // J = diag(-1, 1, ..., 1); contracting with G first avoids cancellation.
      const Eigen::VectorXd& v = z.blocks[i];
      const double psi = soc_psi(v);
      Eigen::VectorXd jz = -v;
      jz[0] = v[0];
      const Eigen::VectorXd w = b.g.transpose() * jz;
      Eigen::MatrixXd gj = b.g;
      gj.row(0) *= -1.0;
      const Eigen::MatrixXd hl =
          (4.0 / (psi * psi)) * w * w.transpose() + (2.0 / psi) * (b.g.transpose() * gj);
      for (int p = 0; p < u; ++p) {
        grad[b.cols[p]] -= 2.0 * w[p] / psi;
        for (int q = 0; q < u; ++q) hess(b.cols[p], b.cols[q]) += hl(p, q);
      }
      continue;
    }
    block_derivatives(b, z.blocks[i], gb, hb);
    const Eigen::VectorXd gl = b.g.transpose() * gb;
    const Eigen::MatrixXd hl = b.g.transpose() * hb * b.g;
    for (int p = 0; p < u; ++p) {
      grad[b.cols[p]] += gl[p];
      for (int q = 0; q < u; ++q) hess(b.cols[p], b.cols[q]) += hl(p, q);
    }
  }
}

bool newton_solve(Eigen::MatrixXd hess, const Eigen::VectorXd& rhs, Eigen::VectorXd& out) {
  const int n = static_cast<int>(hess.rows());
  if (n == 0) {
    out.resize(0);
    return true;
  }
  // Symmetric Jacobi scaling first: barrier Hessians span many orders of
  // magnitude and a regularizer sized to the largest entry would swamp the
  // weakly curved directions.
  Eigen::VectorXd d = hess.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd scaled = d.asDiagonal() * hess * d.asDiagonal();
  double reg = 1e-14;
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::MatrixXd m = scaled;
    m.diagonal().array() += reg;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) {
      out = d.asDiagonal() * llt.solve(d.asDiagonal() * rhs);
      if (out.allFinite()) return true;
    }
    reg *= 100.0;
  }
  return false;
}

enum class Center { kCentered, kStalled, kIterationLimit, kUnbounded, kNumerical, kEarlyStop };

struct Path {
  const Standard& s;
  int max_iterations;
  int iterations = 0;
  // Optional proximal term 0.5 sum prox_j (x_j - anchor_j)^2.
  Eigen::VectorXd prox;
  Eigen::VectorXd anchor;

  double prox_value(const Eigen::VectorXd& x) const {
    if (prox.size() == 0) return 0.0;
    return 0.5 * (prox.array() * (x - anchor).array().square()).sum();
  }

  void derivatives(const Eigen::VectorXd& x, const Slack& z, Eigen::VectorXd& grad,
                   Eigen::MatrixXd& hess) const {
    assemble(s, z, grad, hess);
    if (prox.size() > 0) {
      grad.array() += prox.array() * (x - anchor).array();
      hess.diagonal() += prox;
    }
  }

  // Newton centring of t c'x + phi(x) from a strictly interior x.
  Center center(double t, Eigen::VectorXd& x, const std::function<bool(const Eigen::VectorXd&)>& stop) {
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    Eigen::VectorXd dx;
    for (;;) {
      if (iterations >= max_iterations) return Center::kIterationLimit;
      const Slack z = slack(s, x, true);
      derivatives(x, z, grad, hess);
      const Eigen::VectorXd g = t * s.c + grad;
      if (!newton_solve(hess, -g, dx)) return Center::kNumerical;
      const double lambda2 = -g.dot(dx);
      if (!std::isfinite(lambda2)) return Center::kNumerical;
      if (lambda2 <= 2e-9) return Center::kCentered;
      ++iterations;

      const Slack dz = slack(s, dx, false);
      double step = 1.0;
      while (step > 1e-14 && !interior(s, axpy(z, step, dz))) step *= 0.5;
      if (step <= 1e-14) return Center::kStalled;
      const double lambda = std::sqrt(std::max(lambda2, 0.0));
      if (lambda >= 0.2) {
        const double f0 = barrier_value(s, z) + prox_value(x);
        const double cdx = s.c.dot(dx);
        while (step > 1e-14) {
          const double f1 = barrier_value(s, axpy(z, step, dz)) + prox_value(x + step * dx);
          if (t * step * cdx + f1 - f0 <= -0.25 * step * lambda2) break;
          step *= 0.5;
        }
        if (step <= 1e-14) return Center::kStalled;
      }
      x += step * dx;
      if (!x.allFinite()) return Center::kNumerical;
      if (x.cwiseAbs().maxCoeff() > kUnboundedNorm) return Center::kUnbounded;
      if (stop && stop(x)) return Center::kEarlyStop;
    }
  }

  double initial_t(const Eigen::VectorXd& x) const {
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    derivatives(x, slack(s, x, true), grad, hess);
    Eigen::VectorXd hc, hg;
    if (!newton_solve(hess, s.c, hc) || !newton_solve(hess, grad, hg)) return 1.0;
    const double den = s.c.dot(hc);
    const double t = -s.c.dot(hg) / den;
    if (!std::isfinite(t) || !(den > 0.0) || t <= 0.0) return 1.0;
    return std::clamp(t, 1e-8, 1e8);
  }
};

constexpr double kMu = 20.0;

// Interior offset needed to make x strictly feasible for each cone.
double required_shift(const Standard& s, const Eigen::VectorXd& x) {
  const Slack z = slack(s, x, true);
  double need = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < z.lp.size(); ++i) need = std::max(need, -z.lp[i]);
  for (std::size_t i = 0; i < s.blocks.size(); ++i) {
    const auto& v = z.blocks[i];
    if (s.blocks[i].kind == ConeKind::kSecondOrder) {
      need = std::max(need, v.tail(v.size() - 1).norm() - v[0]);
    } else {
      need = std::max(need, std::max(-v[0], -v[1]) + std::abs(v[2]));
    }
  }
  return need;
}

Standard phase_one(const Standard& s) {
  Standard a = s;
  const int sv = s.n;
  a.n = s.n + 1;
  a.c = Eigen::VectorXd::Zero(a.n);
  a.c[sv] = 1.0;
  for (auto& r : a.lp) {
    r.idx.push_back(sv);
    r.val.push_back(1.0);
  }
  for (auto& b : a.blocks) {
    b.cols.push_back(sv);
    b.g.conservativeResize(Eigen::NoChange, b.g.cols() + 1);
    b.g.col(b.g.cols() - 1).setZero();
    b.g(0, b.g.cols() - 1) = 1.0;
    if (b.kind == ConeKind::kPower) b.g(1, b.g.cols() - 1) = 1.0;
  }
  Row floor;
  floor.idx = {sv};
  floor.val = {1.0};
  floor.c = 1.0;
  a.lp.push_back(floor);
  a.nu = s.nu + 1.0;
  return a;
}

struct Outcome {
  SolveStatus status;
  Eigen::VectorXd x;
  double gap = 0.0;
};

Outcome solve_standard(const Standard& s, Eigen::VectorXd x, const SolverOptions& opt,
                       int& iterations) {
  const double shift = s.lp.empty() && s.blocks.empty() ? -1.0 : required_shift(s, x);
  if (shift >= 0.0 || !interior(s, slack(s, x, true))) {
    const Standard a = phase_one(s);
    Eigen::VectorXd xa(a.n);
    xa << x, shift + 1.0 + 0.1 * std::abs(shift);
    Path p{a, opt.max_iterations, iterations, {}, {}};
    // The relaxed barrier is unbounded below along recession directions of
    // the feasible set; the proximal pull keeps every centre well defined.
    p.anchor = xa;
    p.prox = (1e-4 / (1.0 + xa.array().square())).matrix();
    p.prox[s.n] = 0.0;
    double t = p.initial_t(xa);
    auto stop = [&](const Eigen::VectorXd& v) { return v[s.n] < 0.0; };
    bool found = false;
    for (;;) {
      const Center r = p.center(t, xa, stop);
      iterations = p.iterations;
      if (r == Center::kEarlyStop) {
        found = true;
        break;
      }
      if (r == Center::kIterationLimit) return {SolveStatus::kIterationLimit, {}};
      if (r == Center::kNumerical || r == Center::kUnbounded) return {SolveStatus::kNumericalFailure, {}};
      const double gap = a.nu / t;
      if (gap < 1e-9 * (1.0 + std::abs(xa[s.n])) || (r == Center::kStalled && gap < 1e-6)) {
        return {SolveStatus::kInfeasible, {}};
      }
      t *= kMu;
    }
    if (!found) return {SolveStatus::kInfeasible, {}};
    x = xa.head(s.n);
  }

  Path p{s, opt.max_iterations, iterations, {}, {}};
  double t = p.initial_t(x);
  int stalls = 0;
  for (;;) {
    const Center r = p.center(t, x, nullptr);
    iterations = p.iterations;
    if (r == Center::kIterationLimit) return {SolveStatus::kIterationLimit, {}};
    if (r == Center::kUnbounded) return {SolveStatus::kUnbounded, {}};
    if (r == Center::kNumerical) return {SolveStatus::kNumericalFailure, {}};
    const double gap = s.nu / t;
    const double obj = s.c.dot(x);
    if (gap <= opt.tolerance * std::max(1.0, std::abs(obj))) return {SolveStatus::kOptimal, x, gap};
    if (r == Center::kStalled) {
      if (++stalls >= 4) {
        if (gap <= 1e3 * opt.tolerance * std::max(1.0, std::abs(obj))) {
          return {SolveStatus::kOptimal, x, gap};
        }
        return {SolveStatus::kNumericalFailure, {}};
      }
    } else {
      stalls = 0;
    }
    t *= kMu;
  }
}

}  // namespace

SolveResult solve(const ConicProblem& problem, const SolverOptions& options,
                  const Eigen::VectorXd* hint) {
  if (!(options.tolerance > 0.0) || options.max_iterations <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "solver tolerance and iteration cap must be positive");
  }
  const int n = problem.num_variables();
  if (hint && hint->size() != n) throw Error(ErrorCode::kInvalidArgument, "hint has wrong dimension");

  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n);
  SolveResult result;

  if (!problem.equalities().empty()) {
    const int p = static_cast<int>(problem.equalities().size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(p, n);
    Eigen::VectorXd rhs(p);
    for (int i = 0; i < p; ++i) {
      const auto& e = problem.equalities()[i];
      for (const auto& [j, c] : e.terms) a(i, j) += c;
      rhs[i] = -e.constant;
    }
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    x0 = cod.solve(rhs);
    const double resid = (a * x0 - rhs).cwiseAbs().maxCoeff();
    if (resid > 1e-9 * std::max(1.0, rhs.cwiseAbs().maxCoeff())) {
      result.status = SolveStatus::kInfeasible;
      return result;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a.transpose());
    const int rank = static_cast<int>(qr.rank());
    const Eigen::MatrixXd q = qr.householderQ();
    z = q.rightCols(n - rank);
  }

  Standard s;
  s.n = static_cast<int>(z.cols());
  s.c = z.transpose() * [&] {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (const auto& [j, v] : problem.objective().terms) c[j] += v;
    return c;
  }();
  const bool reduced = !problem.equalities().empty();
  for (const auto& cone : problem.cones()) {
    std::vector<Row> rows;
    for (const auto& e : cone.rows) rows.push_back(reduced ? reduce(compile(e), z, x0) : compile(e));
    if (cone.kind == ConeKind::kNonnegative) {
      s.lp.push_back(std::move(rows[0]));
      s.nu += 1.0;
    } else {
      s.blocks.push_back(make_block(cone.kind, cone.alpha, rows));
      s.nu += block_nu(s.blocks.back());
    }
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(s.n);
  if (hint) y = z.transpose() * (*hint - x0);

  if (s.lp.empty() && s.blocks.empty()) {
    if (s.c.size() > 0 && s.c.cwiseAbs().maxCoeff() > 0.0) {
      result.status = SolveStatus::kUnbounded;
      return result;
    }
    result.status = SolveStatus::kOptimal;
  } else {
    int iterations = 0;
    Outcome out = solve_standard(s, y, options, iterations);
    result.iterations = iterations;
    result.status = out.status;
    if (out.status != SolveStatus::kOptimal) return result;
    y = out.x;
    result.duality_gap = out.gap;
  }
  result.x = x0 + z * y;
  result.objective = problem.objective_value(result.x);
  double eq = 0.0;
  for (const auto& e : problem.equalities()) eq = std::max(eq, std::abs(e.eval(result.x)));
  result.equality_residual = eq;
  result.cone_violation = problem.max_violation(result.x);
  return result;
}

}  // namespace uavmpc
