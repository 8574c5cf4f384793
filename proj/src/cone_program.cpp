// SPDX-License-Identifier: Apache-2.0
//
// mmnoma: hybrid-precoding mmWave MIMO-NOMA link simulator with SWIPT
// Copyright (C) 2026 The mmnoma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mmnoma/cone_program.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mmnoma {
namespace cone {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// u0^2 - |u1|^2, factored to limit cancellation near the boundary.
double hyperbolic_norm_sq(const Eigen::Ref<const Eigen::VectorXd>& u) {
  const double tail = u.tail(u.size() - 1).norm();
  return (u(0) - tail) * (u(0) + tail);
}

}  // namespace

Layout::Layout(int n_linear, std::vector<int> soc_dims)
    : n_linear_(n_linear), soc_dims_(std::move(soc_dims)) {
  int offset = n_linear_;
  for (int d : soc_dims_) {
    if (d < 1) throw std::invalid_argument("cone::Layout: empty second-order cone");
    soc_offsets_.push_back(offset);
    offset += d;
  }
  rows_ = offset;
}

Eigen::VectorXd Layout::identity() const {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(rows_);
  e.head(n_linear_).setOnes();
  for (int off : soc_offsets_) e(off) = 1.0;
  return e;
}

Eigen::VectorXd Layout::product(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(rows_);
  out.head(n_linear_) = u.head(n_linear_).cwiseProduct(v.head(n_linear_));
  for (std::size_t i = 0; i < soc_dims_.size(); ++i) {
    const int off = soc_offsets_[i];
    const int d = soc_dims_[i];
    const auto ub = u.segment(off, d);
    const auto vb = v.segment(off, d);
    out(off) = ub.dot(vb);
    out.segment(off + 1, d - 1) = ub(0) * vb.tail(d - 1) + vb(0) * ub.tail(d - 1);
  }
  return out;
}

Eigen::VectorXd Layout::divide(const Eigen::VectorXd& lambda, const Eigen::VectorXd& r) const {
  Eigen::VectorXd out(rows_);
  out.head(n_linear_) = r.head(n_linear_).cwiseQuotient(lambda.head(n_linear_));
  for (std::size_t i = 0; i < soc_dims_.size(); ++i) {
    const int off = soc_offsets_[i];
    const int d = soc_dims_[i];
    const auto l = lambda.segment(off, d);
    const auto rb = r.segment(off, d);
    const double det = hyperbolic_norm_sq(l);
    const double x0 = (l(0) * rb(0) - l.tail(d - 1).dot(rb.tail(d - 1))) / det;
    out(off) = x0;
    out.segment(off + 1, d - 1) = (rb.tail(d - 1) - x0 * l.tail(d - 1)) / l(0);
  }
  return out;
}

double Layout::min_eigenvalue(const Eigen::VectorXd& x) const {
  double lo = kInf;
  if (n_linear_ > 0) lo = x.head(n_linear_).minCoeff();
  for (std::size_t i = 0; i < soc_dims_.size(); ++i) {
    const auto b = x.segment(soc_offsets_[i], soc_dims_[i]);
    lo = std::min(lo, b(0) - b.tail(b.size() - 1).norm());
  }
  return lo;
}

double Layout::max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& d) const {
  double alpha = kInf;
  for (int i = 0; i < n_linear_; ++i) {
    if (d(i) < 0.0) alpha = std::min(alpha, -x(i) / d(i));
  }
  for (std::size_t i = 0; i < soc_dims_.size(); ++i) {
    const int off = soc_offsets_[i];
    const int dim = soc_dims_[i];
    const auto xb = x.segment(off, dim);
    const auto db = d.segment(off, dim);
    // Exit point: first positive root of |x0 + a d0|^2 - |x1 + a d1|^2 = 0.
    const double qa = hyperbolic_norm_sq(db);
    const double qb = 2.0 * (xb(0) * db(0) - xb.tail(dim - 1).dot(db.tail(dim - 1)));
    const double qc = hyperbolic_norm_sq(xb);
    double root = kInf;
    if (qa == 0.0) {
      if (qb < 0.0) root = -qc / qb;
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double t = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
        for (double r : {t / qa, t != 0.0 ? qc / t : kInf}) {
          if (r > 0.0) root = std::min(root, r);
        }
      }
    }
    // A direction that shrinks x0 to zero also leaves the cone.
    if (db(0) < 0.0) root = std::min(root, -xb(0) / db(0));
    alpha = std::min(alpha, root);
  }
  return alpha;
}

NtScaling::NtScaling(const Layout& layout, const Eigen::VectorXd& s, const Eigen::VectorXd& z)
    : layout_(&layout) {
  const int l = layout.n_linear();
  linear_ = (s.head(l).array() / z.head(l).array()).sqrt().matrix();
  const auto& dims = layout.soc_dims();
  const auto& offs = layout.soc_offsets();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const auto sb = s.segment(offs[i], dims[i]);
    const auto zb = z.segment(offs[i], dims[i]);
    const double s_norm = std::sqrt(hyperbolic_norm_sq(sb));
    const double z_norm = std::sqrt(hyperbolic_norm_sq(zb));
    const Eigen::VectorXd s_bar = sb / s_norm;
    const Eigen::VectorXd z_bar = zb / z_norm;
    const double gamma = std::sqrt(0.5 * (1.0 + s_bar.dot(z_bar)));
    Eigen::VectorXd w(dims[i]);
    w(0) = s_bar(0) + z_bar(0);
    w.tail(dims[i] - 1) = s_bar.tail(dims[i] - 1) - z_bar.tail(dims[i] - 1);
    w /= 2.0 * gamma;
    beta_.push_back(std::sqrt(s_norm / z_norm));
    w_.push_back(std::move(w));
  }
  lambda_ = apply(z);
}

Eigen::VectorXd NtScaling::apply(const Eigen::VectorXd& v) const {
  const int l = layout_->n_linear();
  Eigen::VectorXd out(v.size());
  out.head(l) = linear_.cwiseProduct(v.head(l));
  const auto& dims = layout_->soc_dims();
  const auto& offs = layout_->soc_offsets();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int d = dims[i];
    const auto vb = v.segment(offs[i], d);
    const auto& w = w_[i];
    const double w1v1 = w.tail(d - 1).dot(vb.tail(d - 1));
    out(offs[i]) = beta_[i] * (w(0) * vb(0) + w1v1);
    out.segment(offs[i] + 1, d - 1) =
        beta_[i] * (vb.tail(d - 1) + (w1v1 / (1.0 + w(0)) + vb(0)) * w.tail(d - 1));
  }
  return out;
}

Eigen::VectorXd NtScaling::apply_inverse(const Eigen::VectorXd& v) const {
  const int l = layout_->n_linear();
  Eigen::VectorXd out(v.size());
  out.head(l) = v.head(l).cwiseQuotient(linear_);
  const auto& dims = layout_->soc_dims();
  const auto& offs = layout_->soc_offsets();
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const int d = dims[i];
    const auto vb = v.segment(offs[i], d);
    const auto& w = w_[i];
    const double w1v1 = w.tail(d - 1).dot(vb.tail(d - 1));
    out(offs[i]) = (w(0) * vb(0) - w1v1) / beta_[i];
    out.segment(offs[i] + 1, d - 1) =
        (vb.tail(d - 1) + (w1v1 / (1.0 + w(0)) - vb(0)) * w.tail(d - 1)) / beta_[i];
  }
  return out;
}

}  // namespace cone

namespace {

/// Solves (B^T B) x = rhs through a column-pivoted QR factor of B D, where
/// D equilibrates the column norms. Near the cone boundary the scaled
/// columns span many orders of magnitude and an unequilibrated rank test
/// reports spurious deficiency.
class NormalSolver {
 public:
  explicit NormalSolver(const Eigen::MatrixXd& b)
      : b_(b), d_(column_scale(b)), qr_(b * d_.asDiagonal()) {}

  bool full_rank() const { return qr_.rank() == b_.cols(); }

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = once(rhs);
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd residual = rhs - b_.transpose() * (b_ * x);
      x += once(residual);
    }
    return x;
  }

 private:
  static Eigen::VectorXd column_scale(const Eigen::MatrixXd& b) {
    Eigen::VectorXd d(b.cols());
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      const double n = b.col(j).norm();
      d(j) = n > 0.0 ? 1.0 / n : 1.0;
    }
    return d;
  }

  Eigen::VectorXd once(const Eigen::VectorXd& rhs) const {
    const Eigen::Index n = b_.cols();
    const auto r = qr_.matrixR().topLeftCorner(n, n).template triangularView<Eigen::Upper>();
    Eigen::VectorXd y = qr_.colsPermutation().transpose() * d_.cwiseProduct(rhs);
    r.transpose().solveInPlace(y);
    r.solveInPlace(y);
    return d_.cwiseProduct(qr_.colsPermutation() * y);
  }

  Eigen::MatrixXd b_;
  Eigen::VectorXd d_;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_;
};

struct Direction {
  Eigen::VectorXd dx;
  Eigen::VectorXd ds;  // scaled: W^{-1} delta_s
  Eigen::VectorXd dz;  // scaled: W delta_z
};

}  // namespace

ConeSolution solve_cone_program(const ConeProgram& prog, const ConeSettings& settings) {
  const cone::Layout layout(prog.n_linear, prog.soc_dims);
  if (layout.rows() != prog.n_rows() || prog.h.size() != prog.n_rows() ||
      prog.c.size() != prog.n_vars()) {
    throw std::invalid_argument("solve_cone_program: inconsistent dimensions");
  }
  const Eigen::MatrixXd& G = prog.G;
  const Eigen::VectorXd& c = prog.c;
  const Eigen::VectorXd& h = prog.h;
  const Eigen::VectorXd e = layout.identity();
  const double degree = layout.degree();
  const double h_scale = std::max(1.0, h.norm());
  const double c_scale = std::max(1.0, c.norm());

  ConeSolution out;

  // Least-squares primal point and least-norm dual point, shifted into K.
  {
    NormalSolver initial(G);
    if (!initial.full_rank()) throw std::invalid_argument("solve_cone_program: G rank deficient");
    out.x = initial.solve(G.transpose() * h);
    out.s = h - G * out.x;
    out.z = -G * initial.solve(c);
    auto shift = [&](Eigen::VectorXd& v) {
      const double t = -layout.min_eigenvalue(v);
      if (t >= -1e-8 * std::max(v.norm(), 1.0)) v += (1.0 + t) * e;
    };
    shift(out.s);
    shift(out.z);
  }

  for (int it = 0; it <= settings.max_iterations; ++it) {
    out.iterations = it;
    const Eigen::VectorXd rx = G.transpose() * out.z + c;
    const Eigen::VectorXd rz = G * out.x + out.s - h;
    out.gap = out.s.dot(out.z);
    out.primal_objective = c.dot(out.x);
    out.dual_objective = -h.dot(out.z);
    out.primal_residual = rz.norm() / h_scale;
    out.dual_residual = rx.norm() / c_scale;
    if (!std::isfinite(out.gap) || !std::isfinite(out.primal_residual) ||
        !std::isfinite(out.dual_residual)) {
      out.status = ConeStatus::NumericalError;
      return out;
    }
    const double objective_scale =
        std::max(std::abs(out.primal_objective), std::abs(out.dual_objective));
    const bool gap_ok = out.gap <= settings.abstol ||
                        (objective_scale > 0.0 && out.gap <= settings.reltol * objective_scale);
    if (out.primal_residual <= settings.feastol && out.dual_residual <= settings.feastol &&
        gap_ok) {
      out.status = ConeStatus::Optimal;
      return out;
    }
    if (it == settings.max_iterations) break;

    const cone::NtScaling W(layout, out.s, out.z);
    const Eigen::VectorXd& lambda = W.lambda();
    Eigen::MatrixXd g_hat(G.rows(), G.cols());
    for (Eigen::Index j = 0; j < G.cols(); ++j) g_hat.col(j) = W.apply_inverse(G.col(j));
    const NormalSolver normal(g_hat);
    if (!normal.full_rank()) {
      out.status = ConeStatus::NumericalError;
      return out;
    }
    const Eigen::VectorXd w_inv_rz = W.apply_inverse(-rz);

    // Newton system with right-hand sides (-rx, -rz, rc) in scaled form.
    auto solve = [&](const Eigen::VectorXd& rc) {
      Direction d;
      const Eigen::VectorXd u = layout.divide(lambda, rc);
      d.dx = normal.solve(-rx - g_hat.transpose() * (u - w_inv_rz));
      d.dz = g_hat * d.dx + u - w_inv_rz;
      d.ds = u - d.dz;
      return d;
    };
    auto step_to_boundary = [&](const Direction& d) {
      return std::min(layout.max_step(lambda, d.ds), layout.max_step(lambda, d.dz));
    };

    const double mu = out.gap / degree;
    const Eigen::VectorXd lambda_sq = layout.product(lambda, lambda);
    const Direction affine = solve(-lambda_sq);
    const double alpha_aff = std::min(1.0, step_to_boundary(affine));
    const double mu_aff =
        (lambda + alpha_aff * affine.ds).dot(lambda + alpha_aff * affine.dz) / degree;
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

    const Eigen::VectorXd rc =
        -lambda_sq - layout.product(affine.ds, affine.dz) + sigma * mu * e;
    const Direction step = solve(rc);
    double alpha = std::min(1.0, 0.99 * step_to_boundary(step));
    // Unscaled updates keep G x + s - h exactly linear in alpha; rounding in
    // W near the boundary can still push a point out, hence the backtrack.
    const Eigen::VectorXd delta_s = -rz - G * step.dx;
    const Eigen::VectorXd delta_z = W.apply_inverse(step.dz);
    Eigen::VectorXd s_next, z_next;
    for (int back = 0;; ++back) {
      s_next = out.s + alpha * delta_s;
      z_next = out.z + alpha * delta_z;
      if (layout.min_eigenvalue(s_next) > 0.0 && layout.min_eigenvalue(z_next) > 0.0) break;
      alpha *= 0.5;
      if (back == 40) alpha = 0.0;
      if (!(alpha > 1e-12)) {
        out.status = ConeStatus::NumericalError;
        return out;
      }
    }
    out.x += alpha * step.dx;
    out.s = std::move(s_next);
    out.z = std::move(z_next);
  }
  out.status = ConeStatus::MaxIterations;
  return out;
}

}  // namespace mmnoma
