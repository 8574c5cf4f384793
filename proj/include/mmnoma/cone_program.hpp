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

#ifndef MMNOMA_CONE_PROGRAM_HPP_
#define MMNOMA_CONE_PROGRAM_HPP_

#include <vector>

#include <Eigen/Dense>

namespace mmnoma {

/**
 * Dense conic linear program
 *
 *     minimize    c^T x
 *     subject to  G x + s = h,   s in K,
 *
 * where K is the product of the nonnegative orthant R^l (first `n_linear`
 * rows) and second-order cones {(u0, u1) : |u1|_2 <= u0} whose sizes are
 * listed in `soc_dims`, in row order.
 */
struct ConeProgram {
  Eigen::VectorXd c;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
  int n_linear = 0;
  std::vector<int> soc_dims;

  int n_rows() const { return static_cast<int>(G.rows()); }
  int n_vars() const { return static_cast<int>(G.cols()); }
};

enum class ConeStatus { Optimal, MaxIterations, NumericalError };

struct ConeSettings {
  double feastol = 1e-9;
  double abstol = 1e-9;
  double reltol = 1e-9;
  int max_iterations = 100;
};

struct ConeSolution {
  ConeStatus status = ConeStatus::NumericalError;
  Eigen::VectorXd x;
  Eigen::VectorXd s;
  Eigen::VectorXd z;  // dual multipliers of G x + s = h
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  /// |G x + s - h| / max(1, |h|)
  double primal_residual = 0.0;
  /// |G^T z + c| / max(1, |c|)
  double dual_residual = 0.0;
  /// s^T z
  double gap = 0.0;
  int iterations = 0;
};

/// Infeasible-start primal-dual path following with Nesterov-Todd scaling
/// and a Mehrotra predictor-corrector. G must have full column rank.
ConeSolution solve_cone_program(const ConeProgram& program, const ConeSettings& settings = {});

namespace cone {

/// Cone bookkeeping shared by the solver and its tests.
class Layout {
 public:
  Layout(int n_linear, std::vector<int> soc_dims);

  int rows() const { return rows_; }
  int degree() const { return n_linear_ + static_cast<int>(soc_dims_.size()); }

  Eigen::VectorXd identity() const;
  /// Jordan product u o v.
  Eigen::VectorXd product(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  /// x solving lambda o x = r.
  Eigen::VectorXd divide(const Eigen::VectorXd& lambda, const Eigen::VectorXd& r) const;
  /// Smallest "eigenvalue" (x_i, or x0 - |x1| per cone); > 0 iff interior.
  double min_eigenvalue(const Eigen::VectorXd& x) const;
  /// Largest alpha with x + alpha d in K for interior x (infinity if none).
  double max_step(const Eigen::VectorXd& x, const Eigen::VectorXd& d) const;

  int n_linear() const { return n_linear_; }
  const std::vector<int>& soc_dims() const { return soc_dims_; }
  const std::vector<int>& soc_offsets() const { return soc_offsets_; }

 private:
  int n_linear_;
  std::vector<int> soc_dims_;
  std::vector<int> soc_offsets_;
  int rows_;
};

/// Nesterov-Todd scaling W with W z = W^{-1} s = lambda.
class NtScaling {
 public:
  NtScaling(const Layout& layout, const Eigen::VectorXd& s, const Eigen::VectorXd& z);

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& v) const;
  const Eigen::VectorXd& lambda() const { return lambda_; }

 private:
  const Layout* layout_;
  Eigen::VectorXd linear_;  // sqrt(s / z)
  std::vector<double> beta_;
  std::vector<Eigen::VectorXd> w_;
  Eigen::VectorXd lambda_;
};

}  // namespace cone

}  // namespace mmnoma

#endif  // MMNOMA_CONE_PROGRAM_HPP_
