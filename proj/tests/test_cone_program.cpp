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

#include <cmath>
#include <random>

#include <doctest.h>

#include "mmnoma/cone_program.hpp"

using mmnoma::ConeProgram;
using mmnoma::ConeStatus;
using mmnoma::solve_cone_program;
namespace cone = mmnoma::cone;

namespace {

Eigen::VectorXd random_interior(const cone::Layout& layout, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(layout.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = gauss(rng);
  v.head(layout.n_linear()) = v.head(layout.n_linear()).cwiseAbs().array() + 0.1;
  for (std::size_t i = 0; i < layout.soc_dims().size(); ++i) {
    const int off = layout.soc_offsets()[i];
    const int d = layout.soc_dims()[i];
    v(off) = v.segment(off + 1, d - 1).norm() + std::abs(gauss(rng)) + 0.1;
  }
  return v;
}

}  // namespace

TEST_CASE("Jordan division inverts the product") {
  std::mt19937_64 rng(7);
  const cone::Layout layout(3, {3, 4});
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd lambda = random_interior(layout, rng);
    const Eigen::VectorXd x = random_interior(layout, rng) - random_interior(layout, rng);
    const Eigen::VectorXd r = layout.product(lambda, x);
    CHECK((layout.divide(lambda, r) - x).norm() <= 1e-10 * (1.0 + x.norm()));
  }
}

TEST_CASE("NT scaling maps z and s to the same point") {
  std::mt19937_64 rng(11);
  const cone::Layout layout(2, {3, 5});
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd s = random_interior(layout, rng);
    const Eigen::VectorXd z = random_interior(layout, rng);
    const cone::NtScaling w(layout, s, z);
    CHECK((w.apply(z) - w.apply_inverse(s)).norm() <= 1e-10 * (1.0 + s.norm()));
    const Eigen::VectorXd v = s - z;
    CHECK((w.apply_inverse(w.apply(v)) - v).norm() <= 1e-10 * (1.0 + v.norm()));
    CHECK(layout.min_eigenvalue(w.lambda()) > 0.0);
  }
}

TEST_CASE("max_step lands on the cone boundary") {
  std::mt19937_64 rng(5);
  const cone::Layout layout(1, {3});
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd x = random_interior(layout, rng);
    const Eigen::VectorXd d = -random_interior(layout, rng) * 3.0;
    const double alpha = layout.max_step(x, d);
    REQUIRE(std::isfinite(alpha));
    CHECK(std::abs(layout.min_eigenvalue(x + alpha * d)) <= 1e-9);
    CHECK(layout.min_eigenvalue(x + 0.999 * alpha * d) > 0.0);
  }
  const Eigen::VectorXd x = Eigen::Vector4d(1.0, 2.0, 0.0, 0.0);
  CHECK(std::isinf(layout.max_step(x, Eigen::Vector4d(0.0, 1.0, 0.1, 0.1))));
}

TEST_CASE("two-variable LP vertex") {
  // max x1 + x2 s.t. x1 + 2 x2 <= 4, 3 x1 + x2 <= 6, x >= 0 -> (8/5, 6/5).
  ConeProgram lp;
  lp.c = Eigen::Vector2d(-1.0, -1.0);
  lp.G.resize(4, 2);
  lp.G << 1, 2, 3, 1, -1, 0, 0, -1;
  lp.h = Eigen::Vector4d(4, 6, 0, 0);
  lp.n_linear = 4;
  const auto sol = solve_cone_program(lp);
  REQUIRE(sol.status == ConeStatus::Optimal);
  CHECK(sol.x(0) == doctest::Approx(1.6).epsilon(1e-7));
  CHECK(sol.x(1) == doctest::Approx(1.2).epsilon(1e-7));
  CHECK(sol.primal_objective == doctest::Approx(-2.8).epsilon(1e-8));
}

TEST_CASE("linear objective over the unit disc") {
  ConeProgram p;
  p.c = Eigen::Vector2d(1.0, 1.0);
  p.G = Eigen::MatrixXd::Zero(3, 2);
  p.G(1, 0) = -1.0;
  p.G(2, 1) = -1.0;
  p.h = Eigen::Vector3d(1.0, 0.0, 0.0);
  p.soc_dims = {3};
  const auto sol = solve_cone_program(p);
  REQUIRE(sol.status == ConeStatus::Optimal);
  CHECK(sol.x(0) == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-7));
  CHECK(sol.x(1) == doctest::Approx(-std::sqrt(0.5)).epsilon(1e-7));
}

TEST_CASE("rotated cone q^2 <= p") {
  // min p - q over q^2 <= p: q = 1/2, p = 1/4.
  ConeProgram p;
  p.c = Eigen::Vector2d(1.0, -1.0);
  p.G.resize(3, 2);
  p.G << -1, 0, 0, -2, -1, 0;
  p.h = Eigen::Vector3d(1.0, 0.0, -1.0);
  p.soc_dims = {3};
  const auto sol = solve_cone_program(p);
  REQUIRE(sol.status == ConeStatus::Optimal);
  // Curved optimum: x is only accurate to about sqrt(gap).
  CHECK(sol.x(0) == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(sol.x(1) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(sol.primal_objective == doctest::Approx(-0.25).epsilon(1e-8));
  CHECK(std::abs(sol.s.dot(sol.z)) <= 1e-8);
}

TEST_CASE("mixed program matches its KKT conditions") {
  // Random bounded programs: box rows keep them feasible and bounded.
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 4;
    ConeProgram p;
    p.c.resize(n);
    for (int i = 0; i < n; ++i) p.c(i) = gauss(rng);
    p.n_linear = 2 * n;
    p.soc_dims = {3, 3};
    p.G = Eigen::MatrixXd::Zero(2 * n + 6, n);
    p.h = Eigen::VectorXd::Zero(2 * n + 6);
    for (int i = 0; i < n; ++i) {
      p.G(i, i) = 1.0;
      p.h(i) = 2.0;
      p.G(n + i, i) = -1.0;
      p.h(n + i) = 2.0;
    }
    for (int r = 2 * n; r < 2 * n + 6; ++r) {
      for (int j = 0; j < n; ++j) p.G(r, j) = gauss(rng);
    }
    p.h(2 * n) = 10.0;
    p.h(2 * n + 3) = 10.0;
    const auto sol = solve_cone_program(p);
    REQUIRE(sol.status == ConeStatus::Optimal);
    CHECK((p.G.transpose() * sol.z + p.c).norm() <= 1e-8);
    CHECK((p.G * sol.x + sol.s - p.h).norm() <= 1e-8 * p.h.norm());
    CHECK(sol.s.dot(sol.z) <= 1e-8);
    const cone::Layout layout(p.n_linear, p.soc_dims);
    CHECK(layout.min_eigenvalue(sol.s) >= -1e-12);
    CHECK(layout.min_eigenvalue(sol.z) >= -1e-12);
  }
}
