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

#ifndef MMNOMA_TESTS_SUPPORT_HPP_
#define MMNOMA_TESTS_SUPPORT_HPP_

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "mmnoma/link_metrics.hpp"

namespace mmnoma::testing {

inline Eigen::VectorXcd random_complex(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = {gauss(rng), gauss(rng)};
  return v;
}

inline Eigen::MatrixXcd random_complex(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) m.col(c) = random_complex(rows, rng);
  return m;
}

inline GroupingPlan plan_of(std::vector<std::vector<int>> beams) {
  GroupingPlan plan;
  plan.beams = std::move(beams);
  for (const auto& b : plan.beams) plan.cluster_heads.push_back(b.front());
  plan.sic_order_applied = true;
  return plan;
}

/// Random link with users 0..K-1 filled into beams of the given sizes; each
/// beam is SIC-ordered by construction (decreasing own-beam gain).
inline LinkModel random_link(std::mt19937_64& rng, const std::vector<int>& sizes,
                             MultipleAccess access, double sigma_v, double sigma_u) {
  std::vector<std::vector<int>> beams;
  int k = 0;
  for (int s : sizes) {
    beams.emplace_back();
    for (int i = 0; i < s; ++i) beams.back().push_back(k++);
  }
  const int n_beams = static_cast<int>(sizes.size());
  Eigen::MatrixXcd r = 0.3 * random_complex(k, n_beams, rng);
  for (int g = 0; g < n_beams; ++g) {
    for (std::size_t m = 0; m < beams[g].size(); ++m) r(beams[g][m], g) *= 4.0 / (1.0 + m);
  }
  SystemConfig c = default_config();
  c.noise_var = sigma_v;
  c.splitter_noise_var = sigma_u;
  c.multiple_access = access;
  return make_link_model(r, plan_of(beams), c);
}

}  // namespace mmnoma::testing

#endif  // MMNOMA_TESTS_SUPPORT_HPP_
