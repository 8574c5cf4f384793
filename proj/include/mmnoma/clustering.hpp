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

#ifndef MMNOMA_CLUSTERING_HPP_
#define MMNOMA_CLUSTERING_HPP_

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "mmnoma/types.hpp"

namespace mmnoma {

/// Raised when no further cluster head can be found before the adaptive
/// threshold saturates (collinear or duplicated channels).
class DegenerateChannels : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Largest threshold the head search may reach; 1 itself is never attained.
inline constexpr double kThresholdCeiling = 1.0 - 1e-9;

/// Users assigned to each beam. Beam g lists its head first until SIC
/// ordering is applied, after which users are sorted by effective gain.
struct GroupingPlan {
  std::vector<int> cluster_heads;
  std::vector<std::vector<int>> beams;
  double final_threshold = 0.0;
  bool sic_order_applied = false;

  int n_beams() const { return static_cast<int>(beams.size()); }
  int n_users() const;
  /// Beam index of each user id.
  std::vector<int> beam_of() const;
};

struct HeadSelection {
  std::vector<int> heads;
  double final_threshold = 0.0;
  /// Correlation comparisons plus threshold updates performed.
  std::size_t operation_count = 0;
};

/// |x^H y| / (|x| |y|), zero when either vector vanishes.
template <typename Scalar>
Scalar normalized_correlation(const ComplexVector<Scalar>& x, const ComplexVector<Scalar>& y) {
  const Scalar nx = x.norm();
  const Scalar ny = y.norm();
  if (nx == Scalar(0) || ny == Scalar(0)) return Scalar(0);
  return std::abs(x.dot(y)) / (nx * ny);
}

/**
 * Cluster-head selection with an adaptive correlation threshold.
 *
 * Users are visited in descending channel-norm order (ties to the lower
 * index). The strongest user heads beam 1. Each further head is the
 * strongest remaining candidate whose normalized correlation with every
 * selected head is below the threshold; while no candidate survives, the
 * threshold grows by (1 - delta) / 10 and the candidate set is rebuilt from
 * all unselected users.
 *
 * @throws DegenerateChannels if the threshold would pass kThresholdCeiling
 *         with no candidate left.
 */
template <typename Scalar>
HeadSelection select_cluster_heads(std::span<const ComplexVector<Scalar>> channels, int n_beams,
                                   double delta_init) {
  const int k_users = static_cast<int>(channels.size());
  if (n_beams < 1 || k_users < n_beams) {
    throw std::invalid_argument("select_cluster_heads: need K >= G >= 1");
  }
  if (!(delta_init > 0.0 && delta_init < 1.0)) {
    throw std::invalid_argument("select_cluster_heads: threshold must lie in (0, 1)");
  }

  std::vector<Scalar> norms(k_users);
  for (int k = 0; k < k_users; ++k) norms[k] = channels[k].norm();
  std::vector<int> order(k_users);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return norms[a] > norms[b]; });

  // Correlations are computed lazily and cached; each lookup counts as one
  // comparison in the operation counter.
  RealMatrix<Scalar> corr = RealMatrix<Scalar>::Constant(k_users, k_users, Scalar(-1));
  auto correlation = [&](int i, int j) {
    if (corr(i, j) < Scalar(0)) {
      corr(i, j) = corr(j, i) = normalized_correlation<Scalar>(channels[i], channels[j]);
    }
    return corr(i, j);
  };

  HeadSelection out;
  double delta = delta_init;
  std::vector<int>& heads = out.heads;
  std::vector<char> is_head(k_users, 0);
  heads.push_back(order.front());
  is_head[order.front()] = 1;

  auto below_threshold = [&](int i) {
    for (int j : heads) {
      ++out.operation_count;
      if (!(correlation(i, j) < delta)) return false;
    }
    return true;
  };
  auto filter = [&](const std::vector<int>& pool) {
    std::vector<int> kept;
    for (int i : pool) {
      if (!is_head[i] && below_threshold(i)) kept.push_back(i);
    }
    return kept;
  };

  std::vector<int> complement(order.begin() + 1, order.end());
  std::vector<int> candidates = complement;
  for (int g = 1; g < n_beams; ++g) {
    candidates = filter(candidates);
    while (candidates.empty()) {
      const double next = delta + (1.0 - delta) / 10.0;
      if (next > kThresholdCeiling) {
        throw DegenerateChannels("cluster-head threshold saturated with no candidate left");
      }
      delta = next;
      ++out.operation_count;
      candidates = filter(complement);
    }
    const int head = candidates.front();
    heads.push_back(head);
    is_head[head] = 1;
    complement.erase(std::find(complement.begin(), complement.end(), head));
  }
  out.final_threshold = delta;
  return out;
}

/**
 * Assigns every non-head user to the beam whose head has the largest
 * normalized equivalent-channel correlation with it (lowest beam index on
 * ties). Heads stay in their own beams and come first; members follow in
 * increasing user index.
 */
template <typename Scalar>
GroupingPlan group_users(std::span<const ComplexVector<Scalar>> equiv_channels,
                         std::span<const int> heads, double final_threshold = 0.0) {
  const int k_users = static_cast<int>(equiv_channels.size());
  const int n_beams = static_cast<int>(heads.size());
  GroupingPlan plan;
  plan.cluster_heads.assign(heads.begin(), heads.end());
  plan.final_threshold = final_threshold;
  plan.beams.resize(n_beams);
  std::vector<char> is_head(k_users, 0);
  for (int g = 0; g < n_beams; ++g) {
    plan.beams[g].push_back(heads[g]);
    is_head[heads[g]] = 1;
  }
  for (int m = 0; m < k_users; ++m) {
    if (is_head[m]) continue;
    int best = 0;
    Scalar best_corr = Scalar(-1);
    for (int g = 0; g < n_beams; ++g) {
      const Scalar c = normalized_correlation<Scalar>(equiv_channels[m], equiv_channels[heads[g]]);
      if (c > best_corr) {
        best_corr = c;
        best = g;
      }
    }
    plan.beams[best].push_back(m);
  }
  return plan;
}

/// One beam per user with the user as its own head (fully-digital baseline).
GroupingPlan single_user_beams(int n_users);

nlohmann::json to_json(const GroupingPlan& plan);

}  // namespace mmnoma

#endif  // MMNOMA_CLUSTERING_HPP_
