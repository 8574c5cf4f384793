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

#ifndef MMNOMA_JOINT_OPTIMIZER_HPP_
#define MMNOMA_JOINT_OPTIMIZER_HPP_

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "mmnoma/channel.hpp"
#include "mmnoma/config.hpp"
#include "mmnoma/link_metrics.hpp"

namespace mmnoma {

/// Lower and upper margin kept between beta and the ends of (0, 1).
inline constexpr double kBetaMargin = 1e-6;

/**
 * One convex power/splitting subproblem: the link (gains, ordering, noise,
 * access scheme) plus the auxiliaries c and a frozen for this iteration.
 */
struct SubproblemSpec {
  LinkModel link;
  Eigen::VectorXcd c;
  Eigen::VectorXd a;
  Eigen::VectorXd rate_min;  // R_min per user
  Eigen::VectorXd eh_min;    // P_min per user (watts)
  double budget = 0.0;       // P_t
  double tolerance = 1e-8;

  int n_users() const { return link.n_users(); }
};

/// 2^{R_min} - 1 under NOMA; 2^{|S_g| R_min} - 1 under OMA, where the rate
/// carries the 1/|S_g| bandwidth share.
double qos_omega(const LinkModel& link, int user, double rate_min);

enum class SolveStatus { Optimal, Infeasible, NumericalFailure };
std::string_view to_string(SolveStatus status);

struct KktResiduals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double complementarity = 0.0;  // max over cone blocks of |s_i^T z_i|
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::NumericalFailure;
  PowerSolution solution;
  double subproblem_objective = 0.0;
  KktResiduals kkt;
  /// Optimal phase-1 relaxation; > tolerance means Infeasible.
  double phase1_violation = 0.0;
};

/// Equalizer c from the previous iterate (closed form MMSE coefficient).
Eigen::VectorXcd update_c(const LinkModel& link, const PowerSolution& previous);

/// MMSE e of each user at its optimal equalizer, i.e. 1 / (1 + SINR).
Eigen::VectorXd mmse(const LinkModel& link, const PowerSolution& previous);

/// MSE weights a = 1 / e.
Eigen::VectorXd update_a(const LinkModel& link, const PowerSolution& previous);

/// Sum over users of w * a * e_tilde at (p, tau), with w = 1 under NOMA and
/// 1/|S_g| under OMA.
double subproblem_objective(const SubproblemSpec& spec, const Eigen::VectorXd& p,
                            const Eigen::VectorXd& tau);

/// Solves the convex subproblem with a phase-1 feasibility check followed by
/// the weighted-MSE minimization.
SolveOutcome solve_power_subproblem(const SubproblemSpec& spec);

struct IterationRecord {
  int iteration = 0;
  double sum_rate = 0.0;
  double min_rate_slack = 0.0;  // min_k (R_k - R_min_k)
  double min_eh_slack = 0.0;    // min_k (P_EH_k - P_min_k)
};

struct OptimizationResult {
  SolveStatus status = SolveStatus::NumericalFailure;
  PowerSolution solution;
  TrialMetrics metrics;
  std::vector<IterationRecord> trace;
  int failed_iteration = 0;  // 1-based; 0 when every iteration succeeded
};

/// Alternates the closed-form c/a updates with the convex subproblem for
/// exactly config.max_iterations rounds, starting from P_t/K and beta 0.5.
OptimizationResult joint_optimize(const LinkModel& link, const SystemConfig& config,
                                  const Eigen::VectorXd& rate_min);
OptimizationResult joint_optimize(const HybridPrecoder<double>& precoder, const GroupingPlan& plan,
                                  const SystemConfig& config, const Eigen::VectorXd& rate_min);

/// Per-user R_min under config.rate_min_policy. The fraction policy runs
/// fully digital ZF with equal power and beta = 0.5 on `channels` and scales
/// the smallest resulting rate.
Eigen::VectorXd compute_rate_floor(const SystemConfig& config, const ChannelSet<double>& channels);

/// CSV with columns iteration,sum_rate,min_rate_slack,min_eh_slack.
void write_trace_csv(std::span<const IterationRecord> trace, const std::filesystem::path& path);

}  // namespace mmnoma

#endif  // MMNOMA_JOINT_OPTIMIZER_HPP_
