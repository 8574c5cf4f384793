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

#ifndef MMNOMA_LINK_METRICS_HPP_
#define MMNOMA_LINK_METRICS_HPP_

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mmnoma/clustering.hpp"
#include "mmnoma/config.hpp"
#include "mmnoma/precoding.hpp"

namespace mmnoma {

/// Circuit power figures used in the energy-efficiency denominator (watts).
struct CircuitPower {
  double rf_chain = 0.300;
  double phase_shifter = 0.040;
  double baseband = 0.200;
};

/// Per-user optimization variables, indexed by user id.
struct PowerSolution {
  Eigen::VectorXd p;     // transmit power
  Eigen::VectorXd beta;  // power-splitting factor, share sent to decoding
  Eigen::VectorXd tau;   // epigraph of 1/beta
  Eigen::VectorXd mu;    // epigraph of P_min / (eta (1 - beta))
  Eigen::VectorXcd c;    // MMSE equalizers
  Eigen::VectorXd a;     // MSE weights
  std::vector<double> objective_trace;

  static PowerSolution uniform(int n_users, double power, double beta);
};

struct TrialMetrics {
  Eigen::VectorXd per_user_rate;
  Eigen::VectorXd per_user_eh;
  double sum_rate = 0.0;
  double energy_efficiency = 0.0;
  bool feasible = false;
};

/**
 * Everything the rate and harvesting formulas need about one trial: the
 * effective responses h_bar_k^H d_i for all users and beams, the SIC-ordered
 * beams, and the noise figures.
 */
struct LinkModel {
  Eigen::MatrixXcd response;  // K x G
  std::vector<std::vector<int>> beams;
  std::vector<int> beam_of;
  std::vector<int> position_of;
  double noise_var = 0.0;
  double splitter_noise_var = 0.0;
  double eh_efficiency = 0.0;
  MultipleAccess access = MultipleAccess::Noma;

  int n_users() const { return static_cast<int>(response.rows()); }
  int n_beams() const { return static_cast<int>(beams.size()); }
  int beam_size(int g) const { return static_cast<int>(beams[g].size()); }
  /// |h_bar_k^H d_i|^2
  double gain(int k, int i) const { return std::norm(response(k, i)); }
  /// Share of the band a user of beam g occupies (1 under NOMA).
  double bandwidth_share(int g) const;
};

LinkModel make_link_model(const Eigen::MatrixXcd& response, const GroupingPlan& plan,
                          const SystemConfig& config);
LinkModel make_link_model(const HybridPrecoder<double>& precoder, const GroupingPlan& plan,
                          const SystemConfig& config);

/// Total power of beam g.
double beam_power(const LinkModel& model, const PowerSolution& sol, int g);

/// Interference-plus-noise xi of user m (0-based SIC position) in beam g:
/// stronger intra-beam users, every other beam, antenna noise and splitter
/// noise sigma_u^2 / beta.
double interference_term(const LinkModel& model, const PowerSolution& sol, int g, int m);

/// OMA counterpart: no intra-beam term and antenna noise scaled by the
/// bandwidth share 1/|S_g|.
double oma_interference_term(const LinkModel& model, const PowerSolution& sol, int g, int m);

/// SINR under the model's multiple-access scheme.
double sinr(const LinkModel& model, const PowerSolution& sol, int g, int m);

double noma_rate(const LinkModel& model, const PowerSolution& sol, int g, int m);
double oma_rate(const LinkModel& model, const PowerSolution& sol, int g, int m);
double user_rate(const LinkModel& model, const PowerSolution& sol, int g, int m);

/// eta (1 - beta) (sum_i |h_bar^H d_i|^2 P_i + sigma_v^2)
double harvested_energy(const LinkModel& model, const PowerSolution& sol, int g, int m);

double sum_rate(std::span<const double> rates);

/// R_sum / (P_tr + N_RF P_RF + N_PS P_PS + P_BB).
double energy_efficiency(double total_rate, const PowerSolution& sol, const SystemConfig& config,
                         const CircuitPower& circuit = {});

/// Rates, harvested power, sum rate and EE of a solution. `feasible` is left
/// false; the optimizer decides feasibility.
TrialMetrics evaluate_metrics(const LinkModel& model, const PowerSolution& sol,
                              const SystemConfig& config);

}  // namespace mmnoma

#endif  // MMNOMA_LINK_METRICS_HPP_
