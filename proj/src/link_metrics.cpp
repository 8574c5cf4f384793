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

#include "mmnoma/link_metrics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mmnoma {

PowerSolution PowerSolution::uniform(int n_users, double power, double beta) {
  PowerSolution s;
  s.p = Eigen::VectorXd::Constant(n_users, power);
  s.beta = Eigen::VectorXd::Constant(n_users, beta);
  s.tau = s.beta.cwiseInverse();
  s.mu = Eigen::VectorXd::Zero(n_users);
  s.c = Eigen::VectorXcd::Zero(n_users);
  s.a = Eigen::VectorXd::Ones(n_users);
  return s;
}

double LinkModel::bandwidth_share(int g) const {
  return access == MultipleAccess::Oma ? 1.0 / beam_size(g) : 1.0;
}

LinkModel make_link_model(const Eigen::MatrixXcd& response, const GroupingPlan& plan,
                          const SystemConfig& config) {
  LinkModel model;
  model.response = response;
  model.beams = plan.beams;
  model.beam_of.assign(response.rows(), -1);
  model.position_of.assign(response.rows(), -1);
  for (int g = 0; g < plan.n_beams(); ++g) {
    for (int m = 0; m < static_cast<int>(plan.beams[g].size()); ++m) {
      const int k = plan.beams[g][m];
      model.beam_of.at(k) = g;
      model.position_of.at(k) = m;
    }
  }
  for (int b : model.beam_of) {
    if (b < 0) throw std::invalid_argument("make_link_model: plan does not cover every user");
  }
  if (response.cols() != plan.n_beams()) {
    throw std::invalid_argument("make_link_model: one response column per beam required");
  }
  model.noise_var = config.noise_var;
  model.splitter_noise_var = config.splitter_noise_var;
  model.eh_efficiency = config.eh_efficiency;
  model.access = config.multiple_access;
  return model;
}

LinkModel make_link_model(const HybridPrecoder<double>& precoder, const GroupingPlan& plan,
                          const SystemConfig& config) {
  const int k_users = static_cast<int>(precoder.equiv_channels.size());
  const int n_beams = static_cast<int>(precoder.digital.size());
  Eigen::MatrixXcd response(k_users, n_beams);
  for (int k = 0; k < k_users; ++k) {
    for (int i = 0; i < n_beams; ++i) {
      response(k, i) = precoder.equiv_channels[k].dot(precoder.digital[i]);
    }
  }
  return make_link_model(response, plan, config);
}

double beam_power(const LinkModel& model, const PowerSolution& sol, int g) {
  double total = 0.0;
  for (int k : model.beams[g]) total += sol.p(k);
  return total;
}

namespace {

double inter_beam(const LinkModel& model, const PowerSolution& sol, int k, int g) {
  double total = 0.0;
  for (int i = 0; i < model.n_beams(); ++i) {
    if (i != g) total += model.gain(k, i) * beam_power(model, sol, i);
  }
  return total;
}

}  // namespace

double interference_term(const LinkModel& model, const PowerSolution& sol, int g, int m) {
  const auto& beam = model.beams[g];
  const int k = beam[m];
  double stronger = 0.0;
  for (int j = 0; j < m; ++j) stronger += sol.p(beam[j]);
  return model.gain(k, g) * stronger + inter_beam(model, sol, k, g) + model.noise_var +
         model.splitter_noise_var / sol.beta(k);
}

double oma_interference_term(const LinkModel& model, const PowerSolution& sol, int g, int m) {
  const int k = model.beams[g][m];
  const double share = 1.0 / model.beam_size(g);
  return inter_beam(model, sol, k, g) + share * model.noise_var +
         model.splitter_noise_var / sol.beta(k);
}

double sinr(const LinkModel& model, const PowerSolution& sol, int g, int m) {
  const int k = model.beams[g][m];
  const double xi = model.access == MultipleAccess::Oma ? oma_interference_term(model, sol, g, m)
                                                        : interference_term(model, sol, g, m);
  return model.gain(k, g) * sol.p(k) / xi;
}

double noma_rate(const LinkModel& model, const PowerSolution& sol, int g, int m) {
  const int k = model.beams[g][m];
  return std::log2(1.0 + model.gain(k, g) * sol.p(k) / interference_term(model, sol, g, m));
}

double oma_rate(const LinkModel& model, const PowerSolution& sol, int g, int m) {
  const int k = model.beams[g][m];
  const double gamma = model.gain(k, g) * sol.p(k) / oma_interference_term(model, sol, g, m);
  return std::log2(1.0 + gamma) / model.beam_size(g);
}

double user_rate(const LinkModel& model, const PowerSolution& sol, int g, int m) {
  return model.access == MultipleAccess::Oma ? oma_rate(model, sol, g, m)
                                             : noma_rate(model, sol, g, m);
}

double harvested_energy(const LinkModel& model, const PowerSolution& sol, int g, int m) {
  const int k = model.beams[g][m];
  double received = model.noise_var;
  for (int i = 0; i < model.n_beams(); ++i) received += model.gain(k, i) * beam_power(model, sol, i);
  return model.eh_efficiency * (1.0 - sol.beta(k)) * received;
}

double sum_rate(std::span<const double> rates) {
  return std::accumulate(rates.begin(), rates.end(), 0.0);
}

double energy_efficiency(double total_rate, const PowerSolution& sol, const SystemConfig& config,
                         const CircuitPower& circuit) {
  const double denominator = sol.p.sum() + active_rf_chains(config) * circuit.rf_chain +
                             phase_shifter_count(config) * circuit.phase_shifter +
                             circuit.baseband;
  return total_rate / denominator;
}

TrialMetrics evaluate_metrics(const LinkModel& model, const PowerSolution& sol,
                              const SystemConfig& config) {
  TrialMetrics out;
  const int k_users = model.n_users();
  out.per_user_rate.resize(k_users);
  out.per_user_eh.resize(k_users);
  for (int g = 0; g < model.n_beams(); ++g) {
    for (int m = 0; m < model.beam_size(g); ++m) {
      const int k = model.beams[g][m];
      out.per_user_rate(k) = user_rate(model, sol, g, m);
      out.per_user_eh(k) = harvested_energy(model, sol, g, m);
    }
  }
  out.sum_rate = sum_rate(std::span<const double>(out.per_user_rate.data(), k_users));
  out.energy_efficiency = energy_efficiency(out.sum_rate, sol, config);
  return out;
}

}  // namespace mmnoma
