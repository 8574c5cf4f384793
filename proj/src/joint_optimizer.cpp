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

#include "mmnoma/joint_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include "mmnoma/clustering.hpp"
#include "mmnoma/cone_program.hpp"
#include "mmnoma/precoding.hpp"

namespace mmnoma {

namespace {

double interference(const LinkModel& link, const PowerSolution& sol, int k) {
  const int g = link.beam_of[k];
  const int m = link.position_of[k];
  return link.access == MultipleAccess::Oma ? oma_interference_term(link, sol, g, m)
                                            : interference_term(link, sol, g, m);
}

double objective_weight(const LinkModel& link, int k) {
  return link.bandwidth_share(link.beam_of[k]);
}

/// Power coefficient of user j inside user k's MSE: the own gain for k
/// itself and (NOMA only) for users decoded before k, the cross gain for
/// users of other beams.
double mse_coefficient(const LinkModel& link, int k, int j) {
  const int g = link.beam_of[k];
  const int gj = link.beam_of[j];
  if (gj != g) return link.gain(k, gj);
  if (j == k) return link.gain(k, g);
  if (link.access == MultipleAccess::Noma && link.position_of[j] < link.position_of[k]) {
    return link.gain(k, g);
  }
  return 0.0;
}

double received_power(const LinkModel& link, const Eigen::VectorXd& p, int k) {
  double total = link.noise_var;
  for (int j = 0; j < link.n_users(); ++j) total += link.gain(k, link.beam_of[j]) * p(j);
  return total;
}

/// Variable layout of the normalized cone program: per user p/P_t,
/// q/sqrt(P_t), beta, tau, mu/P_t, then the phase-1 slack t.
struct Variables {
  int k;
  int p(int u) const { return u; }
  int q(int u) const { return k + u; }
  int beta(int u) const { return 2 * k + u; }
  int tau(int u) const { return 3 * k + u; }
  int mu(int u) const { return 4 * k + u; }
  int t() const { return 5 * k; }
};

struct Row {
  Eigen::VectorXd coeff;
  double rhs;
  bool relaxable;
};

struct BuiltProgram {
  ConeProgram program;
  double objective_scale = 1.0;
  double objective_constant = 0.0;
};

BuiltProgram build_program(const SubproblemSpec& spec, bool phase1) {
  const LinkModel& link = spec.link;
  const int k_users = spec.n_users();
  const Variables v{k_users};
  const int n = 5 * k_users + (phase1 ? 1 : 0);
  const double pt = spec.budget;
  const double eps = kBetaMargin;

  std::vector<Row> rows;
  auto unit = [&](int idx, double value) {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    r(idx) = value;
    return r;
  };
  for (int u = 0; u < k_users; ++u) rows.push_back({unit(v.p(u), -1.0), 0.0, false});
  {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    r.head(k_users).setOnes();
    rows.push_back({r, 1.0, false});
  }
  for (int u = 0; u < k_users; ++u) {
    rows.push_back({unit(v.beta(u), -1.0), -eps, false});
    rows.push_back({unit(v.beta(u), 1.0), 1.0 - eps, false});
    rows.push_back({unit(v.tau(u), 1.0), 1.0 / eps + 1.0, false});
  }
  for (int k = 0; k < k_users; ++k) {
    const double omega = qos_omega(link, k, spec.rate_min(k));
    if (omega <= 0.0) continue;
    const int g = link.beam_of[k];
    // -(G_kk p_k - omega * interference - omega sigma_u^2 tau) <= -omega sigma_v^2 share
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < k_users; ++j) {
      if (j == k) {
        r(v.p(j)) = -link.gain(k, g);
      } else {
        r(v.p(j)) = omega * mse_coefficient(link, k, j);
      }
    }
    r(v.tau(k)) = omega * link.splitter_noise_var / pt;
    rows.push_back({r, -omega * link.noise_var * link.bandwidth_share(g) / pt, true});
  }
  for (int k = 0; k < k_users; ++k) {
    // mu_k <= sum_j |h_bar_k^H d_{beam(j)}|^2 p_j + sigma_v^2
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (int j = 0; j < k_users; ++j) r(v.p(j)) = -link.gain(k, link.beam_of[j]);
    r(v.mu(k)) = 1.0;
    rows.push_back({r, link.noise_var / pt, true});
  }
  for (auto& row : rows) {
    const double norm = row.coeff.norm();
    row.coeff /= norm;
    row.rhs /= norm;
    if (phase1 && row.relaxable) row.coeff(v.t()) = -1.0;
  }
  if (phase1) rows.push_back({unit(v.t(), -1.0), 1.0, false});

  const int n_linear = static_cast<int>(rows.size());
  const int n_rows = n_linear + 9 * k_users;
  BuiltProgram built;
  ConeProgram& prog = built.program;
  prog.G = Eigen::MatrixXd::Zero(n_rows, n);
  prog.h = Eigen::VectorXd::Zero(n_rows);
  prog.n_linear = n_linear;
  prog.soc_dims.assign(3 * k_users, 3);
  for (int i = 0; i < n_linear; ++i) {
    prog.G.row(i) = rows[i].coeff.transpose();
    prog.h(i) = rows[i].rhs;
  }
  int r = n_linear;
  for (int u = 0; u < k_users; ++u) {
    // (p + 1, 2 q, p - 1): q^2 <= p
    prog.G(r, v.p(u)) = -1.0;
    prog.h(r++) = 1.0;
    prog.G(r++, v.q(u)) = -2.0;
    prog.G(r, v.p(u)) = -1.0;
    prog.h(r++) = -1.0;
    // (tau + beta, 2, tau - beta): tau beta >= 1
    prog.G(r, v.tau(u)) = -1.0;
    prog.G(r++, v.beta(u)) = -1.0;
    prog.h(r++) = 2.0;
    prog.G(r, v.tau(u)) = -1.0;
    prog.G(r++, v.beta(u)) = 1.0;
    // (mu + 1 - beta, 2 sqrt(P), mu - 1 + beta): mu (1 - beta) >= P_min / (eta P_t)
    prog.G(r, v.mu(u)) = -1.0;
    prog.G(r, v.beta(u)) = 1.0;
    prog.h(r++) = 1.0;
    prog.h(r++) = 2.0 * std::sqrt(spec.eh_min(u) / (link.eh_efficiency * pt));
    prog.G(r, v.mu(u)) = -1.0;
    prog.G(r, v.beta(u)) = -1.0;
    prog.h(r++) = -1.0;
  }

  prog.c = Eigen::VectorXd::Zero(n);
  if (phase1) {
    prog.c(v.t()) = 1.0;
    return built;
  }
  for (int k = 0; k < k_users; ++k) {
    const int g = link.beam_of[k];
    const double wa = objective_weight(link, k) * spec.a(k);
    const double c2 = std::norm(spec.c(k));
    const double r_k = std::max(0.0, (spec.c(k) * link.response(k, g)).real());
    built.objective_constant += wa * (1.0 + c2 * link.noise_var * link.bandwidth_share(g));
    for (int j = 0; j < k_users; ++j) prog.c(v.p(j)) += wa * c2 * mse_coefficient(link, k, j) * pt;
    prog.c(v.q(k)) -= 2.0 * wa * r_k * std::sqrt(pt);
    prog.c(v.tau(k)) += wa * c2 * link.splitter_noise_var;
  }
  built.objective_scale = std::max(1.0, prog.c.lpNorm<Eigen::Infinity>());
  prog.c /= built.objective_scale;
  return built;
}

ConeSettings solver_settings(double tolerance) {
  ConeSettings s;
  s.feastol = 0.1 * tolerance;
  s.abstol = 0.1 * tolerance;
  s.reltol = 0.1 * tolerance;
  s.max_iterations = 200;
  return s;
}

KktResiduals kkt_of(const ConeProgram& prog, const ConeSolution& sol) {
  // Complementary slackness per cone block: |s_i^T z_i|.
  double worst = 0.0;
  for (int i = 0; i < prog.n_linear; ++i) worst = std::max(worst, std::abs(sol.s(i) * sol.z(i)));
  int offset = prog.n_linear;
  for (int d : prog.soc_dims) {
    worst = std::max(worst, std::abs(sol.s.segment(offset, d).dot(sol.z.segment(offset, d))));
    offset += d;
  }
  return {sol.primal_residual, sol.dual_residual, sol.gap, worst};
}

}  // namespace

double qos_omega(const LinkModel& link, int user, double rate_min) {
  if (rate_min <= 0.0) return 0.0;
  const double scaled = link.access == MultipleAccess::Oma
                            ? rate_min * link.beam_size(link.beam_of[user])
                            : rate_min;
  return std::exp2(scaled) - 1.0;
}

std::string_view to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::Infeasible:
      return "infeasible";
    case SolveStatus::NumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

Eigen::VectorXcd update_c(const LinkModel& link, const PowerSolution& previous) {
  const int k_users = link.n_users();
  Eigen::VectorXcd c(k_users);
  for (int k = 0; k < k_users; ++k) {
    const int g = link.beam_of[k];
    const double p = previous.p(k);
    const double xi = interference(link, previous, k);
    c(k) = std::conj(std::sqrt(p) * link.response(k, g)) / (p * link.gain(k, g) + xi);
  }
  return c;
}

Eigen::VectorXd mmse(const LinkModel& link, const PowerSolution& previous) {
  const int k_users = link.n_users();
  Eigen::VectorXd e(k_users);
  for (int k = 0; k < k_users; ++k) {
    const double signal = previous.p(k) * link.gain(k, link.beam_of[k]);
    const double xi = interference(link, previous, k);
    e(k) = xi / (signal + xi);
  }
  return e;
}

Eigen::VectorXd update_a(const LinkModel& link, const PowerSolution& previous) {
  return mmse(link, previous).cwiseInverse();
}

double subproblem_objective(const SubproblemSpec& spec, const Eigen::VectorXd& p,
                            const Eigen::VectorXd& tau) {
  const LinkModel& link = spec.link;
  double total = 0.0;
  for (int k = 0; k < spec.n_users(); ++k) {
    const int g = link.beam_of[k];
    double load = link.splitter_noise_var * tau(k) + link.noise_var * link.bandwidth_share(g);
    for (int j = 0; j < spec.n_users(); ++j) load += mse_coefficient(link, k, j) * p(j);
    const double r_k = std::max(0.0, (spec.c(k) * link.response(k, g)).real());
    const double e_tilde = 1.0 - 2.0 * r_k * std::sqrt(std::max(p(k), 0.0)) +
                           std::norm(spec.c(k)) * load;
    total += objective_weight(link, k) * spec.a(k) * e_tilde;
  }
  return total;
}

SolveOutcome solve_power_subproblem(const SubproblemSpec& spec) {
  const int k_users = spec.n_users();
  if (spec.budget <= 0.0) throw std::invalid_argument("solve_power_subproblem: budget must be > 0");
  if (spec.c.size() != k_users || spec.a.size() != k_users || spec.rate_min.size() != k_users ||
      spec.eh_min.size() != k_users) {
    throw std::invalid_argument("solve_power_subproblem: per-user vectors must have K entries");
  }
  const ConeSettings settings = solver_settings(spec.tolerance);
  SolveOutcome out;

  const BuiltProgram phase1 = build_program(spec, true);
  const ConeSolution feas = solve_cone_program(phase1.program, settings);
  if (feas.status != ConeStatus::Optimal) {
    out.status = SolveStatus::NumericalFailure;
    out.kkt = kkt_of(phase1.program, feas);
    return out;
  }
  out.phase1_violation = feas.x(5 * k_users);
  if (out.phase1_violation > spec.tolerance) {
    out.status = SolveStatus::Infeasible;
    return out;
  }

  const BuiltProgram phase2 = build_program(spec, false);
  const ConeSolution opt = solve_cone_program(phase2.program, settings);
  out.kkt = kkt_of(phase2.program, opt);
  if (opt.status != ConeStatus::Optimal) {
    out.status = SolveStatus::NumericalFailure;
    return out;
  }

  const Variables v{k_users};
  const LinkModel& link = spec.link;
  PowerSolution sol = PowerSolution::uniform(k_users, 0.0, 0.5);
  for (int u = 0; u < k_users; ++u) {
    sol.p(u) = std::max(0.0, opt.x(v.p(u))) * spec.budget;
    sol.beta(u) = std::clamp(opt.x(v.beta(u)), kBetaMargin, 1.0 - kBetaMargin);
    sol.tau(u) = opt.x(v.tau(u));
    sol.mu(u) = opt.x(v.mu(u)) * spec.budget;
  }
  if (sol.p.sum() > spec.budget) sol.p *= spec.budget / sol.p.sum();
  if (link.splitter_noise_var == 0.0) {
    // beta does not enter the objective; route every spare watt to decoding.
    for (int u = 0; u < k_users; ++u) {
      const double recv = received_power(link, sol.p, u);
      sol.beta(u) = std::clamp(1.0 - spec.eh_min(u) / (link.eh_efficiency * recv), kBetaMargin,
                               1.0 - kBetaMargin);
      sol.tau(u) = 1.0 / sol.beta(u);
      sol.mu(u) = recv;
    }
  }
  sol.c = spec.c;
  sol.a = spec.a;
  out.status = SolveStatus::Optimal;
  out.subproblem_objective = subproblem_objective(spec, sol.p, sol.tau);
  out.solution = std::move(sol);
  return out;
}

namespace {

IterationRecord record(const LinkModel& link, const PowerSolution& sol,
                       const Eigen::VectorXd& rate_min, const Eigen::VectorXd& eh_min,
                       const SystemConfig& config, int iteration) {
  const TrialMetrics m = evaluate_metrics(link, sol, config);
  return {iteration, m.sum_rate, (m.per_user_rate - rate_min).minCoeff(),
          (m.per_user_eh - eh_min).minCoeff()};
}

}  // namespace

OptimizationResult joint_optimize(const LinkModel& link, const SystemConfig& config,
                                  const Eigen::VectorXd& rate_min) {
  const int k_users = link.n_users();
  SubproblemSpec spec;
  spec.link = link;
  spec.rate_min = rate_min;
  spec.eh_min = Eigen::VectorXd::Constant(k_users, config.eh_min);
  spec.budget = config.total_power;
  spec.tolerance = config.solver_tolerance;

  OptimizationResult result;
  PowerSolution sol = PowerSolution::uniform(k_users, config.total_power / k_users, 0.5);
  for (int t = 1; t <= config.max_iterations; ++t) {
    spec.c = update_c(link, sol);
    spec.a = update_a(link, sol);
    SolveOutcome outcome = solve_power_subproblem(spec);
    if (outcome.status != SolveStatus::Optimal) {
      result.status = outcome.status;
      result.failed_iteration = t;
      break;
    }
    outcome.solution.objective_trace = std::move(sol.objective_trace);
    sol = std::move(outcome.solution);
    result.trace.push_back(record(link, sol, rate_min, spec.eh_min, config, t));
    sol.objective_trace.push_back(result.trace.back().sum_rate);
  }
  if (result.failed_iteration == 0) result.status = SolveStatus::Optimal;
  result.metrics = evaluate_metrics(link, sol, config);
  result.metrics.feasible = result.status == SolveStatus::Optimal;
  result.solution = std::move(sol);
  return result;
}

OptimizationResult joint_optimize(const HybridPrecoder<double>& precoder, const GroupingPlan& plan,
                                  const SystemConfig& config, const Eigen::VectorXd& rate_min) {
  return joint_optimize(make_link_model(precoder, plan, config), config, rate_min);
}

Eigen::VectorXd compute_rate_floor(const SystemConfig& config, const ChannelSet<double>& channels) {
  const int k_users = channels.n_users();
  const auto& policy = config.rate_min_policy;
  if (policy.kind == RateFloorPolicy::Kind::Absolute) {
    return Eigen::VectorXd::Constant(k_users, policy.value);
  }
  if (policy.value == 0.0) return Eigen::VectorXd::Zero(k_users);

  const auto precoder = fully_digital_precoder<double>(channels.channels);
  SystemConfig digital = config;
  digital.architecture = Architecture::FullyDigital;
  digital.multiple_access = MultipleAccess::Noma;
  const LinkModel link = make_link_model(precoder, single_user_beams(k_users), digital);
  const auto sol = PowerSolution::uniform(k_users, config.total_power / k_users, 0.5);
  const double r_fm = evaluate_metrics(link, sol, digital).per_user_rate.minCoeff();
  return Eigen::VectorXd::Constant(k_users, policy.value * r_fm);
}

void write_trace_csv(std::span<const IterationRecord> trace, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "iteration,sum_rate,min_rate_slack,min_eh_slack\n" << std::setprecision(17);
  for (const auto& r : trace) {
    out << r.iteration << ',' << r.sum_rate << ',' << r.min_rate_slack << ',' << r.min_eh_slack
        << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace mmnoma
