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

#ifndef MMNOMA_HARNESS_HPP_
#define MMNOMA_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmnoma/channel.hpp"
#include "mmnoma/clustering.hpp"
#include "mmnoma/config.hpp"
#include "mmnoma/joint_optimizer.hpp"
#include "mmnoma/precoding.hpp"

namespace mmnoma {

inline constexpr int kMaxTrialAttempts = 3;

struct Scenario {
  Architecture architecture = Architecture::FullyConnected;
  MultipleAccess access = MultipleAccess::Noma;

  /// "full-noma", "sub-oma", "digital-noma", ...
  std::string name() const;
  SystemConfig apply(const SystemConfig& config) const;
  bool operator==(const Scenario&) const = default;
};

/// Every intermediate product of one pipeline run.
struct TrialArtifacts {
  ChannelSet<double> channels;
  HybridPrecoder<double> precoder;
  GroupingPlan plan;
  std::size_t chs_operations = 0;
  Eigen::VectorXd rate_min;
  OptimizationResult optimization;
};

/// Runs the full pipeline once. Throws DegenerateChannels or
/// SingularEquivalentChannel on degenerate draws.
TrialArtifacts run_pipeline(const SystemConfig& config, std::uint64_t seed);

struct TrialOutcome {
  TrialMetrics metrics;
  PowerSolution solution;
  SolveStatus status = SolveStatus::NumericalFailure;
  std::vector<IterationRecord> trace;
  std::uint64_t seed = 0;  // seed of the realization actually used
  std::uint64_t channel_hash = 0;
  int attempts = 0;
  bool degenerate = false;  // every attempt hit a degenerate draw

  bool feasible() const { return !degenerate && status == SolveStatus::Optimal; }
};

/// Pipeline with fallback reseeding: a degenerate draw is retried with
/// fallback_seed(seed, attempt) up to kMaxTrialAttempts draws in total.
TrialOutcome run_trial(const SystemConfig& config, std::uint64_t seed);

std::uint64_t trial_seed(std::uint64_t base_seed, int snr_index, int trial);
std::uint64_t fallback_seed(std::uint64_t seed, int attempt);

struct SweepSpec {
  std::vector<double> snr_points_db;
  int n_trials = 1;
  std::uint64_t base_seed = 0;
  std::vector<Scenario> scenarios;
  SystemConfig config;
  int workers = 0;  // 0: hardware concurrency
};

struct SweepRow {
  std::string scenario;
  double snr_db = 0.0;
  int trial = 0;
  std::uint64_t seed = 0;
  double sum_rate = 0.0;
  double energy_efficiency = 0.0;
  bool feasible = false;
  bool degenerate = false;
  std::vector<double> trace;
  std::uint64_t channel_hash = 0;
};

struct SweepAggregate {
  std::string scenario;
  double snr_db = 0.0;
  std::optional<double> mean_sum_rate;  // absent when no trial is feasible
  std::optional<double> mean_ee;
  int n_feasible = 0;
  int n_infeasible = 0;
  int n_degenerate = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepAggregate> aggregates;
};

/// Rows ordered by scenario, then SNR, then trial; independent of the
/// number of workers.
SweepResult run_sweep(const SweepSpec& spec);

/// One aggregate per (scenario, snr) in order of first appearance. Means
/// are taken over feasible rows; degenerate rows count separately from
/// infeasible ones.
std::vector<SweepAggregate> aggregate(std::span<const SweepRow> rows);

/// Writes rows.csv, aggregates.csv and, with `with_trace`, trace.csv into
/// `directory` (created if missing).
void emit_results(const SweepResult& result, const std::filesystem::path& directory,
                  bool with_trace);

std::vector<SweepRow> read_rows_csv(const std::filesystem::path& path);
std::vector<SweepAggregate> read_aggregates_csv(const std::filesystem::path& path);

}  // namespace mmnoma

#endif  // MMNOMA_HARNESS_HPP_
