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

#include "mmnoma/harness.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace mmnoma {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::ifstream open_csv(const std::filesystem::path& path, std::string_view header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string first;
  std::getline(in, first);
  if (first != header) throw std::runtime_error(path.string() + ": unexpected header '" + first + "'");
  return in;
}

std::ofstream create_csv(const std::filesystem::path& path, std::string_view header) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << header << '\n' << std::setprecision(17);
  return out;
}

void finish_csv(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

constexpr std::string_view kRowsHeader =
    "scenario,snr_db,trial,seed,sum_rate_bpshz,ee_bpshz_per_w,feasible,degenerate";
constexpr std::string_view kAggregatesHeader =
    "scenario,snr_db,mean_sum_rate,mean_ee,n_feasible,n_infeasible,n_degenerate";
constexpr std::string_view kTraceHeader = "scenario,snr_db,trial,iteration,sum_rate";
constexpr std::string_view kAbsent = "NA";

}  // namespace

std::string Scenario::name() const {
  return std::string(to_string(architecture)) + "-" + std::string(to_string(access));
}

SystemConfig Scenario::apply(const SystemConfig& config) const {
  SystemConfig out = config;
  out.architecture = architecture;
  out.multiple_access = access;
  return out;
}

TrialArtifacts run_pipeline(const SystemConfig& config, std::uint64_t seed) {
  TrialArtifacts art;
  art.channels = generate_scenario<double>(seed, config);
  const std::span<const Eigen::VectorXcd> h(art.channels.channels);
  if (config.architecture == Architecture::FullyDigital) {
    art.precoder = fully_digital_precoder<double>(h);
    art.plan = single_user_beams(config.n_users);
    art.plan.sic_order_applied = true;
  } else {
    const HeadSelection heads = select_cluster_heads<double>(h, config.n_beams,
                                                             config.chs_threshold_init);
    art.chs_operations = heads.operation_count;
    VectorList<double> head_channels;
    for (int k : heads.heads) head_channels.push_back(h[k]);
    art.precoder.architecture = config.architecture;
    art.precoder.analog = analog_precoder<double>(head_channels, config);
    art.precoder.equiv_channels = equivalent_channels<double>(h, art.precoder.analog);
    const std::span<const Eigen::VectorXcd> equiv(art.precoder.equiv_channels);
    GroupingPlan plan = group_users<double>(equiv, heads.heads, heads.final_threshold);
    VectorList<double> strongest;
    for (int k : strongest_users<double>(plan, equiv)) strongest.push_back(equiv[k]);
    art.precoder.digital = digital_zf<double>(strongest, art.precoder.analog);
    art.plan = sic_order<double>(std::move(plan), equiv, art.precoder.digital);
  }
  art.rate_min = compute_rate_floor(config, art.channels);
  art.optimization = joint_optimize(art.precoder, art.plan, config, art.rate_min);
  return art;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int snr_index, int trial) {
  std::uint64_t x = splitmix64(base_seed);
  x = splitmix64(x ^ static_cast<std::uint64_t>(snr_index));
  return splitmix64(x ^ (static_cast<std::uint64_t>(trial) << 20));
}

std::uint64_t fallback_seed(std::uint64_t seed, int attempt) {
  return splitmix64(seed ^ (0xa5a5a5a5ULL * static_cast<std::uint64_t>(attempt)));
}

TrialOutcome run_trial(const SystemConfig& config, std::uint64_t seed) {
  TrialOutcome out;
  out.seed = seed;
  for (int attempt = 0; attempt < kMaxTrialAttempts; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : fallback_seed(seed, attempt);
    out.attempts = attempt + 1;
    out.seed = s;
    try {
      TrialArtifacts art = run_pipeline(config, s);
      out.metrics = std::move(art.optimization.metrics);
      out.solution = std::move(art.optimization.solution);
      out.status = art.optimization.status;
      out.trace = std::move(art.optimization.trace);
      out.channel_hash = channel_hash(art.channels);
      out.degenerate = false;
      return out;
    } catch (const DegenerateChannels& e) {
      std::clog << "mmnoma: seed " << s << " degenerate (" << e.what() << "), resampling\n";
    } catch (const SingularEquivalentChannel& e) {
      std::clog << "mmnoma: seed " << s << " degenerate (" << e.what() << "), resampling\n";
    }
    out.degenerate = true;
  }
  out.status = SolveStatus::NumericalFailure;
  return out;
}

SweepResult run_sweep(const SweepSpec& spec) {
  if (spec.n_trials < 1) throw std::invalid_argument("run_sweep: n_trials must be >= 1");
  if (spec.snr_points_db.empty()) throw std::invalid_argument("run_sweep: empty SNR list");

  struct Item {
    std::size_t scenario;
    std::size_t snr;
    int trial;
  };
  std::vector<Item> items;
  for (std::size_t s = 0; s < spec.scenarios.size(); ++s) {
    for (std::size_t i = 0; i < spec.snr_points_db.size(); ++i) {
      for (int t = 0; t < spec.n_trials; ++t) items.push_back({s, i, t});
    }
  }

  SweepResult result;
  result.rows.resize(items.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t idx = next++; idx < items.size(); idx = next++) {
      const Item& it = items[idx];
      try {
        const Scenario& sc = spec.scenarios[it.scenario];
        const double snr = spec.snr_points_db[it.snr];
        const SystemConfig cfg = with_snr_db(sc.apply(spec.config), snr);
        const std::uint64_t seed = trial_seed(spec.base_seed, static_cast<int>(it.snr), it.trial);
        const TrialOutcome outcome = run_trial(cfg, seed);
        SweepRow& row = result.rows[idx];
        row.scenario = sc.name();
        row.snr_db = snr;
        row.trial = it.trial;
        row.seed = outcome.seed;
        row.feasible = outcome.feasible();
        row.degenerate = outcome.degenerate;
        row.sum_rate = outcome.metrics.sum_rate;
        row.energy_efficiency = outcome.metrics.energy_efficiency;
        row.channel_hash = outcome.channel_hash;
        for (const auto& r : outcome.trace) row.trace.push_back(r.sum_rate);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_workers =
      std::min<std::size_t>(spec.workers > 0 ? spec.workers : hw, std::max<std::size_t>(items.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  result.aggregates = aggregate(result.rows);
  return result;
}

std::vector<SweepAggregate> aggregate(std::span<const SweepRow> rows) {
  std::vector<SweepAggregate> out;
  std::map<std::pair<std::string, double>, std::size_t> index;
  std::vector<double> rate_sum, ee_sum;
  for (const auto& row : rows) {
    const auto key = std::make_pair(row.scenario, row.snr_db);
    auto [pos, inserted] = index.try_emplace(key, out.size());
    if (inserted) {
      out.push_back({row.scenario, row.snr_db, std::nullopt, std::nullopt, 0, 0, 0});
      rate_sum.push_back(0.0);
      ee_sum.push_back(0.0);
    }
    const std::size_t i = pos->second;
    if (row.degenerate) {
      ++out[i].n_degenerate;
    } else if (row.feasible) {
      ++out[i].n_feasible;
      rate_sum[i] += row.sum_rate;
      ee_sum[i] += row.energy_efficiency;
    } else {
      ++out[i].n_infeasible;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].n_feasible > 0) {
      out[i].mean_sum_rate = rate_sum[i] / out[i].n_feasible;
      out[i].mean_ee = ee_sum[i] / out[i].n_feasible;
    }
  }
  return out;
}

void emit_results(const SweepResult& result, const std::filesystem::path& directory,
                  bool with_trace) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  if (ec) throw std::runtime_error("cannot create " + directory.string() + ": " + ec.message());

  const auto rows_path = directory / "rows.csv";
  auto rows = create_csv(rows_path, kRowsHeader);
  for (const auto& r : result.rows) {
    rows << r.scenario << ',' << r.snr_db << ',' << r.trial << ',' << r.seed << ',' << r.sum_rate
         << ',' << r.energy_efficiency << ',' << int(r.feasible) << ',' << int(r.degenerate)
         << '\n';
  }
  finish_csv(rows, rows_path);

  const auto agg_path = directory / "aggregates.csv";
  auto agg = create_csv(agg_path, kAggregatesHeader);
  for (const auto& a : result.aggregates) {
    agg << a.scenario << ',' << a.snr_db << ',';
    if (a.mean_sum_rate) agg << *a.mean_sum_rate; else agg << kAbsent;
    agg << ',';
    if (a.mean_ee) agg << *a.mean_ee; else agg << kAbsent;
    agg << ',' << a.n_feasible << ',' << a.n_infeasible << ',' << a.n_degenerate << '\n';
  }
  finish_csv(agg, agg_path);

  if (!with_trace) return;
  const auto trace_path = directory / "trace.csv";
  auto trace = create_csv(trace_path, kTraceHeader);
  for (const auto& r : result.rows) {
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
      trace << r.scenario << ',' << r.snr_db << ',' << r.trial << ',' << i + 1 << ','
            << r.trace[i] << '\n';
    }
  }
  finish_csv(trace, trace_path);
}

std::vector<SweepRow> read_rows_csv(const std::filesystem::path& path) {
  auto in = open_csv(path, kRowsHeader);
  std::vector<SweepRow> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 8) throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    SweepRow r;
    r.scenario = f[0];
    r.snr_db = std::stod(f[1]);
    r.trial = std::stoi(f[2]);
    r.seed = std::stoull(f[3]);
    r.sum_rate = std::stod(f[4]);
    r.energy_efficiency = std::stod(f[5]);
    r.feasible = f[6] == "1";
    r.degenerate = f[7] == "1";
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SweepAggregate> read_aggregates_csv(const std::filesystem::path& path) {
  auto in = open_csv(path, kAggregatesHeader);
  std::vector<SweepAggregate> out;
  std::string line;
  auto optional_number = [](const std::string& cell) -> std::optional<double> {
    if (cell == kAbsent) return std::nullopt;
    return std::stod(cell);
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw std::runtime_error(path.string() + ": malformed row '" + line + "'");
    out.push_back({f[0], std::stod(f[1]), optional_number(f[2]), optional_number(f[3]),
                   std::stoi(f[4]), std::stoi(f[5]), std::stoi(f[6])});
  }
  return out;
}

}  // namespace mmnoma
