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

// Command-line front end: `simulate` runs Monte Carlo sweeps, `inspect`
// dumps the intermediate artifacts of a single trial.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmnoma/harness.hpp"

namespace {

using namespace mmnoma;

constexpr int kExitOk = 0;
constexpr int kExitBadConfig = 2;
constexpr int kExitAllFailed = 3;

struct Common {
  std::string config_path;
  std::uint64_t seed = 1;
};

SystemConfig base_config(const Common& common) {
  return common.config_path.empty() ? default_config() : load_config(common.config_path);
}

std::vector<Scenario> scenarios_of(const std::vector<std::string>& archs,
                                   const std::vector<std::string>& schemes) {
  std::vector<Scenario> out;
  for (const auto& a : archs) {
    for (const auto& m : schemes) out.push_back({parse_architecture(a), parse_multiple_access(m)});
  }
  return out;
}

void check_valid(const SystemConfig& config, const Scenario& scenario) {
  const auto report = validate(scenario.apply(config));
  if (!report.ok()) throw ConfigError(scenario.name() + ": " + report.summary());
}

std::string format_mean(const std::optional<double>& v) {
  return v ? std::to_string(*v) : std::string("NA");
}

int run_simulate(const Common& common, const std::vector<double>& snr, int trials,
                 const std::vector<std::string>& archs, const std::vector<std::string>& schemes,
                 const std::string& out_dir, bool trace, int workers) {
  SweepSpec spec;
  try {
    spec.config = base_config(common);
    spec.scenarios = scenarios_of(archs, schemes);
    for (const auto& s : spec.scenarios) check_valid(spec.config, s);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitBadConfig;
  }
  spec.snr_points_db = snr;
  spec.n_trials = trials;
  spec.base_seed = common.seed;
  spec.workers = workers;

  const SweepResult result = run_sweep(spec);
  emit_results(result, out_dir, trace);

  std::cout << "scenario,snr_db,mean_sum_rate,mean_ee,n_feasible,n_infeasible,n_degenerate\n";
  for (const auto& a : result.aggregates) {
    std::cout << a.scenario << ',' << a.snr_db << ',' << format_mean(a.mean_sum_rate) << ','
              << format_mean(a.mean_ee) << ',' << a.n_feasible << ',' << a.n_infeasible << ','
              << a.n_degenerate << '\n';
  }
  const bool any = std::any_of(result.rows.begin(), result.rows.end(),
                               [](const SweepRow& r) { return r.feasible; });
  return any ? kExitOk : kExitAllFailed;
}

int run_inspect(const Common& common, double snr, const std::string& arch,
                const std::string& scheme, const std::string& out_dir) {
  SystemConfig config;
  try {
    const Scenario scenario{parse_architecture(arch), parse_multiple_access(scheme)};
    config = base_config(common);
    check_valid(config, scenario);
    config = with_snr_db(scenario.apply(config), snr);
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitBadConfig;
  }
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);

  TrialArtifacts art;
  try {
    art = run_pipeline(config, common.seed);
  } catch (const DegenerateChannels& e) {
    std::cerr << "degenerate realization: " << e.what() << '\n';
    return kExitAllFailed;
  } catch (const SingularEquivalentChannel& e) {
    std::cerr << "degenerate realization: " << e.what() << '\n';
    return kExitAllFailed;
  }
  write_channel_csv(art.channels, dir / "channels.csv");
  write_precoder_csv(art.precoder, dir / "precoder.csv");
  {
    nlohmann::json doc = to_json(art.plan);
    doc["chs_operations"] = art.chs_operations;
    doc["rate_min"] = std::vector<double>(art.rate_min.begin(), art.rate_min.end());
    std::ofstream(dir / "grouping.json") << doc.dump(2) << '\n';
  }
  write_trace_csv(art.optimization.trace, dir / "trace.csv");

  const auto& opt = art.optimization;
  std::cout << "status " << to_string(opt.status) << '\n';
  if (opt.status != SolveStatus::Optimal) return kExitAllFailed;
  std::cout << "sum_rate_bpshz " << opt.metrics.sum_rate << '\n'
            << "ee_bpshz_per_w " << opt.metrics.energy_efficiency << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mmWave hybrid-precoding MIMO-NOMA simulator with SWIPT"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON overrides of the default parameters")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "base seed");
  };

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo sweep over SNR and scenarios");
  add_common(simulate);
  std::vector<double> snr{0.0, 10.0, 20.0};
  int trials = 20;
  std::vector<std::string> archs{"full"};
  std::vector<std::string> schemes{"noma"};
  std::string out_dir = "results";
  bool trace = false;
  int workers = 0;
  simulate->add_option("--snr", snr, "SNR points in dB")->delimiter(',');
  simulate->add_option("--trials", trials, "trials per (scenario, SNR)")->check(CLI::PositiveNumber);
  simulate->add_option("--arch", archs, "full|sub|digital")->delimiter(',');
  simulate->add_option("--ma", schemes, "noma|oma")->delimiter(',');
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_flag("--trace", trace, "also write trace.csv");
  simulate->add_option("--workers", workers, "worker threads (0: all cores)")
      ->check(CLI::NonNegativeNumber);

  auto* inspect = app.add_subcommand("inspect", "dump the artifacts of one trial");
  add_common(inspect);
  double inspect_snr = 0.0;
  std::string inspect_arch = "full";
  std::string inspect_ma = "noma";
  std::string inspect_out = "inspect";
  inspect->add_option("--snr", inspect_snr, "SNR in dB");
  inspect->add_option("--arch", inspect_arch, "full|sub|digital");
  inspect->add_option("--ma", inspect_ma, "noma|oma");
  inspect->add_option("--out", inspect_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return run_simulate(common, snr, trials, archs, schemes, out_dir, trace, workers);
    }
    return run_inspect(common, inspect_snr, inspect_arch, inspect_ma, inspect_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
