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
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include <doctest.h>

#include "mmnoma/harness.hpp"
#include "oracles.hpp"

using namespace mmnoma;

namespace {

const Scenario kFullNoma{Architecture::FullyConnected, MultipleAccess::Noma};
const Scenario kFullOma{Architecture::FullyConnected, MultipleAccess::Oma};
const Scenario kSubNoma{Architecture::SubConnected, MultipleAccess::Noma};
const Scenario kDigital{Architecture::FullyDigital, MultipleAccess::Noma};

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("mmnoma_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::vector<std::string> lines_of(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

SweepSpec small_sweep() {
  SweepSpec spec;
  spec.snr_points_db = {0.0, 10.0, 20.0};
  spec.n_trials = 5;
  spec.base_seed = 77;
  spec.scenarios = {kFullNoma, kSubNoma};
  spec.config = default_config();
  spec.workers = 2;
  return spec;
}

/// Everything a trial produces, folded into one comparable string.
std::string fingerprint(const SystemConfig& config, std::uint64_t seed) {
  const TrialArtifacts art = run_pipeline(config, seed);
  std::ostringstream out;
  out.precision(17);
  out << channel_hash(art.channels) << '|' << art.chs_operations << '|';
  for (const auto& beam : art.plan.beams) {
    for (int k : beam) out << k << ',';
    out << ';';
  }
  for (Eigen::Index i = 0; i < art.precoder.analog.size(); ++i) out << art.precoder.analog(i) << ',';
  for (const auto& d : art.precoder.digital) out << d.sum() << ',';
  out << '|' << art.rate_min.transpose() << '|' << static_cast<int>(art.optimization.status) << '|'
      << art.optimization.trace.size() << '|' << art.optimization.metrics.sum_rate << '|'
      << art.optimization.metrics.energy_efficiency << '|'
      << art.optimization.solution.p.transpose() << '|'
      << art.optimization.solution.beta.transpose();
  return out.str();
}

}  // namespace

TEST_CASE("scenario names") {
  CHECK(kFullNoma.name() == "full-noma");
  CHECK(kFullOma.name() == "full-oma");
  CHECK(Scenario{Architecture::SubConnected, MultipleAccess::Oma}.name() == "sub-oma");
  CHECK(kDigital.name() == "digital-noma");
  const SystemConfig c = kSubNoma.apply(default_config());
  CHECK(c.architecture == Architecture::SubConnected);
  CHECK(c.multiple_access == MultipleAccess::Noma);
}

TEST_CASE("trial seeds") {
  std::set<std::uint64_t> seen;
  for (int s = 0; s < 3; ++s) {
    for (int t = 0; t < 100; ++t) seen.insert(trial_seed(1, s, t));
  }
  CHECK(seen.size() == 300u);
  CHECK(trial_seed(1, 2, 3) == trial_seed(1, 2, 3));
  CHECK(trial_seed(1, 2, 3) != trial_seed(2, 2, 3));
  CHECK(fallback_seed(5, 1) != fallback_seed(5, 2));
  CHECK(fallback_seed(5, 1) != 5u);
}

TEST_CASE("run_trial is deterministic") {
  const SystemConfig c = kFullNoma.apply(default_config());
  const auto a = run_trial(c, 1234);
  const auto b = run_trial(c, 1234);
  CHECK(a.status == b.status);
  CHECK(a.metrics.sum_rate == b.metrics.sum_rate);
  CHECK(a.metrics.energy_efficiency == b.metrics.energy_efficiency);
  CHECK(a.metrics.per_user_rate == b.metrics.per_user_rate);
  CHECK(a.solution.p == b.solution.p);
  CHECK(a.channel_hash == b.channel_hash);
}

TEST_CASE("one user per beam: NOMA and OMA coincide") {
  SystemConfig c = default_config();
  c.n_users = 4;
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 20 && compared < 5; ++seed) {
    const auto noma = run_trial(kFullNoma.apply(c), seed);
    const auto oma = run_trial(kFullOma.apply(c), seed);
    REQUIRE(noma.status == oma.status);
    if (!noma.feasible()) continue;
    ++compared;
    for (int k = 0; k < 4; ++k) {
      CHECK(noma.metrics.per_user_rate(k) ==
            doctest::Approx(oma.metrics.per_user_rate(k)).epsilon(1e-9));
    }
  }
  CHECK(compared == 5);
}

TEST_CASE("feasible trials honour the optimizer postconditions") {
  int checked = 0;
  for (const Scenario& sc : {kFullNoma, kFullOma, kSubNoma, kDigital}) {
    const SystemConfig c = sc.apply(with_snr_db(default_config(), 10.0));
    for (int t = 0; t < 6; ++t) {
      const auto art = run_pipeline(c, trial_seed(3, 1, t));
      if (art.optimization.status != SolveStatus::Optimal) continue;
      ++checked;
      const auto& s = art.optimization.solution;
      const LinkModel link = make_link_model(art.precoder, art.plan, c);
      CHECK(s.p.sum() <= c.total_power * (1.0 + 1e-9));
      CHECK((s.beta.array() > 0.0).all());
      CHECK((s.beta.array() < 1.0).all());
      for (int k = 0; k < c.n_users; ++k) {
        CHECK(testing::eh_direct(link, s.p, s.beta(k), k) >= 1e-4 * (1.0 - 1e-6));
        CHECK(testing::rate_direct(link, s.p, s.beta(k), k) >= art.rate_min(k) * (1.0 - 1e-6));
      }
    }
  }
  CHECK(checked >= 12);
}

TEST_CASE("sweep cardinality, ordering and pairing") {
  const SweepSpec spec = small_sweep();
  const SweepResult result = run_sweep(spec);
  REQUIRE(result.rows.size() == 30u);
  CHECK(result.aggregates.size() == 6u);
  std::size_t i = 0;
  for (const auto& sc : spec.scenarios) {
    for (double snr : spec.snr_points_db) {
      for (int t = 0; t < spec.n_trials; ++t, ++i) {
        CHECK(result.rows[i].scenario == sc.name());
        CHECK(result.rows[i].snr_db == snr);
        CHECK(result.rows[i].trial == t);
      }
    }
  }
  // Same (snr, trial) in both scenarios: same channels.
  for (std::size_t j = 0; j < 15; ++j) {
    CHECK(result.rows[j].channel_hash == result.rows[j + 15].channel_hash);
    CHECK(result.rows[j].seed == result.rows[j + 15].seed);
  }
  CHECK(result.rows[0].channel_hash != result.rows[1].channel_hash);

  for (const auto& agg : result.aggregates) {
    int n = 0;
    double rate = 0.0, ee = 0.0;
    int feasible = 0, infeasible = 0, degenerate = 0;
    for (const auto& r : result.rows) {
      if (r.scenario != agg.scenario || r.snr_db != agg.snr_db) continue;
      ++n;
      if (r.degenerate) {
        ++degenerate;
      } else if (r.feasible) {
        ++feasible;
        rate += r.sum_rate;
        ee += r.energy_efficiency;
      } else {
        ++infeasible;
      }
    }
    CHECK(n == spec.n_trials);
    CHECK(agg.n_feasible == feasible);
    CHECK(agg.n_infeasible == infeasible);
    CHECK(agg.n_degenerate == degenerate);
    if (feasible > 0) {
      REQUIRE(agg.mean_sum_rate.has_value());
      CHECK(std::abs(*agg.mean_sum_rate - rate / feasible) <= 1e-12 * std::abs(rate / feasible));
      CHECK(std::abs(*agg.mean_ee - ee / feasible) <= 1e-12 * std::abs(ee / feasible));
    } else {
      CHECK_FALSE(agg.mean_sum_rate.has_value());
    }
  }
}

TEST_CASE("sweep output does not depend on the worker count") {
  SweepSpec spec = small_sweep();
  spec.snr_points_db = {10.0};
  spec.n_trials = 4;
  spec.workers = 1;
  const auto one = run_sweep(spec);
  spec.workers = 3;
  const auto three = run_sweep(spec);
  REQUIRE(one.rows.size() == three.rows.size());
  for (std::size_t i = 0; i < one.rows.size(); ++i) {
    CHECK(one.rows[i].sum_rate == three.rows[i].sum_rate);
    CHECK(one.rows[i].energy_efficiency == three.rows[i].energy_efficiency);
    CHECK(one.rows[i].trace == three.rows[i].trace);
  }
}

TEST_CASE("all-infeasible cell reports an absent mean") {
  SweepSpec spec = small_sweep();
  spec.snr_points_db = {0.0};
  spec.n_trials = 3;
  spec.scenarios = {kFullNoma};
  spec.config.rate_min_policy = RateFloorPolicy::absolute(100.0);
  const auto result = run_sweep(spec);
  REQUIRE(result.aggregates.size() == 1u);
  CHECK_FALSE(result.aggregates[0].mean_sum_rate.has_value());
  CHECK_FALSE(result.aggregates[0].mean_ee.has_value());
  CHECK(result.aggregates[0].n_infeasible == 3);

  const auto dir = scratch("na");
  emit_results(result, dir, false);
  const auto lines = lines_of(dir / "aggregates.csv");
  REQUIRE(lines.size() == 2u);
  CHECK(lines[1] == "full-noma,0,NA,NA,0,3,0");
  std::filesystem::remove_all(dir);
}

TEST_CASE("empty result gives header-only CSVs") {
  const auto dir = scratch("empty");
  emit_results(SweepResult{}, dir, true);
  CHECK(lines_of(dir / "rows.csv") ==
        std::vector<std::string>{
            "scenario,snr_db,trial,seed,sum_rate_bpshz,ee_bpshz_per_w,feasible,degenerate"});
  CHECK(lines_of(dir / "aggregates.csv") ==
        std::vector<std::string>{
            "scenario,snr_db,mean_sum_rate,mean_ee,n_feasible,n_infeasible,n_degenerate"});
  CHECK(lines_of(dir / "trace.csv") ==
        std::vector<std::string>{"scenario,snr_db,trial,iteration,sum_rate"});
  std::filesystem::remove_all(dir);
}

TEST_CASE("CSV round trip and trace emission") {
  SweepSpec spec = small_sweep();
  spec.snr_points_db = {0.0, 20.0};
  spec.n_trials = 3;
  const auto result = run_sweep(spec);
  const auto dir = scratch("roundtrip");
  emit_results(result, dir, true);

  const auto rows = read_rows_csv(dir / "rows.csv");
  REQUIRE(rows.size() == result.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].scenario == result.rows[i].scenario);
    CHECK(rows[i].seed == result.rows[i].seed);
    CHECK(rows[i].sum_rate == result.rows[i].sum_rate);
    CHECK(rows[i].feasible == result.rows[i].feasible);
  }
  const auto rebuilt = aggregate(rows);
  const auto parsed = read_aggregates_csv(dir / "aggregates.csv");
  REQUIRE(rebuilt.size() == result.aggregates.size());
  REQUIRE(parsed.size() == result.aggregates.size());
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    CHECK(rebuilt[i].n_feasible == result.aggregates[i].n_feasible);
    CHECK(parsed[i].n_infeasible == result.aggregates[i].n_infeasible);
    CHECK(parsed[i].mean_sum_rate.has_value() == result.aggregates[i].mean_sum_rate.has_value());
    if (parsed[i].mean_sum_rate) {
      CHECK(*parsed[i].mean_sum_rate == *result.aggregates[i].mean_sum_rate);
      CHECK(*rebuilt[i].mean_sum_rate == *result.aggregates[i].mean_sum_rate);
    }
  }

  const auto trace = lines_of(dir / "trace.csv");
  std::size_t expected = 1;
  for (const auto& r : result.rows) {
    if (r.feasible) {
      CHECK(r.trace.size() == static_cast<std::size_t>(spec.config.max_iterations));
      expected += r.trace.size();
    }
  }
  CHECK(trace.size() == expected);
  std::filesystem::remove_all(dir);
}

TEST_CASE("every numeric config field reaches the pipeline") {
  SystemConfig base = default_config();
  base.n_horizontal = 16;
  base.n_vertical = 4;  // so the vertical spacing matters
  base = with_snr_db(base, 10.0);
  std::uint64_t seed = 0;
  while (run_pipeline(base, seed).optimization.status != SolveStatus::Optimal) ++seed;
  const std::string reference = fingerprint(base, seed);
  CHECK(reference == fingerprint(base, seed));

  const std::vector<std::pair<std::string, std::function<void(SystemConfig&)>>> perturbations = {
      {"n_antennas/n_horizontal", [](SystemConfig& c) { c.n_antennas = 32, c.n_horizontal = 8; }},
      {"n_antennas/n_vertical", [](SystemConfig& c) { c.n_antennas = 32, c.n_vertical = 2; }},
      {"n_rf/n_beams", [](SystemConfig& c) { c.n_rf = c.n_beams = 2; }},
      {"n_users", [](SystemConfig& c) { c.n_users = 5; }},
      {"quant_bits", [](SystemConfig& c) { c.quant_bits = 2; }},
      {"total_power", [](SystemConfig& c) { c.total_power *= 2.0; }},
      {"noise_var", [](SystemConfig& c) { c.noise_var *= 2.0; }},
      {"splitter_noise_var", [](SystemConfig& c) { c.splitter_noise_var *= 2.0; }},
      {"eh_efficiency", [](SystemConfig& c) { c.eh_efficiency = 0.5; }},
      {"eh_min", [](SystemConfig& c) { c.eh_min = 2e-4; }},
      {"rate_min_policy", [](SystemConfig& c) { c.rate_min_policy.value = 0.05; }},
      {"antenna_spacing_h", [](SystemConfig& c) { c.antenna_spacing_h = 0.4; }},
      {"antenna_spacing_v", [](SystemConfig& c) { c.antenna_spacing_v = 0.4; }},
      {"n_paths", [](SystemConfig& c) { c.n_paths = 4; }},
      {"los_gain_var", [](SystemConfig& c) { c.los_gain_var = 2.0; }},
      {"nlos_gain_var", [](SystemConfig& c) { c.nlos_gain_var = 0.2; }},
      {"chs_threshold_init", [](SystemConfig& c) { c.chs_threshold_init = 0.05; }},
      {"max_iterations", [](SystemConfig& c) { c.max_iterations = 4; }},
      {"solver_tolerance", [](SystemConfig& c) { c.solver_tolerance = 1e-4; }},
  };
  for (const auto& [field, perturb] : perturbations) {
    CAPTURE(field);
    SystemConfig changed = base;
    perturb(changed);
    REQUIRE(validate(changed).ok());
    CHECK(fingerprint(changed, seed) != reference);
  }
}
