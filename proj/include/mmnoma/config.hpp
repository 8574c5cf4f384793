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

#ifndef MMNOMA_CONFIG_HPP_
#define MMNOMA_CONFIG_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mmnoma {

enum class Architecture { FullyConnected, SubConnected, FullyDigital };
enum class MultipleAccess { Noma, Oma };

/// How the per-user rate floor R_min is produced.
struct RateFloorPolicy {
  enum class Kind { FractionOfDigitalMin, Absolute };

  Kind kind = Kind::FractionOfDigitalMin;
  /// Fraction of the fully-digital minimum rate, or an absolute rate in bps/Hz.
  double value = 0.1;

  static RateFloorPolicy fraction_of_digital_min(double fraction) {
    return {Kind::FractionOfDigitalMin, fraction};
  }
  static RateFloorPolicy absolute(double rate) { return {Kind::Absolute, rate}; }

  bool operator==(const RateFloorPolicy&) const = default;
};

/// Every scalar parameter of the system. Powers in watts, spacings in
/// wavelengths, rates in bps/Hz (1 Hz bandwidth).
struct SystemConfig {
  int n_antennas = 64;
  int n_horizontal = 64;
  int n_vertical = 1;
  int n_rf = 4;
  int n_beams = 4;
  int n_users = 6;
  int quant_bits = 4;

  double total_power = 0.030;
  double noise_var = 0.030;
  double splitter_noise_var = 0.030;
  double eh_efficiency = 0.6;
  double eh_min = 1e-4;
  RateFloorPolicy rate_min_policy = RateFloorPolicy::fraction_of_digital_min(0.1);

  Architecture architecture = Architecture::FullyConnected;
  MultipleAccess multiple_access = MultipleAccess::Noma;

  double antenna_spacing_h = 0.5;
  double antenna_spacing_v = 0.5;
  int n_paths = 3;
  double los_gain_var = 1.0;
  double nlos_gain_var = 0.1;

  double chs_threshold_init = 0.5;
  int max_iterations = 10;
  double solver_tolerance = 1e-8;

  bool operator==(const SystemConfig&) const = default;
};

struct ConfigViolation {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<ConfigViolation> violations;

  bool ok() const { return violations.empty(); }
  bool mentions(std::string_view field) const;
  std::string summary() const;
};

ValidationReport validate(const SystemConfig& config);

/// Default setup: 64-element ULA, 4 RF
/// chains, 6 users, 4-bit phase shifters, 30 mW budget, 0.1 mW EH floor.
SystemConfig default_config();

/// Number of RF chains actually powered (N for the fully-digital baseline).
int active_rf_chains(const SystemConfig& config);

/// Number of phase shifters in the analog network.
int phase_shifter_count(const SystemConfig& config);

/// Antennas per RF chain in the sub-connected layout.
int antennas_per_chain(const SystemConfig& config);

/// Returns a copy with sigma_v^2 = P_t / SNR. The splitter noise keeps its
/// ratio to the antenna noise.
SystemConfig with_snr_db(const SystemConfig& config, double snr_db);

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string_view to_string(Architecture architecture);
std::string_view to_string(MultipleAccess access);
Architecture parse_architecture(std::string_view text);
MultipleAccess parse_multiple_access(std::string_view text);

nlohmann::json to_json(const SystemConfig& config);

/// Applies the keys of `document` on top of `base`. Unknown keys and
/// ill-typed values raise ConfigError. The result is not validated.
SystemConfig config_from_json(const nlohmann::json& document,
                              SystemConfig base = default_config());

SystemConfig load_config(const std::filesystem::path& path);

}  // namespace mmnoma

#endif  // MMNOMA_CONFIG_HPP_
