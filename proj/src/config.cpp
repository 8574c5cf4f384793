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

#include "mmnoma/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mmnoma {

bool ValidationReport::mentions(std::string_view field) const {
  for (const auto& v : violations) {
    if (v.field == field) return true;
  }
  return false;
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& v : violations) out << v.field << ": " << v.message << '\n';
  return out.str();
}

ValidationReport validate(const SystemConfig& c) {
  ValidationReport report;
  auto fail = [&](std::string field, std::string message) {
    report.violations.push_back({std::move(field), std::move(message)});
  };
  auto positive_int = [&](const char* name, int value) {
    if (value < 1) fail(name, "must be a positive integer");
  };

  positive_int("n_antennas", c.n_antennas);
  positive_int("n_horizontal", c.n_horizontal);
  positive_int("n_vertical", c.n_vertical);
  positive_int("n_rf", c.n_rf);
  positive_int("n_beams", c.n_beams);
  positive_int("n_users", c.n_users);
  positive_int("quant_bits", c.quant_bits);
  positive_int("n_paths", c.n_paths);
  positive_int("max_iterations", c.max_iterations);
  if (c.quant_bits > 30) fail("quant_bits", "at most 30 bits supported");

  if (c.n_horizontal >= 1 && c.n_vertical >= 1 &&
      c.n_antennas != c.n_horizontal * c.n_vertical) {
    fail("n_antennas", "N != N1*N2");
  }
  if (c.n_beams != c.n_rf) fail("n_beams", "G = N_RF required");
  if (c.n_users < c.n_beams) fail("n_users", "K >= G required");
  if (c.architecture != Architecture::FullyDigital && c.n_rf > c.n_antennas) {
    fail("n_rf", "N_RF <= N required");
  }
  if (c.architecture == Architecture::SubConnected && c.n_rf >= 1 &&
      c.n_antennas % c.n_rf != 0) {
    fail("n_rf", "N mod N_RF = 0 required for the sub-connected layout");
  }
  if (c.architecture == Architecture::FullyDigital && c.n_users > c.n_antennas) {
    fail("n_users", "K <= N required for fully-digital ZF");
  }

  auto strictly_positive = [&](const char* name, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) fail(name, "must be finite and > 0");
  };
  strictly_positive("total_power", c.total_power);
  strictly_positive("noise_var", c.noise_var);
  strictly_positive("splitter_noise_var", c.splitter_noise_var);
  strictly_positive("antenna_spacing_h", c.antenna_spacing_h);
  strictly_positive("antenna_spacing_v", c.antenna_spacing_v);
  strictly_positive("los_gain_var", c.los_gain_var);
  strictly_positive("nlos_gain_var", c.nlos_gain_var);
  strictly_positive("solver_tolerance", c.solver_tolerance);

  if (!(c.eh_efficiency >= 0.0 && c.eh_efficiency <= 1.0)) {
    fail("eh_efficiency", "must lie in [0, 1]");
  }
  if (!(c.eh_min >= 0.0) || !std::isfinite(c.eh_min)) fail("eh_min", "must be finite and >= 0");
  if (c.eh_min > 0.0 && c.eh_efficiency == 0.0) {
    fail("eh_efficiency", "eta = 0 cannot meet a positive harvesting floor");
  }
  if (!(c.chs_threshold_init > 0.0 && c.chs_threshold_init < 1.0)) {
    fail("chs_threshold_init", "must lie in (0, 1)");
  }
  if (!(c.rate_min_policy.value >= 0.0) || !std::isfinite(c.rate_min_policy.value)) {
    fail("rate_min_policy", "must be finite and >= 0");
  }
  return report;
}

SystemConfig default_config() { return SystemConfig{}; }

int active_rf_chains(const SystemConfig& c) {
  return c.architecture == Architecture::FullyDigital ? c.n_antennas : c.n_rf;
}

int phase_shifter_count(const SystemConfig& c) {
  switch (c.architecture) {
    case Architecture::FullyConnected:
      return c.n_antennas * c.n_rf;
    case Architecture::SubConnected:
      return c.n_antennas;
    case Architecture::FullyDigital:
      return 0;
  }
  return 0;
}

int antennas_per_chain(const SystemConfig& c) { return c.n_antennas / c.n_rf; }

SystemConfig with_snr_db(const SystemConfig& c, double snr_db) {
  SystemConfig out = c;
  const double ratio = c.splitter_noise_var / c.noise_var;
  out.noise_var = c.total_power / std::pow(10.0, snr_db / 10.0);
  out.splitter_noise_var = ratio * out.noise_var;
  return out;
}

std::string_view to_string(Architecture a) {
  switch (a) {
    case Architecture::FullyConnected:
      return "full";
    case Architecture::SubConnected:
      return "sub";
    case Architecture::FullyDigital:
      return "digital";
  }
  return "?";
}

std::string_view to_string(MultipleAccess m) {
  return m == MultipleAccess::Noma ? "noma" : "oma";
}

Architecture parse_architecture(std::string_view text) {
  if (text == "full" || text == "fully_connected") return Architecture::FullyConnected;
  if (text == "sub" || text == "sub_connected") return Architecture::SubConnected;
  if (text == "digital" || text == "fully_digital") return Architecture::FullyDigital;
  throw ConfigError("unknown architecture '" + std::string(text) + "'");
}

MultipleAccess parse_multiple_access(std::string_view text) {
  if (text == "noma") return MultipleAccess::Noma;
  if (text == "oma") return MultipleAccess::Oma;
  throw ConfigError("unknown multiple access scheme '" + std::string(text) + "'");
}

namespace {

std::string_view json_architecture(Architecture a) {
  switch (a) {
    case Architecture::FullyConnected:
      return "fully_connected";
    case Architecture::SubConnected:
      return "sub_connected";
    case Architecture::FullyDigital:
      return "fully_digital";
  }
  return "?";
}

nlohmann::json policy_to_json(const RateFloorPolicy& p) {
  if (p.kind == RateFloorPolicy::Kind::Absolute) return {{"absolute", p.value}};
  return {{"fraction_of_digital_min", p.value}};
}

RateFloorPolicy policy_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1) {
    throw ConfigError(
        "rate_min_policy must be {\"fraction_of_digital_min\": x} or {\"absolute\": r}");
  }
  const auto& [key, value] = *j.items().begin();
  if (!value.is_number()) throw ConfigError("rate_min_policy value must be a number");
  if (key == "fraction_of_digital_min") {
    return RateFloorPolicy::fraction_of_digital_min(value.get<double>());
  }
  if (key == "absolute") return RateFloorPolicy::absolute(value.get<double>());
  throw ConfigError("unknown rate_min_policy kind '" + key + "'");
}

}  // namespace

nlohmann::json to_json(const SystemConfig& c) {
  return {
      {"n_antennas", c.n_antennas},
      {"n_horizontal", c.n_horizontal},
      {"n_vertical", c.n_vertical},
      {"n_rf", c.n_rf},
      {"n_beams", c.n_beams},
      {"n_users", c.n_users},
      {"quant_bits", c.quant_bits},
      {"total_power", c.total_power},
      {"noise_var", c.noise_var},
      {"splitter_noise_var", c.splitter_noise_var},
      {"eh_efficiency", c.eh_efficiency},
      {"eh_min", c.eh_min},
      {"rate_min_policy", policy_to_json(c.rate_min_policy)},
      {"architecture", json_architecture(c.architecture)},
      {"multiple_access", to_string(c.multiple_access)},
      {"antenna_spacing_h", c.antenna_spacing_h},
      {"antenna_spacing_v", c.antenna_spacing_v},
      {"n_paths", c.n_paths},
      {"los_gain_var", c.los_gain_var},
      {"nlos_gain_var", c.nlos_gain_var},
      {"chs_threshold_init", c.chs_threshold_init},
      {"max_iterations", c.max_iterations},
      {"solver_tolerance", c.solver_tolerance},
  };
}

SystemConfig config_from_json(const nlohmann::json& document, SystemConfig base) {
  if (!document.is_object()) throw ConfigError("configuration must be a JSON object");

  using Setter = std::function<void(SystemConfig&, const nlohmann::json&)>;
  auto integer = [](int SystemConfig::*field) -> Setter {
    return [field](SystemConfig& c, const nlohmann::json& v) {
      if (!v.is_number_integer()) throw ConfigError("expected an integer");
      c.*field = v.get<int>();
    };
  };
  auto real = [](double SystemConfig::*field) -> Setter {
    return [field](SystemConfig& c, const nlohmann::json& v) {
      if (!v.is_number()) throw ConfigError("expected a number");
      c.*field = v.get<double>();
    };
  };
  auto text = [](const nlohmann::json& v) {
    if (!v.is_string()) throw ConfigError("expected a string");
    return v.get<std::string>();
  };

  const std::map<std::string, Setter, std::less<>> setters = {
      {"n_antennas", integer(&SystemConfig::n_antennas)},
      {"n_horizontal", integer(&SystemConfig::n_horizontal)},
      {"n_vertical", integer(&SystemConfig::n_vertical)},
      {"n_rf", integer(&SystemConfig::n_rf)},
      {"n_beams", integer(&SystemConfig::n_beams)},
      {"n_users", integer(&SystemConfig::n_users)},
      {"quant_bits", integer(&SystemConfig::quant_bits)},
      {"total_power", real(&SystemConfig::total_power)},
      {"noise_var", real(&SystemConfig::noise_var)},
      {"splitter_noise_var", real(&SystemConfig::splitter_noise_var)},
      {"eh_efficiency", real(&SystemConfig::eh_efficiency)},
      {"eh_min", real(&SystemConfig::eh_min)},
      {"rate_min_policy",
       [](SystemConfig& c, const nlohmann::json& v) { c.rate_min_policy = policy_from_json(v); }},
      {"architecture",
       [&](SystemConfig& c, const nlohmann::json& v) {
         c.architecture = parse_architecture(text(v));
       }},
      {"multiple_access",
       [&](SystemConfig& c, const nlohmann::json& v) {
         c.multiple_access = parse_multiple_access(text(v));
       }},
      {"antenna_spacing_h", real(&SystemConfig::antenna_spacing_h)},
      {"antenna_spacing_v", real(&SystemConfig::antenna_spacing_v)},
      {"n_paths", integer(&SystemConfig::n_paths)},
      {"los_gain_var", real(&SystemConfig::los_gain_var)},
      {"nlos_gain_var", real(&SystemConfig::nlos_gain_var)},
      {"chs_threshold_init", real(&SystemConfig::chs_threshold_init)},
      {"max_iterations", integer(&SystemConfig::max_iterations)},
      {"solver_tolerance", real(&SystemConfig::solver_tolerance)},
  };

  for (const auto& [key, value] : document.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError("unknown configuration key '" + key + "'");
    try {
      it->second(base, value);
    } catch (const ConfigError& e) {
      throw ConfigError(key + ": " + e.what());
    }
  }
  return base;
}

SystemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  nlohmann::json document;
  try {
    in >> document;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(document);
}

}  // namespace mmnoma
