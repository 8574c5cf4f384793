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

#ifndef MMNOMA_CHANNEL_HPP_
#define MMNOMA_CHANNEL_HPP_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "mmnoma/config.hpp"
#include "mmnoma/types.hpp"

namespace mmnoma {

/// One propagation path: complex gain, azimuth and elevation of departure.
template <typename Scalar>
struct PathParams {
  Complex<Scalar> gain;
  Scalar azimuth = 0;
  Scalar elevation = 0;
};

template <typename Scalar>
struct UserChannel {
  ComplexVector<Scalar> h;
  std::vector<PathParams<Scalar>> paths;
};

/// Channel vectors of all K users of one realization.
template <typename Scalar>
struct ChannelSet {
  VectorList<Scalar> channels;
  std::vector<std::vector<PathParams<Scalar>>> paths;
  std::uint64_t rng_seed = 0;

  int n_users() const { return static_cast<int>(channels.size()); }
};

/**
 * Planar array response a_az(azimuth) (x) a_el(elevation).
 *
 * Entry (i, j) of the Kronecker product sits at index i*n2 + j and equals
 * exp(j*2*pi*(i*dh*sin(az) + j*dv*sin(el))) / sqrt(n1*n2), so the vector
 * has unit Euclidean norm for any angles.
 */
template <typename Scalar>
ComplexVector<Scalar> steering_vector(Scalar azimuth, Scalar elevation, int n1, int n2,
                                      Scalar spacing_h, Scalar spacing_v) {
  constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  ComplexVector<Scalar> az(n1);
  ComplexVector<Scalar> el(n2);
  const Scalar az_phase = two_pi * spacing_h * std::sin(azimuth);
  const Scalar el_phase = two_pi * spacing_v * std::sin(elevation);
  for (int i = 0; i < n1; ++i) az(i) = std::polar(Scalar(1), az_phase * i);
  for (int j = 0; j < n2; ++j) el(j) = std::polar(Scalar(1), el_phase * j);

  ComplexVector<Scalar> a(n1 * n2);
  for (int i = 0; i < n1; ++i) a.segment(i * n2, n2) = az(i) * el;
  return a / std::sqrt(static_cast<Scalar>(n1 * n2));
}

/// h = sqrt(N/L) * sum_l gain_l * a(az_l, el_l).
template <typename Scalar>
ComplexVector<Scalar> channel_from_paths(std::span<const PathParams<Scalar>> paths,
                                         const SystemConfig& config) {
  const int n = config.n_antennas;
  ComplexVector<Scalar> h = ComplexVector<Scalar>::Zero(n);
  for (const auto& path : paths) {
    h += path.gain * steering_vector<Scalar>(path.azimuth, path.elevation, config.n_horizontal,
                                             config.n_vertical,
                                             static_cast<Scalar>(config.antenna_spacing_h),
                                             static_cast<Scalar>(config.antenna_spacing_v));
  }
  return h * std::sqrt(static_cast<Scalar>(n) / static_cast<Scalar>(paths.size()));
}

/**
 * Draws one user's multipath channel. Path 0 is the LoS component with gain
 * variance `los_gain_var`, the rest use `nlos_gain_var`; real and imaginary
 * parts are independent with half the variance each. Angles are uniform on
 * the open interval (-pi, pi).
 */
template <typename Scalar, class Rng>
UserChannel<Scalar> generate_user_channel(Rng& rng, const SystemConfig& config) {
  constexpr Scalar pi = std::numbers::pi_v<Scalar>;
  std::uniform_real_distribution<Scalar> angle(-pi, pi);
  auto open_angle = [&] {
    Scalar value;
    do {
      value = angle(rng);
    } while (value == -pi);
    return value;
  };

  UserChannel<Scalar> out;
  out.paths.reserve(config.n_paths);
  for (int l = 0; l < config.n_paths; ++l) {
    const double var = l == 0 ? config.los_gain_var : config.nlos_gain_var;
    std::normal_distribution<Scalar> part(Scalar(0), static_cast<Scalar>(std::sqrt(var / 2)));
    PathParams<Scalar> path;
    const Scalar re = part(rng);
    const Scalar im = part(rng);
    path.gain = {re, im};
    path.azimuth = open_angle();
    path.elevation = open_angle();
    out.paths.push_back(path);
  }
  out.h = channel_from_paths<Scalar>(out.paths, config);
  return out;
}

/// Independent generator for user `user` of realization `seed`.
inline std::mt19937_64 user_stream(std::uint64_t seed, int user) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(user), 0x6d6d6e6fU};
  return std::mt19937_64(seq);
}

/// K independent user channels; user k draws from user_stream(seed, k), so
/// the set is a pure function of (seed, config).
template <typename Scalar>
ChannelSet<Scalar> generate_scenario(std::uint64_t seed, const SystemConfig& config) {
  ChannelSet<Scalar> set;
  set.rng_seed = seed;
  set.channels.reserve(config.n_users);
  set.paths.reserve(config.n_users);
  for (int k = 0; k < config.n_users; ++k) {
    auto rng = user_stream(seed, k);
    auto user = generate_user_channel<Scalar>(rng, config);
    set.channels.push_back(std::move(user.h));
    set.paths.push_back(std::move(user.paths));
  }
  return set;
}

/// CSV with columns user,antenna,re,im.
void write_channel_csv(const ChannelSet<double>& channels, const std::filesystem::path& path);

/// Order-sensitive FNV-1a hash of every channel coefficient.
std::uint64_t channel_hash(const ChannelSet<double>& channels);

}  // namespace mmnoma

#endif  // MMNOMA_CHANNEL_HPP_
