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

#include "mmnoma/channel.hpp"

#include <bit>
#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace mmnoma {

void write_channel_csv(const ChannelSet<double>& set, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "user,antenna,re,im\n" << std::setprecision(17);
  for (int k = 0; k < set.n_users(); ++k) {
    const auto& h = set.channels[k];
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      out << k << ',' << i << ',' << h(i).real() << ',' << h(i).imag() << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::uint64_t channel_hash(const ChannelSet<double>& set) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  auto mix = [&hash](double value) {
    auto bits = std::bit_cast<std::uint64_t>(value);
    for (int b = 0; b < 8; ++b) {
      hash ^= (bits >> (8 * b)) & 0xffU;
      hash *= 0x100000001b3ULL;
    }
  };
  for (const auto& h : set.channels) {
    for (Eigen::Index i = 0; i < h.size(); ++i) {
      mix(h(i).real());
      mix(h(i).imag());
    }
  }
  return hash;
}

}  // namespace mmnoma
