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

#include "mmnoma/precoding.hpp"

#include <fstream>
#include <iomanip>

namespace mmnoma {

void write_precoder_csv(const HybridPrecoder<double>& precoder, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "matrix,row,col,re,im\n" << std::setprecision(17);
  const auto& a = precoder.analog;
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) {
      out << "A," << r << ',' << c << ',' << a(r, c).real() << ',' << a(r, c).imag() << '\n';
    }
  }
  for (std::size_t g = 0; g < precoder.digital.size(); ++g) {
    const auto& d = precoder.digital[g];
    for (Eigen::Index r = 0; r < d.size(); ++r) {
      out << "D," << r << ',' << g << ',' << d(r).real() << ',' << d(r).imag() << '\n';
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace mmnoma
