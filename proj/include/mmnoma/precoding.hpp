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

#ifndef MMNOMA_PRECODING_HPP_
#define MMNOMA_PRECODING_HPP_

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "mmnoma/clustering.hpp"
#include "mmnoma/config.hpp"
#include "mmnoma/types.hpp"

namespace mmnoma {

/// Raised when the strongest users' equivalent channels are (numerically)
/// linearly dependent and zero-forcing is undefined.
class SingularEquivalentChannel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kMaxGramCondition = 1e12;

template <typename Scalar>
struct HybridPrecoder {
  ComplexMatrix<Scalar> analog;       // N x N_RF (identity for fully digital)
  VectorList<Scalar> digital;         // one d_g per beam
  VectorList<Scalar> equiv_channels;  // one h_bar_k per user
  Architecture architecture = Architecture::FullyConnected;
};

/// Grid index n in {0, ..., 2^bits - 1} whose phase 2*pi*n/2^bits is
/// closest to `angle` in circular distance.
template <typename Scalar>
int quantize_phase(Scalar angle, int bits) {
  constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  const long levels = 1L << bits;
  Scalar wrapped = std::fmod(angle, two_pi);
  if (wrapped < Scalar(0)) wrapped += two_pi;
  const long n = std::lround(wrapped * static_cast<Scalar>(levels) / two_pi);
  return static_cast<int>(n % levels);
}

/// Unit-modulus grid phasor exp(j*2*pi*n/2^bits).
template <typename Scalar>
Complex<Scalar> grid_phasor(int n, int bits) {
  constexpr Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
  return std::polar(Scalar(1), two_pi * static_cast<Scalar>(n) / static_cast<Scalar>(1L << bits));
}

/**
 * Quantized phase-matched analog precoder built from the cluster heads'
 * channels. Fully connected: every entry of column g has modulus 1/sqrt(N)
 * and the grid phase nearest to the head's per-antenna phase. Sub
 * connected: column g only drives antennas g*M .. (g+1)*M - 1 with modulus
 * 1/sqrt(M); all other entries are exactly zero.
 */
template <typename Scalar>
ComplexMatrix<Scalar> analog_precoder(std::span<const ComplexVector<Scalar>> head_channels,
                                      const SystemConfig& config) {
  const int n = config.n_antennas;
  const int n_rf = static_cast<int>(head_channels.size());
  const int bits = config.quant_bits;
  ComplexMatrix<Scalar> a = ComplexMatrix<Scalar>::Zero(n, n_rf);

  int first = 0;
  int rows = n;
  if (config.architecture == Architecture::SubConnected) {
    if (n % n_rf != 0) throw std::invalid_argument("analog_precoder: N must be a multiple of N_RF");
    rows = n / n_rf;
  } else if (config.architecture != Architecture::FullyConnected) {
    throw std::invalid_argument("analog_precoder: hybrid architecture required");
  }
  const Scalar amplitude = Scalar(1) / std::sqrt(static_cast<Scalar>(rows));
  for (int g = 0; g < n_rf; ++g) {
    const auto& h = head_channels[g];
    if (config.architecture == Architecture::SubConnected) first = g * rows;
    for (int i = first; i < first + rows; ++i) {
      const int idx = quantize_phase<Scalar>(std::arg(h(i)), bits);
      a(i, g) = amplitude * grid_phasor<Scalar>(idx, bits);
    }
  }
  return a;
}

/// h_bar_k = A^H h_k, i.e. h_bar_k^H = h_k^H A.
template <typename Scalar>
VectorList<Scalar> equivalent_channels(std::span<const ComplexVector<Scalar>> channels,
                                       const ComplexMatrix<Scalar>& analog) {
  VectorList<Scalar> out;
  out.reserve(channels.size());
  for (const auto& h : channels) out.push_back(analog.adjoint() * h);
  return out;
}

/// Per beam, the member with the largest equivalent-channel norm (lowest
/// user index on ties).
template <typename Scalar>
std::vector<int> strongest_users(const GroupingPlan& plan,
                                 std::span<const ComplexVector<Scalar>> equiv_channels) {
  std::vector<int> out;
  out.reserve(plan.beams.size());
  for (const auto& beam : plan.beams) {
    int best = beam.front();
    for (int k : beam) {
      const Scalar nk = equiv_channels[k].norm();
      const Scalar nb = equiv_channels[best].norm();
      if (nk > nb || (nk == nb && k < best)) best = k;
    }
    out.push_back(best);
  }
  return out;
}

/**
 * Normalized zero-forcing digital precoder. With H = [h_bar_{m_1} ...
 * h_bar_{m_G}], the raw precoder is H (H^H H)^{-1}; column g is then scaled
 * so that |A d_g| = 1. Column scaling keeps h_bar_{m_i}^H d_j = 0 (i != j).
 *
 * @throws SingularEquivalentChannel if cond(H^H H) exceeds kMaxGramCondition.
 */
template <typename Scalar>
VectorList<Scalar> digital_zf(std::span<const ComplexVector<Scalar>> strongest_equiv,
                              const ComplexMatrix<Scalar>& analog) {
  const int n_beams = static_cast<int>(strongest_equiv.size());
  const Eigen::Index dim = strongest_equiv.front().size();
  ComplexMatrix<Scalar> h_bar(dim, n_beams);
  for (int g = 0; g < n_beams; ++g) h_bar.col(g) = strongest_equiv[g];

  const ComplexMatrix<Scalar> gram = h_bar.adjoint() * h_bar;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Scalar>> eig(gram, Eigen::EigenvaluesOnly);
  const Scalar lo = eig.eigenvalues().minCoeff();
  const Scalar hi = eig.eigenvalues().maxCoeff();
  if (!(lo > Scalar(0)) || hi / lo > static_cast<Scalar>(kMaxGramCondition)) {
    throw SingularEquivalentChannel("equivalent channel Gram matrix is singular");
  }
  const ComplexMatrix<Scalar> raw = gram.ldlt().solve(h_bar.adjoint()).adjoint();

  VectorList<Scalar> out;
  out.reserve(n_beams);
  for (int g = 0; g < n_beams; ++g) {
    const ComplexVector<Scalar> d = raw.col(g);
    out.push_back(d / (analog * d).norm());
  }
  return out;
}

/// Stable sort of each beam by |h_bar_k^H d_g| in descending order.
template <typename Scalar>
GroupingPlan sic_order(GroupingPlan plan, std::span<const ComplexVector<Scalar>> equiv_channels,
                       std::span<const ComplexVector<Scalar>> digital) {
  for (int g = 0; g < plan.n_beams(); ++g) {
    auto& beam = plan.beams[g];
    std::vector<Scalar> gain(beam.size());
    std::vector<std::size_t> idx(beam.size());
    for (std::size_t i = 0; i < beam.size(); ++i) {
      gain[i] = std::abs(equiv_channels[beam[i]].dot(digital[g]));
      idx[i] = i;
    }
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return gain[a] > gain[b]; });
    std::vector<int> sorted;
    sorted.reserve(beam.size());
    for (auto i : idx) sorted.push_back(beam[i]);
    beam = std::move(sorted);
  }
  plan.sic_order_applied = true;
  return plan;
}

/// Fully digital baseline: A = I_N, one beam per user, ZF over all users.
template <typename Scalar>
HybridPrecoder<Scalar> fully_digital_precoder(std::span<const ComplexVector<Scalar>> channels) {
  HybridPrecoder<Scalar> out;
  const Eigen::Index n = channels.front().size();
  out.analog = ComplexMatrix<Scalar>::Identity(n, n);
  out.equiv_channels.assign(channels.begin(), channels.end());
  out.digital = digital_zf<Scalar>(channels, out.analog);
  out.architecture = Architecture::FullyDigital;
  return out;
}

/// CSV with columns matrix,row,col,re,im for the analog matrix ("A") and
/// the digital vectors stacked as columns ("D").
void write_precoder_csv(const HybridPrecoder<double>& precoder, const std::filesystem::path& path);

}  // namespace mmnoma

#endif  // MMNOMA_PRECODING_HPP_
