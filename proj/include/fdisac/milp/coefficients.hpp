// Copyright 2026 The fdisac Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Scalar constants of the linearized model. Once beams are one-hot, every
// nonlinear quantity collapses to a per-codeword or per-pair constant
// multiplying a binary, so the whole instance is described by this table.

#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fdisac/beams.hpp"
#include "fdisac/channels.hpp"
#include "fdisac/metrics.hpp"

namespace fdisac::milp {

struct CoefficientTable {
  int n_tx = 0;  // L_tx
  int n_rx = 0;  // L_rx

  std::vector<double> rate_per_tx;  // W T log2(1 + |h_bar^H b|^2), bits
  std::vector<double> comm_gain;    // |h_bar^H b|^2
  Eigen::MatrixXd sense_gain;       // (b, c): |c^H A b|^2
  Eigen::MatrixXd si_leak;          // (b, c): |c^H Q b|^2
  std::vector<double> rx_power;     // ||c||^2
  std::vector<double> rx_noise;     // sigma_sen^2 ||c||^2, watts

  double sinr_threshold = 1.0;
  double psi_sq = 1.0;
  double worst_sq = 0.0;      // (nominal + radius)^2
  double robust_scale = 0.0;  // (Lambda / psi^2) (nominal + radius)^2
  double noise_scale = 0.0;   // Lambda / psi^2

  /// Robust sensing feasibility of the pair (b, c).
  bool pair_feasible(int b, int c) const {
    return robust_margin_holds(sense_gain(b, c), si_leak(b, c), rx_noise[static_cast<std::size_t>(c)],
                               sinr_threshold, psi_sq, worst_sq);
  }

  /// Sensing SINR of (b, c) at the worst-case residual SI.
  double worst_case_sinr(int b, int c) const {
    return psi_sq * sense_gain(b, c) / (worst_sq * si_leak(b, c) + rx_noise[static_cast<std::size_t>(c)]);
  }

  bool any_pair_feasible() const {
    for (int b = 0; b < n_tx; ++b) {
      for (int c = 0; c < n_rx; ++c) {
        if (pair_feasible(b, c)) return true;
      }
    }
    return false;
  }
};

namespace detail {

inline cmat stack_weights(const Codebook& book) {
  cmat m(book.codewords.front().weights.size(), book.size());
  for (int i = 0; i < book.size(); ++i) {
    if (book[i].weights.size() != m.rows()) {
      throw std::invalid_argument("precompute: codewords of one codebook differ in length");
    }
    m.col(i) = book[i].weights;
  }
  return m;
}

}  // namespace detail

inline CoefficientTable precompute(const ChannelSet& channels, const Codebook& tx_book,
                                   const Codebook& rx_book, double bandwidth_hz, double slot_s) {
  if (tx_book.empty() || rx_book.empty()) {
    throw std::invalid_argument("precompute: codebooks must be nonempty");
  }
  if (!(bandwidth_hz > 0.0) || !(slot_s > 0.0)) {
    throw std::invalid_argument("precompute: bandwidth and slot duration must be > 0");
  }
  const cmat tx = detail::stack_weights(tx_book);
  const cmat rx = detail::stack_weights(rx_book);
  if (channels.h_bar.size() != tx.rows() || channels.steering_outer.cols() != tx.rows() ||
      channels.si_matrix.cols() != tx.rows() || channels.steering_outer.rows() != rx.rows() ||
      channels.si_matrix.rows() != rx.rows()) {
    throw std::invalid_argument("precompute: codebook and channel dimensions differ");
  }

  CoefficientTable t;
  t.n_tx = tx_book.size();
  t.n_rx = rx_book.size();

  const cvec comm = tx.adjoint() * channels.h_bar;  // conj(b^H h_bar) = h_bar^H b
  t.comm_gain.resize(static_cast<std::size_t>(t.n_tx));
  t.rate_per_tx.resize(static_cast<std::size_t>(t.n_tx));
  for (int b = 0; b < t.n_tx; ++b) {
    const double g = std::norm(comm(b));
    t.comm_gain[static_cast<std::size_t>(b)] = g;
    t.rate_per_tx[static_cast<std::size_t>(b)] = bandwidth_hz * slot_s * std::log2(1.0 + g);
  }

  const cmat sense = rx.adjoint() * channels.steering_outer * tx;  // (c, b)
  const cmat leak = rx.adjoint() * channels.si_matrix * tx;
  t.sense_gain = sense.cwiseAbs2().transpose();
  t.si_leak = leak.cwiseAbs2().transpose();

  const double sigma_sen = channels.sensing_noise_w();
  t.rx_power.resize(static_cast<std::size_t>(t.n_rx));
  t.rx_noise.resize(static_cast<std::size_t>(t.n_rx));
  for (int c = 0; c < t.n_rx; ++c) {
    t.rx_power[static_cast<std::size_t>(c)] = rx.col(c).squaredNorm();
    t.rx_noise[static_cast<std::size_t>(c)] = sigma_sen * t.rx_power[static_cast<std::size_t>(c)];
  }

  const double psi = channels.sensing.reflection_coeff;
  const double worst = channels.si.worst_case();
  t.sinr_threshold = channels.sensing.sinr_threshold;
  t.psi_sq = psi * psi;
  t.worst_sq = worst * worst;
  t.noise_scale = t.sinr_threshold / t.psi_sq;
  t.robust_scale = t.noise_scale * t.worst_sq;
  return t;
}

}  // namespace fdisac::milp
