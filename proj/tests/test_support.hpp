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

// Shared fixtures for the test suites: random small instances and a few
// independent oracles.

#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "fdisac/beams.hpp"
#include "fdisac/channels.hpp"
#include "fdisac/metrics.hpp"
#include "fdisac/milp/coefficients.hpp"

namespace fdisac::testing {

struct RandomInstance {
  Codebook tx;
  Codebook rx;
  ChannelSet channels;
  milp::CoefficientTable coeffs;
  int slots = 1;
  int min_sensing_slots = 0;
  double bandwidth_hz = 200e6;
  double slot_s = 1e-3;
};

/// `count` distinct values from `pool`, in increasing order.
inline std::vector<double> pick_sorted(std::mt19937_64& rng, const std::vector<double>& pool, int count) {
  std::vector<double> out = pool;
  std::shuffle(out.begin(), out.end(), rng);
  out.resize(static_cast<std::size_t>(count));
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<BeamwidthOption> pick_beamwidths(std::mt19937_64& rng, const std::vector<BeamwidthOption>& pool,
                                                    int count) {
  std::vector<BeamwidthOption> out = pool;
  std::shuffle(out.begin(), out.end(), rng);
  out.resize(static_cast<std::size_t>(count));
  return out;
}

/// Small instance with L_tx, L_rx <= max_codewords and S <= max_slots.
/// Thresholds and residual-SI levels straddle the feasibility boundary,
/// and the receive array sits slightly off the transmit axis so that
/// self-interference actually matters.
inline RandomInstance random_instance(std::uint64_t seed, int max_codewords = 6, int max_slots = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(1, 3);
  auto uniform = [&rng](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };

  auto book_shape = [&](int& dirs, int& bws) {
    do {
      dirs = pick(rng);
      bws = std::uniform_int_distribution<int>(1, 2)(rng);
    } while (dirs * bws > max_codewords);
  };
  int tx_dirs = 0, tx_bws = 0, rx_dirs = 0, rx_bws = 0;
  book_shape(tx_dirs, tx_bws);
  book_shape(rx_dirs, rx_bws);

  const ArrayGeometry tx_geom{8, 0.5, 0.0, 0.0};
  const ArrayGeometry rx_geom{16, 0.5, uniform(0.05, 0.3), uniform(0.0, 0.02)};

  RandomInstance inst;
  inst.tx = build_codebook(tx_geom, pick_sorted(rng, default_directions(), tx_dirs),
                           pick_beamwidths(rng, default_tx_beamwidths(), tx_bws), 1.0);
  inst.rx = build_codebook(rx_geom, pick_sorted(rng, default_directions(), rx_dirs),
                           pick_beamwidths(rng, default_rx_beamwidths(), rx_bws), 0.25);

  CommChannelParams comm;
  comm.k_factor = uniform(0.0, 100.0);
  comm.los_angle_deg = uniform(50.0, 130.0);
  const cvec h = rician_channel(tx_geom, comm, rng);

  SensingParams sensing;
  sensing.target_angle_deg = uniform(50.0, 130.0);
  sensing.reflection_coeff = uniform(3e-4, 9e-4);
  sensing.sinr_threshold = uniform(0.2, 6.0);
  inst.slots = std::uniform_int_distribution<int>(1, max_slots)(rng);
  inst.min_sensing_slots = std::uniform_int_distribution<int>(0, inst.slots)(rng);
  sensing.min_sensing_slots = inst.min_sensing_slots;
  SiUncertainty si;
  si.nominal = uniform(0.0, 0.8);
  si.radius = uniform(0.0, 0.2);

  inst.channels = make_channel_set(h, comm.noise_power_dbw, tx_geom, rx_geom, 41.0, sensing, si);
  inst.coeffs = milp::precompute(inst.channels, inst.tx, inst.rx, inst.bandwidth_hz, inst.slot_s);
  return inst;
}

/// Uniformly random well-formed schedule (indices in range, any modes).
inline Schedule random_schedule(std::mt19937_64& rng, int slots, int n_tx, int n_rx) {
  Schedule schedule;
  std::uniform_int_distribution<int> mode(0, 3);
  std::uniform_int_distribution<int> tx(0, n_tx - 1);
  std::uniform_int_distribution<int> rx(0, n_rx - 1);
  for (int s = 0; s < slots; ++s) {
    switch (mode(rng)) {
      case 0: schedule.push_back(SlotAssignment::idle()); break;
      case 1: schedule.push_back(SlotAssignment::comm_only(tx(rng))); break;
      case 2: schedule.push_back(SlotAssignment::sense_only(tx(rng), rx(rng))); break;
      default: schedule.push_back(SlotAssignment::shared(tx(rng), rx(rng))); break;
    }
  }
  return schedule;
}

/// Direct SINR oracle written from scratch with explicit loops.
inline double sinr_by_loops(const ChannelSet& ch, const Codeword& t, const Codeword& r, double upsilon) {
  const Eigen::Index n_rx = ch.steering_outer.rows();
  const Eigen::Index n_tx = ch.steering_outer.cols();
  std::complex<double> signal = 0.0;
  std::complex<double> leak = 0.0;
  for (Eigen::Index m = 0; m < n_rx; ++m) {
    for (Eigen::Index n = 0; n < n_tx; ++n) {
      signal += std::conj(r.weights(m)) * ch.sensing.reflection_coeff * ch.steering_outer(m, n) * t.weights(n);
      leak += std::conj(r.weights(m)) * upsilon * ch.si_matrix(m, n) * t.weights(n);
    }
  }
  double r_norm = 0.0;
  for (Eigen::Index m = 0; m < n_rx; ++m) r_norm += std::norm(r.weights(m));
  return std::norm(signal) / (std::norm(leak) + ch.sensing_noise_w() * r_norm);
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({1e-300, std::abs(a), std::abs(b)});
}

}  // namespace fdisac::testing
