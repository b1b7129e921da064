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

// Physical-layer metrics evaluated straight from codewords and channels.
// These are the nonlinear reference the linearized model is checked
// against.

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdisac/beams.hpp"
#include "fdisac/channels.hpp"

namespace fdisac {

/// What a single timeslot does and with which beams.
struct SlotAssignment {
  bool comm_on = false;
  bool sense_on = false;
  std::optional<int> tx_index;
  std::optional<int> rx_index;

  bool active() const { return comm_on || sense_on; }

  /// tx beam present iff the slot is active, rx beam present iff sensing.
  bool well_formed() const {
    return tx_index.has_value() == active() && rx_index.has_value() == sense_on;
  }

  static SlotAssignment idle() { return {}; }
  static SlotAssignment comm_only(int tx) { return {true, false, tx, std::nullopt}; }
  static SlotAssignment sense_only(int tx, int rx) { return {false, true, tx, rx}; }
  static SlotAssignment shared(int tx, int rx) { return {true, true, tx, rx}; }

  friend bool operator==(const SlotAssignment&, const SlotAssignment&) = default;
};

using Schedule = std::vector<SlotAssignment>;

/// W*T*log2(1 + |h_bar^H w|^2) in bits.
inline double comm_rate_bits(const cvec& h_bar, const Codeword& tx, double bandwidth_hz, double slot_s) {
  if (!(bandwidth_hz > 0.0) || !(slot_s > 0.0)) {
    throw std::invalid_argument("comm_rate_bits: bandwidth and slot duration must be > 0");
  }
  if (h_bar.size() != tx.weights.size()) {
    throw std::invalid_argument("comm_rate_bits: channel and codeword lengths differ");
  }
  return bandwidth_hz * slot_s * std::log2(1.0 + std::norm(h_bar.dot(tx.weights)));
}

/// |r^H psi A t|^2 / (|r^H upsilon Q t|^2 + sigma_sen^2 ||r||^2).
inline double sensing_sinr(const ChannelSet& channels, const Codeword& tx, const Codeword& rx,
                           double upsilon) {
  const double psi = channels.sensing.reflection_coeff;
  const double signal = std::norm(psi * rx.weights.dot(channels.steering_outer * tx.weights));
  const double interference =
      std::norm(upsilon * rx.weights.dot(channels.si_matrix * tx.weights));
  const double noise = channels.sensing_noise_w() * rx.weights.squaredNorm();
  return signal / (interference + noise);
}

inline double sensing_sinr(const ChannelSet& channels, const Codebook& tx_book, const Codebook& rx_book,
                           const SlotAssignment& slot, double upsilon) {
  if (!slot.sense_on || !slot.tx_index || !slot.rx_index) {
    throw std::invalid_argument("sensing_sinr: slot is not a sensing slot");
  }
  return sensing_sinr(channels, tx_book[*slot.tx_index], rx_book[*slot.rx_index], upsilon);
}

/// Robust SINR test at the worst case upsilon = nominal + radius:
///   gain >= (lambda/psi^2) * (worst^2 * leak + sigma_sen^2 ||r||^2)
/// with gain = |r^H A t|^2 and leak = |r^H Q t|^2. Shared by the metric
/// path and the coefficient table so both evaluate the same expression.
inline bool robust_margin_holds(double gain, double leak, double rx_noise_w, double sinr_threshold,
                                double psi_sq, double worst_sq) {
  return gain >= (sinr_threshold / psi_sq) * (worst_sq * leak + rx_noise_w);
}

inline bool robust_sinr_feasible(const ChannelSet& channels, const Codeword& tx, const Codeword& rx) {
  const double gain = std::norm(rx.weights.dot(channels.steering_outer * tx.weights));
  const double leak = std::norm(rx.weights.dot(channels.si_matrix * tx.weights));
  const double rx_noise = channels.sensing_noise_w() * rx.weights.squaredNorm();
  const double psi = channels.sensing.reflection_coeff;
  const double worst = channels.si.worst_case();
  return robust_margin_holds(gain, leak, rx_noise, channels.sensing.sinr_threshold, psi * psi,
                             worst * worst);
}

inline bool robust_sinr_feasible(const ChannelSet& channels, const Codebook& tx_book,
                                 const Codebook& rx_book, const SlotAssignment& slot) {
  if (!slot.sense_on || !slot.tx_index || !slot.rx_index) {
    throw std::invalid_argument("robust_sinr_feasible: slot is not a sensing slot");
  }
  return robust_sinr_feasible(channels, tx_book[*slot.tx_index], rx_book[*slot.rx_index]);
}

/// SINR at the upper edge of the uncertainty interval.
inline double worst_case_sinr(const ChannelSet& channels, const Codeword& tx, const Codeword& rx) {
  return sensing_sinr(channels, tx, rx, channels.si.worst_case());
}

struct ScheduleEvaluation {
  double total_bits = 0.0;
  bool feasible = true;
  std::string violated_tag;  // empty when feasible
  int violated_slot = -1;    // -1 for horizon-wide constraints
  std::vector<double> worst_case_sinr;  // NaN on non-sensing slots
};

/// Throughput and full feasibility check of a schedule against the
/// original (nonlinear) constraint set.
inline ScheduleEvaluation evaluate_schedule(const ChannelSet& channels, const Codebook& tx_book,
                                            const Codebook& rx_book, const Schedule& schedule,
                                            double bandwidth_hz, double slot_s, int min_sensing_slots,
                                            int slots) {
  if (static_cast<int>(schedule.size()) != slots) {
    throw std::invalid_argument("evaluate_schedule: schedule length differs from the horizon");
  }
  ScheduleEvaluation eval;
  eval.worst_case_sinr.assign(schedule.size(), std::numeric_limits<double>::quiet_NaN());
  auto fail = [&eval](const char* tag, int slot) {
    if (eval.feasible) {
      eval.feasible = false;
      eval.violated_tag = tag;
      eval.violated_slot = slot;
    }
  };

  int active = 0;
  int sensing = 0;
  std::vector<bool> indices_ok(schedule.size(), false);
  for (int s = 0; s < slots; ++s) {
    const SlotAssignment& slot = schedule[static_cast<std::size_t>(s)];
    const bool tx_ok = slot.tx_index.has_value() == slot.active() &&
                       (!slot.tx_index || (*slot.tx_index >= 0 && *slot.tx_index < tx_book.size()));
    const bool rx_ok = slot.rx_index.has_value() == slot.sense_on &&
                       (!slot.rx_index || (*slot.rx_index >= 0 && *slot.rx_index < rx_book.size()));
    if (!tx_ok) fail("C6", s);
    if (!rx_ok) fail("C9", s);
    if (!tx_ok || !rx_ok) continue;
    indices_ok[static_cast<std::size_t>(s)] = true;
    active += slot.active() ? 1 : 0;
    sensing += slot.sense_on ? 1 : 0;
    if (slot.comm_on) {
      eval.total_bits += comm_rate_bits(channels.h_bar, tx_book[*slot.tx_index], bandwidth_hz, slot_s);
    }
  }
  if (active > slots) fail("C4", -1);
  if (sensing < min_sensing_slots) fail("C13", -1);
  for (int s = 0; s < slots; ++s) {
    const SlotAssignment& slot = schedule[static_cast<std::size_t>(s)];
    if (!slot.sense_on || !indices_ok[static_cast<std::size_t>(s)]) continue;
    const Codeword& t = tx_book[*slot.tx_index];
    const Codeword& r = rx_book[*slot.rx_index];
    eval.worst_case_sinr[static_cast<std::size_t>(s)] = worst_case_sinr(channels, t, r);
    if (!robust_sinr_feasible(channels, t, r)) fail("C12", s);
  }
  return eval;
}

}  // namespace fdisac
