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

// Closed-form optimum. The channel does not change over the horizon, so
// every slot faces the same choice set and the problem separates per slot:
// a sensing slot is best served shared with the highest-rate robust pair,
// any other slot with the highest-rate beam. Exactly min_sensing_slots
// slots sense, placed first.

#pragma once

#include "fdisac/solver/solution.hpp"

namespace fdisac::solver {

inline Solution solve_structured(const milp::CoefficientTable& coeffs, int slots, int min_sensing_slots) {
  if (min_sensing_slots > slots) return detail::infeasible(SolverId::structured, detail::kTooManySensingSlots);

  int best_comm = 0;
  for (int b = 1; b < coeffs.n_tx; ++b) {
    if (coeffs.rate_per_tx[static_cast<std::size_t>(b)] > coeffs.rate_per_tx[static_cast<std::size_t>(best_comm)]) {
      best_comm = b;
    }
  }

  int shared_tx = -1;
  int shared_rx = -1;
  for (int b = 0; b < coeffs.n_tx; ++b) {
    if (shared_tx >= 0 &&
        coeffs.rate_per_tx[static_cast<std::size_t>(b)] <= coeffs.rate_per_tx[static_cast<std::size_t>(shared_tx)]) {
      continue;
    }
    for (int c = 0; c < coeffs.n_rx; ++c) {
      if (coeffs.pair_feasible(b, c)) {
        shared_tx = b;
        shared_rx = c;
        break;
      }
    }
  }
  if (min_sensing_slots > 0 && shared_tx < 0) {
    return detail::infeasible(SolverId::structured, detail::kNoFeasiblePair);
  }

  Solution sol;
  sol.status = Status::optimal;
  sol.solver_id = SolverId::structured;
  sol.schedule.reserve(static_cast<std::size_t>(slots));
  for (int s = 0; s < slots; ++s) {
    if (s < min_sensing_slots) {
      sol.schedule.push_back(SlotAssignment::shared(shared_tx, shared_rx));
      sol.objective_bits += coeffs.rate_per_tx[static_cast<std::size_t>(shared_tx)];
    } else {
      sol.schedule.push_back(SlotAssignment::comm_only(best_comm));
      sol.objective_bits += coeffs.rate_per_tx[static_cast<std::size_t>(best_comm)];
    }
  }
  sol.per_slot_worst_sinr = detail::worst_sinr_of(sol.schedule, coeffs);
  return sol;
}

}  // namespace fdisac::solver
