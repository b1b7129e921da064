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

// Exhaustive enumeration oracle. With the sensing-first symmetry reduction
// the first min_sensing_slots slots each pick a shared (tx, rx) pair and
// the remaining slots pick a communication beam or stay idle, giving
// (L_tx L_rx)^M (L_tx + 1)^(S - M) points.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fdisac/error.hpp"
#include "fdisac/solver/solution.hpp"

namespace fdisac::solver {

struct BruteForceOptions {
  double enumeration_cap = 1e8;
};

inline double bruteforce_points(int n_tx, int n_rx, int slots, int min_sensing_slots) {
  return std::pow(static_cast<double>(n_tx) * n_rx, min_sensing_slots) *
         std::pow(static_cast<double>(n_tx) + 1.0, slots - min_sensing_slots);
}

inline Solution solve_bruteforce(const milp::CoefficientTable& coeffs, int slots, int min_sensing_slots,
                                 const BruteForceOptions& options = {}) {
  if (min_sensing_slots > slots) return detail::infeasible(SolverId::brute_force, detail::kTooManySensingSlots);
  const double points = bruteforce_points(coeffs.n_tx, coeffs.n_rx, slots, min_sensing_slots);
  if (points > options.enumeration_cap) {
    throw BudgetExceeded("solve_bruteforce: " + std::to_string(points) + " points exceed the cap of " +
                         std::to_string(options.enumeration_cap));
  }

  const int pairs = coeffs.n_tx * coeffs.n_rx;
  // choice[s] in [0, pairs) for sensing slots (b-major), in [0, L_tx] for
  // the others, where L_tx encodes idle.
  std::vector<int> choice(static_cast<std::size_t>(slots), 0);
  auto radix = [&](int s) { return s < min_sensing_slots ? pairs : coeffs.n_tx + 1; };

  Solution best;
  best.solver_id = SolverId::brute_force;
  best.status = Status::infeasible;
  std::vector<int> best_choice;
  double best_value = -1.0;
  std::uint64_t visited = 0;

  for (;;) {
    ++visited;
    bool feasible = true;
    double value = 0.0;
    for (int s = 0; s < slots && feasible; ++s) {
      const int k = choice[static_cast<std::size_t>(s)];
      if (s < min_sensing_slots) {
        const int b = k / coeffs.n_rx;
        const int c = k % coeffs.n_rx;
        feasible = coeffs.pair_feasible(b, c);
        value += coeffs.rate_per_tx[static_cast<std::size_t>(b)];
      } else if (k < coeffs.n_tx) {
        value += coeffs.rate_per_tx[static_cast<std::size_t>(k)];
      }
    }
    if (feasible && value > best_value) {
      best_value = value;
      best_choice = choice;
    }

    int s = slots - 1;
    while (s >= 0) {
      int& digit = choice[static_cast<std::size_t>(s)];
      if (++digit < radix(s)) break;
      digit = 0;
      --s;
    }
    if (s < 0) break;
  }

  best.nodes = visited;
  if (best_choice.empty()) {
    best.infeasibility_reason = detail::kNoFeasiblePair;
    return best;
  }
  best.status = Status::optimal;
  best.objective_bits = best_value;
  for (int s = 0; s < slots; ++s) {
    const int k = best_choice[static_cast<std::size_t>(s)];
    if (s < min_sensing_slots) {
      best.schedule.push_back(SlotAssignment::shared(k / coeffs.n_rx, k % coeffs.n_rx));
    } else if (k < coeffs.n_tx) {
      best.schedule.push_back(SlotAssignment::comm_only(k));
    } else {
      best.schedule.push_back(SlotAssignment::idle());
    }
  }
  best.per_slot_worst_sinr = detail::worst_sinr_of(best.schedule, coeffs);
  return best;
}

}  // namespace fdisac::solver
