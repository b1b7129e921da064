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

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fdisac/metrics.hpp"
#include "fdisac/milp/coefficients.hpp"

namespace fdisac::solver {

enum class Status { optimal, infeasible };
enum class SolverId { structured, branch_bound, brute_force };

inline const char* to_string(Status s) { return s == Status::optimal ? "optimal" : "infeasible"; }

inline const char* to_string(SolverId id) {
  switch (id) {
    case SolverId::structured: return "structured";
    case SolverId::branch_bound: return "branch_bound";
    case SolverId::brute_force: return "brute_force";
  }
  return "?";
}

struct Solution {
  Schedule schedule;
  double objective_bits = 0.0;
  Status status = Status::infeasible;
  std::vector<double> per_slot_worst_sinr;  // NaN on non-sensing slots
  SolverId solver_id = SolverId::structured;
  std::string infeasibility_reason;
  std::uint64_t nodes = 0;  // search nodes or enumerated points

  bool optimal() const { return status == Status::optimal; }
};

inline bool objectives_agree(double a, double b, double rel_tol = 1e-9) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= rel_tol * scale;
}

/// Objective-level certificate: same status and, when optimal, objectives
/// equal to 1e-9 relative error. Different argmax schedules still certify.
inline bool certify(const Solution& a, const Solution& b) {
  if (a.status != b.status) return false;
  if (a.status == Status::infeasible) return true;
  return objectives_agree(a.objective_bits, b.objective_bits);
}

namespace detail {

inline std::vector<double> worst_sinr_of(const Schedule& schedule, const milp::CoefficientTable& coeffs) {
  std::vector<double> out(schedule.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    const SlotAssignment& slot = schedule[s];
    if (slot.sense_on) out[s] = coeffs.worst_case_sinr(*slot.tx_index, *slot.rx_index);
  }
  return out;
}

inline Solution infeasible(SolverId id, std::string reason) {
  Solution sol;
  sol.status = Status::infeasible;
  sol.solver_id = id;
  sol.infeasibility_reason = std::move(reason);
  return sol;
}

inline const char* kNoFeasiblePair = "no transmit/receive pair meets the robust SINR threshold";
inline const char* kTooManySensingSlots = "min_sensing_slots exceeds the number of slots";

}  // namespace detail

}  // namespace fdisac::solver
