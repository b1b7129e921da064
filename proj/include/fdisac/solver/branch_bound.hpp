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

// Depth-first branch-and-bound that works on the MilpModel rows alone.
//
// Each node fixes one binary and runs bound propagation over the linear
// rows to a fixpoint; the logic rows (C6, C9, D, F, G2-G5) then force the
// derived binaries. G1/G6 are dense (one term per beam pair) and are not
// propagated row by row: they are read once into a table of transmit /
// receive pairs that can pass them, and a slot that must sense keeps only
// beams with a surviving partner. Leaves are checked against every row. A
// node is pruned when a row cannot be satisfied or when its objective
// bound cannot beat the incumbent. The bound charges each slot the largest objective
// coefficient among its still-allowed delta variables (at most one delta
// per slot can be one, through C6 and D1); a slot forced to sense only
// counts transmit beams that have some receive partner passing G1/G6.
//
// No LP relaxation is solved.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "fdisac/error.hpp"
#include "fdisac/milp/model.hpp"
#include "fdisac/solver/solution.hpp"

namespace fdisac::solver {

struct BranchBoundOptions {
  std::uint64_t node_limit = 10'000'000;
};

namespace detail {

class BranchAndBound {
 public:
  BranchAndBound(const milp::MilpModel& model, const BranchBoundOptions& options)
      : m_(model), options_(options) {
    const auto n = static_cast<std::size_t>(m_.num_variables());
    lb_.resize(n);
    ub_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      lb_[i] = m_.variables()[i].lower;
      ub_[i] = m_.variables()[i].upper;
    }
    var_rows_.resize(n);
    all_rows_.resize(n);
    for (std::size_t r = 0; r < m_.rows().size(); ++r) {
      const milp::Tag tag = m_.rows()[r].tag;
      const bool dense = tag == milp::Tag::G1 || tag == milp::Tag::G6;
      for (const milp::Term& t : m_.rows()[r].terms) {
        all_rows_[idx(t.var)].push_back(static_cast<int>(r));
        if (!dense) var_rows_[idx(t.var)].push_back(static_cast<int>(r));
      }
    }
    in_queue_.assign(m_.rows().size(), 0);
    objective_.assign(n, 0.0);
    for (const milp::Term& t : m_.objective()) objective_[static_cast<std::size_t>(t.var)] += t.coef;
    read_sensing_rows();
    build_branch_order();
  }

  Solution solve() {
    Solution sol;
    sol.solver_id = SolverId::branch_bound;
    for (std::size_t r = 0; r < m_.rows().size(); ++r) {
      const milp::Tag tag = m_.rows()[r].tag;
      if (tag != milp::Tag::G1 && tag != milp::Tag::G6) enqueue(static_cast<int>(r));
    }
    dirty_.assign(static_cast<std::size_t>(m_.slots()), 1);
    if (propagate()) dfs(0);
    sol.nodes = nodes_;
    if (best_.empty()) {
      sol.status = Status::infeasible;
      sol.infeasibility_reason = m_.min_sensing_slots() > 0 ? kNoFeasiblePair : "model has no feasible point";
      return sol;
    }
    sol.status = Status::optimal;
    sol.objective_bits = incumbent_;
    extract(sol);
    return sol;
  }

 private:
  struct TrailEntry {
    int var;
    double lb;
    double ub;
  };

  static constexpr double kRelTol = 1e-12;
  static constexpr double kInf = std::numeric_limits<double>::infinity();

  std::size_t idx(int v) const { return static_cast<std::size_t>(v); }
  bool fixed(int v) const { return lb_[idx(v)] == ub_[idx(v)]; }

  // G1 gives g per pi; G6 gives the scaled leakage per pi and scaled noise per rho.
  void read_sensing_rows() {
    const int S = m_.slots();
    const int L_tx = m_.n_tx();
    const int L_rx = m_.n_rx();
    gain_.assign(static_cast<std::size_t>(S * L_tx * L_rx), 0.0);
    leak_.assign(gain_.size(), 0.0);
    noise_.assign(static_cast<std::size_t>(S * L_rx), 0.0);
    auto pair_slot = [&](const milp::Variable& v) {
      return static_cast<std::size_t>((v.slot * L_tx + v.tx) * L_rx + v.rx);
    };
    for (const milp::Row& row : m_.rows()) {
      if (row.tag != milp::Tag::G1 && row.tag != milp::Tag::G6) continue;
      for (const milp::Term& t : row.terms) {
        const milp::Variable& v = m_.variable(t.var);
        if (v.family == milp::Family::pi) {
          (row.tag == milp::Tag::G1 ? gain_ : leak_)[pair_slot(v)] = std::abs(t.coef);
        } else if (v.family == milp::Family::rho) {
          noise_[static_cast<std::size_t>(v.slot * L_rx + v.rx)] = std::abs(t.coef);
        }
      }
    }
    pair_ok_.assign(gain_.size(), 0);
    capable_.assign(static_cast<std::size_t>(S * L_tx), 0);
    for (int s = 0; s < S; ++s) {
      for (int b = 0; b < L_tx; ++b) {
        for (int c = 0; c < L_rx; ++c) {
          const std::size_t p = static_cast<std::size_t>((s * L_tx + b) * L_rx + c);
          const double need = leak_[p] + noise_[static_cast<std::size_t>(s * L_rx + c)];
          // same relative slack as the row check at the leaves
          if (gain_[p] >= need - 2.0 * kRelTol * (gain_[p] + need)) {
            pair_ok_[p] = 1;
            capable_[static_cast<std::size_t>(s * L_tx + b)] = 1;
          }
        }
      }
    }
  }

  // zeta, kappa, chi (best objective coefficient first), rho, then any
  // remaining binary that propagation did not settle.
  void build_branch_order() {
    const int S = m_.slots();
    for (int s = 0; s < S; ++s) order_.push_back(m_.zeta(s));
    for (int s = 0; s < S; ++s) order_.push_back(m_.kappa(s));
    for (int s = 0; s < S; ++s) {
      std::vector<int> chis;
      for (int b = 0; b < m_.n_tx(); ++b) chis.push_back(m_.chi(b, s));
      std::stable_sort(chis.begin(), chis.end(), [&](int a, int b) {
        return objective_[idx(m_.delta(m_.variable(a).tx, s))] > objective_[idx(m_.delta(m_.variable(b).tx, s))];
      });
      order_.insert(order_.end(), chis.begin(), chis.end());
    }
    for (int s = 0; s < S; ++s) {
      for (int c = 0; c < m_.n_rx(); ++c) order_.push_back(m_.rho(c, s));
    }
    std::vector<char> listed(static_cast<std::size_t>(m_.num_variables()), 0);
    for (int v : order_) listed[idx(v)] = 1;
    for (int v = 0; v < m_.num_variables(); ++v) {
      if (m_.variable(v).binary && !listed[idx(v)]) order_.push_back(v);
    }
  }

  void enqueue(int r) {
    if (!in_queue_[static_cast<std::size_t>(r)]) {
      in_queue_[static_cast<std::size_t>(r)] = 1;
      queue_.push_back(r);
    }
  }

  void enqueue_rows_of(int v) {
    for (int r : var_rows_[idx(v)]) enqueue(r);
  }

  bool set_bounds(int v, double lo, double hi) {
    if (lo > hi) return false;
    if (lo == lb_[idx(v)] && hi == ub_[idx(v)]) return true;
    trail_.push_back({v, lb_[idx(v)], ub_[idx(v)]});
    lb_[idx(v)] = lo;
    ub_[idx(v)] = hi;
    enqueue_rows_of(v);
    const milp::Variable& var = m_.variable(v);
    if (var.family == milp::Family::zeta || var.family == milp::Family::chi || var.family == milp::Family::rho) {
      dirty_[static_cast<std::size_t>(var.slot)] = 1;
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const TrailEntry e = trail_.back();
      trail_.pop_back();
      lb_[idx(e.var)] = e.lb;
      ub_[idx(e.var)] = e.ub;
    }
  }

  void clear_queue() {
    for (int r : queue_) in_queue_[static_cast<std::size_t>(r)] = 0;
    queue_.clear();
    std::fill(dirty_.begin(), dirty_.end(), 0);
  }

  bool propagate() {
    for (;;) {
      while (!queue_.empty()) {
        const int r = queue_.back();
        queue_.pop_back();
        in_queue_[static_cast<std::size_t>(r)] = 0;
        if (!propagate_row(m_.rows()[static_cast<std::size_t>(r)])) {
          clear_queue();
          return false;
        }
      }
      bool any = false;
      for (int s = 0; s < m_.slots(); ++s) {
        if (!dirty_[static_cast<std::size_t>(s)]) continue;
        dirty_[static_cast<std::size_t>(s)] = 0;
        any = true;
        if (!propagate_pairs(s)) {
          clear_queue();
          return false;
        }
      }
      if (!any && queue_.empty()) return true;
    }
  }

  // A sensing slot needs a (chi, rho) pair passing G1/G6. Beams with no
  // surviving partner are dropped; with no pair left zeta must be 0.
  bool propagate_pairs(int s) {
    const int L_tx = m_.n_tx();
    const int L_rx = m_.n_rx();
    const bool must_sense = lb_[idx(m_.zeta(s))] == 1.0;
    bool any_pair = false;
    std::vector<char>& rx_seen = scratch_;
    rx_seen.assign(static_cast<std::size_t>(L_rx), 0);
    for (int b = 0; b < L_tx; ++b) {
      if (ub_[idx(m_.chi(b, s))] == 0.0) continue;
      bool partner = false;
      const std::size_t base = static_cast<std::size_t>((s * L_tx + b) * L_rx);
      for (int c = 0; c < L_rx; ++c) {
        if (pair_ok_[base + static_cast<std::size_t>(c)] && ub_[idx(m_.rho(c, s))] != 0.0) {
          partner = true;
          rx_seen[static_cast<std::size_t>(c)] = 1;
        }
      }
      any_pair = any_pair || partner;
      if (must_sense && !partner && !set_bounds(m_.chi(b, s), 0.0, 0.0)) return false;
    }
    if (!any_pair) return set_bounds(m_.zeta(s), 0.0, 0.0);
    if (must_sense) {
      for (int c = 0; c < L_rx; ++c) {
        if (!rx_seen[static_cast<std::size_t>(c)] && ub_[idx(m_.rho(c, s))] != 0.0 &&
            !set_bounds(m_.rho(c, s), 0.0, 0.0)) {
          return false;
        }
      }
    }
    return true;
  }

  bool propagate_row(const milp::Row& row) {
    double min_act = 0.0;
    double max_act = 0.0;
    int min_inf = 0;
    int max_inf = 0;
    double magnitude = std::abs(row.rhs);
    for (const milp::Term& t : row.terms) {
      const double l = lb_[idx(t.var)];
      const double u = ub_[idx(t.var)];
      if (t.coef > 0) {
        min_act += t.coef * l;
        if (std::isinf(u)) ++max_inf; else max_act += t.coef * u;
      } else {
        max_act += t.coef * l;
        if (std::isinf(u)) ++min_inf; else min_act += t.coef * u;
      }
      magnitude += std::abs(t.coef) * (std::isinf(u) ? std::abs(l) : std::max(std::abs(l), std::abs(u)));
    }
    const double tol = kRelTol * magnitude;
    const bool upper = row.sense != milp::Sense::ge;  // activity <= rhs
    const bool lower = row.sense != milp::Sense::le;  // activity >= rhs
    if (upper && min_inf == 0 && min_act > row.rhs + tol) return false;
    if (lower && max_inf == 0 && max_act < row.rhs - tol) return false;

    for (const milp::Term& t : row.terms) {
      const int v = t.var;
      if (fixed(v)) continue;
      const double a = t.coef;
      const double l = lb_[idx(v)];
      const double u = ub_[idx(v)];
      if (m_.variable(v).binary) {
        if (upper && min_inf == 0) {
          // raising the variable from its min-activity value costs |a|
          if (min_act + std::abs(a) > row.rhs + tol) {
            if (!(a > 0 ? set_bounds(v, 0.0, 0.0) : set_bounds(v, 1.0, 1.0))) return false;
            continue;
          }
        }
        if (lower && max_inf == 0) {
          if (max_act - std::abs(a) < row.rhs - tol) {
            if (!(a > 0 ? set_bounds(v, 1.0, 1.0) : set_bounds(v, 0.0, 0.0))) return false;
          }
        }
        continue;
      }
      // continuous variable
      double lo = l;
      double hi = u;
      if (upper) {
        const bool own_inf = a < 0 && std::isinf(u);
        if (min_inf == (own_inf ? 1 : 0)) {
          const double rest = min_act - (a > 0 ? a * l : (own_inf ? 0.0 : a * u));
          const double limit = (row.rhs + tol - rest) / a;
          if (a > 0) hi = std::min(hi, limit); else lo = std::max(lo, limit);
        }
      }
      if (lower) {
        const bool own_inf = a > 0 && std::isinf(u);
        if (max_inf == (own_inf ? 1 : 0)) {
          const double rest = max_act - (a > 0 ? (own_inf ? 0.0 : a * u) : a * l);
          const double limit = (row.rhs - tol - rest) / a;
          if (a > 0) lo = std::max(lo, limit); else hi = std::min(hi, limit);
        }
      }
      if (lo > hi) return false;
      const double eps = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::isinf(hi) ? 0.0 : std::abs(hi)));
      const bool tighter = lo > l + eps || hi < u - eps;
      if (tighter && !set_bounds(v, lo, hi)) return false;
    }
    return true;
  }

  double bound() const {
    double total = 0.0;
    for (int s = 0; s < m_.slots(); ++s) {
      const bool must_sense = lb_[idx(m_.zeta(s))] == 1.0;
      double best = 0.0;
      for (int b = 0; b < m_.n_tx(); ++b) {
        const int d = m_.delta(b, s);
        if (ub_[idx(d)] == 0.0) continue;
        if (must_sense && !capable_[static_cast<std::size_t>(s * m_.n_tx() + b)]) continue;
        best = std::max(best, objective_[idx(d)]);
      }
      total += best;
    }
    return total;
  }

  void dfs(std::size_t pos) {
    if (++nodes_ > options_.node_limit) {
      throw BudgetExceeded("solve_branch_bound: node budget of " + std::to_string(options_.node_limit) +
                           " exhausted");
    }
    if (!best_.empty() && bound() <= incumbent_ + kRelTol * std::abs(incumbent_)) return;
    while (pos < order_.size() && fixed(order_[pos])) ++pos;
    if (pos == order_.size()) {
      leaf();
      return;
    }
    const int v = order_[pos];
    for (const double value : {1.0, 0.0}) {
      const std::size_t mark = trail_.size();
      if (set_bounds(v, value, value) && propagate()) dfs(pos + 1);
      undo(mark);
    }
  }

  void leaf() {
    milp::Valuation x(lb_.size());
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::isinf(ub_[i]) ? lb_[i] : ub_[i];
    // Propagated intervals of continuous variables carry the row tolerance;
    // recompute them exactly now that every binary is fixed.
    for (int v = 0; v < m_.num_variables(); ++v) {
      if (!m_.variable(v).binary) x[idx(v)] = exact_value(v, x);
    }
    if (!milp::check_point(m_, x).feasible) return;
    const double value = milp::objective_value(m_, x);
    if (best_.empty() || value > incumbent_) {
      incumbent_ = value;
      best_ = std::move(x);
    }
  }

  // Largest value of a continuous variable that its rows admit with all
  // other variables held at x (the lower bound when unbounded above).
  double exact_value(int v, const milp::Valuation& x) const {
    double lo = m_.variable(v).lower;
    double hi = m_.variable(v).upper;
    for (int r : all_rows_[idx(v)]) {
      const milp::Row& row = m_.rows()[static_cast<std::size_t>(r)];
      double rest = 0.0;
      double a = 0.0;
      for (const milp::Term& t : row.terms) {
        if (t.var == v) a += t.coef; else rest += t.coef * x[idx(t.var)];
      }
      if (a == 0.0) continue;
      const double limit = (row.rhs - rest) / a;
      const bool caps_above = (row.sense != milp::Sense::ge) == (a > 0);
      if (row.sense == milp::Sense::eq || caps_above) hi = std::min(hi, limit);
      if (row.sense == milp::Sense::eq || !caps_above) lo = std::max(lo, limit);
    }
    return std::isinf(hi) ? lo : std::max(lo, hi);
  }

  void extract(Solution& sol) const {
    auto on = [this](int v) { return best_[idx(v)] > 0.5; };
    for (int s = 0; s < m_.slots(); ++s) {
      SlotAssignment slot;
      slot.comm_on = on(m_.kappa(s));
      slot.sense_on = on(m_.zeta(s));
      for (int b = 0; b < m_.n_tx(); ++b) {
        if (on(m_.chi(b, s))) slot.tx_index = b;
      }
      for (int c = 0; c < m_.n_rx(); ++c) {
        if (on(m_.rho(c, s))) slot.rx_index = c;
      }
      sol.schedule.push_back(slot);
      double sinr = std::numeric_limits<double>::quiet_NaN();
      if (slot.sense_on) {
        const std::size_t p = static_cast<std::size_t>((s * m_.n_tx() + *slot.tx_index) * m_.n_rx() + *slot.rx_index);
        // the rows are divided by psi^2/Lambda, so their ratio is SINR / Lambda
        sinr = m_.sinr_threshold() * gain_[p] / (leak_[p] + noise_[static_cast<std::size_t>(s * m_.n_rx() + *slot.rx_index)]);
      }
      sol.per_slot_worst_sinr.push_back(sinr);
    }
  }

  const milp::MilpModel& m_;
  BranchBoundOptions options_;
  std::vector<double> lb_;
  std::vector<double> ub_;
  std::vector<std::vector<int>> var_rows_;
  std::vector<int> queue_;
  std::vector<char> in_queue_;
  std::vector<TrailEntry> trail_;
  std::vector<double> objective_;
  std::vector<double> gain_;
  std::vector<double> leak_;
  std::vector<double> noise_;
  std::vector<char> capable_;
  std::vector<char> pair_ok_;
  std::vector<char> dirty_;
  std::vector<char> scratch_;
  std::vector<std::vector<int>> all_rows_;
  std::vector<int> order_;
  double incumbent_ = -kInf;
  milp::Valuation best_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

inline Solution solve_branch_bound(const milp::MilpModel& model, const BranchBoundOptions& options = {}) {
  return detail::BranchAndBound(model, options).solve();
}

}  // namespace fdisac::solver
