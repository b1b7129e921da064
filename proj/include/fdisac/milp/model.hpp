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

// The mixed-integer linear model. Products of binaries are replaced by
// auxiliary binaries tied down with three inequalities each (delta = chi *
// kappa, pi = chi * rho), the OR defining an active slot becomes four
// inequalities, and the robust SINR constraint becomes the pair of rows G1
// and G6 around the continuous slack z. Both are written divided by
// |psi|^2/Lambda so their coefficients are of order one.
//
// Variable layout (block per family, slot-major inside a block):
//   kappa[S] zeta[S] gamma[S] chi[S][L_tx] rho[S][L_rx] delta[S][L_tx]
//   pi[S][L_tx][L_rx] z[S]

#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdisac/metrics.hpp"
#include "fdisac/milp/coefficients.hpp"

namespace fdisac::milp {

enum class Family { kappa, zeta, gamma, chi, rho, delta, pi, z };

enum class Tag { C4, C6, C9, C13, D1, D2, D3, D4, E1, F1, F2, F3, F4, G1, G2, G3, G4, G5, G6 };

inline const char* to_string(Tag tag) {
  switch (tag) {
    case Tag::C4: return "C4";
    case Tag::C6: return "C6";
    case Tag::C9: return "C9";
    case Tag::C13: return "C13";
    case Tag::D1: return "D1";
    case Tag::D2: return "D2";
    case Tag::D3: return "D3";
    case Tag::D4: return "D4";
    case Tag::E1: return "E1";
    case Tag::F1: return "F1";
    case Tag::F2: return "F2";
    case Tag::F3: return "F3";
    case Tag::F4: return "F4";
    case Tag::G1: return "G1";
    case Tag::G2: return "G2";
    case Tag::G3: return "G3";
    case Tag::G4: return "G4";
    case Tag::G5: return "G5";
    case Tag::G6: return "G6";
  }
  return "?";
}

inline constexpr Tag kAllTags[] = {Tag::C4, Tag::C6, Tag::C9, Tag::C13, Tag::D1, Tag::D2, Tag::D3,
                                   Tag::D4, Tag::E1, Tag::F1, Tag::F2, Tag::F3, Tag::F4, Tag::G1,
                                   Tag::G2, Tag::G3, Tag::G4, Tag::G5, Tag::G6};

enum class Sense { le, ge, eq };

struct Variable {
  std::string name;
  Family family = Family::kappa;
  bool binary = true;
  int slot = 0;
  int tx = -1;
  int rx = -1;
  double lower = 0.0;
  double upper = 1.0;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Row {
  Tag tag = Tag::C4;
  std::string name;
  std::vector<Term> terms;
  Sense sense = Sense::le;
  double rhs = 0.0;
};

using Valuation = std::vector<double>;

class MilpModel {
 public:
  MilpModel(int slots, int n_tx, int n_rx, int min_sensing_slots)
      : slots_(slots), n_tx_(n_tx), n_rx_(n_rx), min_sensing_slots_(min_sensing_slots) {}

  int slots() const { return slots_; }
  int n_tx() const { return n_tx_; }
  int n_rx() const { return n_rx_; }
  int min_sensing_slots() const { return min_sensing_slots_; }

  int kappa(int s) const { return s; }
  int zeta(int s) const { return slots_ + s; }
  int gamma(int s) const { return 2 * slots_ + s; }
  int chi(int b, int s) const { return 3 * slots_ + s * n_tx_ + b; }
  int rho(int c, int s) const { return chi_end() + s * n_rx_ + c; }
  int delta(int b, int s) const { return rho_end() + s * n_tx_ + b; }
  int pi(int b, int c, int s) const { return delta_end() + (s * n_tx_ + b) * n_rx_ + c; }
  int z(int s) const { return pi_end() + s; }

  int num_variables() const { return pi_end() + slots_; }
  int num_binaries() const { return pi_end(); }
  int num_continuous() const { return slots_; }

  const std::vector<Variable>& variables() const { return variables_; }
  const Variable& variable(int i) const { return variables_.at(static_cast<std::size_t>(i)); }
  const std::vector<Term>& objective() const { return objective_; }
  const std::vector<Row>& rows() const { return rows_; }

  std::size_t count_rows(Tag tag) const {
    std::size_t n = 0;
    for (const Row& r : rows_) n += r.tag == tag ? 1 : 0;
    return n;
  }

  /// |psi|^2 / Lambda. G1 and G6 are stated divided by this factor, which
  /// brings their coefficients to order one.
  double sensing_row_scale() const { return sensing_row_scale_; }
  double sinr_threshold() const { return sinr_threshold_; }

 private:
  friend MilpModel build_milp(const CoefficientTable&, int, int);

  int chi_end() const { return 3 * slots_ + slots_ * n_tx_; }
  int rho_end() const { return chi_end() + slots_ * n_rx_; }
  int delta_end() const { return rho_end() + slots_ * n_tx_; }
  int pi_end() const { return delta_end() + slots_ * n_tx_ * n_rx_; }

  int slots_;
  int n_tx_;
  int n_rx_;
  int min_sensing_slots_;
  double sensing_row_scale_ = 1.0;
  double sinr_threshold_ = 1.0;
  std::vector<Variable> variables_;
  std::vector<Term> objective_;
  std::vector<Row> rows_;
};

namespace detail {

inline std::string row_name(Tag tag, int s, int b = -1, int c = -1) {
  std::string name = std::string(to_string(tag)) + "_s" + std::to_string(s);
  if (b >= 0) name += "_b" + std::to_string(b);
  if (c >= 0) name += "_c" + std::to_string(c);
  return name;
}

}  // namespace detail

inline MilpModel build_milp(const CoefficientTable& coeffs, int slots, int min_sensing_slots) {
  if (slots < 1) throw std::invalid_argument("build_milp: need at least one slot");
  if (min_sensing_slots < 0) throw std::invalid_argument("build_milp: min_sensing_slots must be >= 0");
  if (min_sensing_slots > slots) {
    throw std::invalid_argument("build_milp: min_sensing_slots exceeds the number of slots");
  }
  if (coeffs.n_tx < 1 || coeffs.n_rx < 1) throw std::invalid_argument("build_milp: empty codebooks");

  const int S = slots;
  const int L_tx = coeffs.n_tx;
  const int L_rx = coeffs.n_rx;
  MilpModel m(S, L_tx, L_rx, min_sensing_slots);
  m.sinr_threshold_ = coeffs.sinr_threshold;
  m.sensing_row_scale_ = coeffs.psi_sq / coeffs.sinr_threshold;

  auto& vars = m.variables_;
  vars.resize(static_cast<std::size_t>(m.num_variables()));
  auto set_var = [&vars](int i, std::string name, Family f, int s, int b = -1, int c = -1) {
    Variable& v = vars[static_cast<std::size_t>(i)];
    v.name = std::move(name);
    v.family = f;
    v.slot = s;
    v.tx = b;
    v.rx = c;
  };
  for (int s = 0; s < S; ++s) {
    const std::string ss = "_s" + std::to_string(s);
    set_var(m.kappa(s), "kappa" + ss, Family::kappa, s);
    set_var(m.zeta(s), "zeta" + ss, Family::zeta, s);
    set_var(m.gamma(s), "gamma" + ss, Family::gamma, s);
    for (int b = 0; b < L_tx; ++b) {
      const std::string bs = "_b" + std::to_string(b);
      set_var(m.chi(b, s), "chi" + bs + ss, Family::chi, s, b);
      set_var(m.delta(b, s), "delta" + bs + ss, Family::delta, s, b);
      for (int c = 0; c < L_rx; ++c) {
        set_var(m.pi(b, c, s), "pi" + bs + "_c" + std::to_string(c) + ss, Family::pi, s, b, c);
      }
    }
    for (int c = 0; c < L_rx; ++c) {
      set_var(m.rho(c, s), "rho_c" + std::to_string(c) + ss, Family::rho, s, -1, c);
    }
    set_var(m.z(s), "z" + ss, Family::z, s);
    Variable& z = vars[static_cast<std::size_t>(m.z(s))];
    z.binary = false;
    z.upper = std::numeric_limits<double>::infinity();
  }

  for (int s = 0; s < S; ++s) {
    for (int b = 0; b < L_tx; ++b) {
      m.objective_.push_back({m.delta(b, s), coeffs.rate_per_tx[static_cast<std::size_t>(b)]});
    }
  }

  auto& rows = m.rows_;
  auto add = [&rows](Tag tag, std::string name, std::vector<Term> terms, Sense sense, double rhs) {
    rows.push_back(Row{tag, std::move(name), std::move(terms), sense, rhs});
  };

  {
    std::vector<Term> terms;
    for (int s = 0; s < S; ++s) terms.push_back({m.gamma(s), 1.0});
    add(Tag::C4, "C4", std::move(terms), Sense::le, static_cast<double>(S));
  }
  {
    std::vector<Term> terms;
    for (int s = 0; s < S; ++s) terms.push_back({m.zeta(s), 1.0});
    add(Tag::C13, "C13", std::move(terms), Sense::ge, static_cast<double>(min_sensing_slots));
  }

  for (int s = 0; s < S; ++s) {
    // one transmit beam per active slot, one receive beam per sensing slot
    std::vector<Term> c6;
    for (int b = 0; b < L_tx; ++b) c6.push_back({m.chi(b, s), 1.0});
    c6.push_back({m.gamma(s), -1.0});
    add(Tag::C6, detail::row_name(Tag::C6, s), std::move(c6), Sense::eq, 0.0);

    std::vector<Term> c9;
    for (int c = 0; c < L_rx; ++c) c9.push_back({m.rho(c, s), 1.0});
    c9.push_back({m.zeta(s), -1.0});
    add(Tag::C9, detail::row_name(Tag::C9, s), std::move(c9), Sense::eq, 0.0);

    // delta = chi AND kappa
    for (int b = 0; b < L_tx; ++b) {
      const int d = m.delta(b, s);
      const int x = m.chi(b, s);
      add(Tag::D1, detail::row_name(Tag::D1, s, b), {{d, 1.0}, {x, -1.0}}, Sense::le, 0.0);
      add(Tag::D2, detail::row_name(Tag::D2, s, b), {{d, 1.0}, {m.kappa(s), -1.0}}, Sense::le, 0.0);
      add(Tag::D3, detail::row_name(Tag::D3, s, b), {{d, 1.0}, {x, -1.0}, {m.kappa(s), -1.0}}, Sense::ge,
          -1.0);
      add(Tag::D4, detail::row_name(Tag::D4, s, b), {{d, 1.0}}, Sense::ge, 0.0);
    }

    add(Tag::E1, detail::row_name(Tag::E1, s), {{m.z(s), 1.0}}, Sense::ge, 0.0);

    // gamma = kappa OR zeta
    add(Tag::F1, detail::row_name(Tag::F1, s), {{m.gamma(s), 1.0}, {m.kappa(s), -1.0}, {m.zeta(s), -1.0}},
        Sense::le, 0.0);
    add(Tag::F2, detail::row_name(Tag::F2, s), {{m.gamma(s), 1.0}, {m.kappa(s), -1.0}}, Sense::ge, 0.0);
    add(Tag::F3, detail::row_name(Tag::F3, s), {{m.gamma(s), 1.0}, {m.zeta(s), -1.0}}, Sense::ge, 0.0);
    add(Tag::F4, detail::row_name(Tag::F4, s), {{m.gamma(s), 1.0}}, Sense::le, 1.0);

    // G1: sum g_bc pi_bcs - z_s >= 0
    std::vector<Term> g1;
    for (int b = 0; b < L_tx; ++b) {
      for (int c = 0; c < L_rx; ++c) {
        const double g = coeffs.sense_gain(b, c);
        if (g != 0.0) g1.push_back({m.pi(b, c, s), g});
      }
    }
    g1.push_back({m.z(s), -1.0});
    add(Tag::G1, detail::row_name(Tag::G1, s), std::move(g1), Sense::ge, 0.0);

    // pi = chi AND rho
    for (int b = 0; b < L_tx; ++b) {
      for (int c = 0; c < L_rx; ++c) {
        const int p = m.pi(b, c, s);
        add(Tag::G2, detail::row_name(Tag::G2, s, b, c), {{p, 1.0}, {m.chi(b, s), -1.0}}, Sense::le, 0.0);
        add(Tag::G3, detail::row_name(Tag::G3, s, b, c), {{p, 1.0}, {m.rho(c, s), -1.0}}, Sense::le, 0.0);
        add(Tag::G4, detail::row_name(Tag::G4, s, b, c), {{p, 1.0}, {m.chi(b, s), -1.0}, {m.rho(c, s), -1.0}},
            Sense::ge, -1.0);
        add(Tag::G5, detail::row_name(Tag::G5, s, b, c), {{p, 1.0}}, Sense::ge, 0.0);
      }
    }

    // G6: z_s - robust_scale * sum l_bc pi_bcs - noise_scale * sum sigma^2 ||c||^2 rho_cs >= 0
    std::vector<Term> g6;
    g6.push_back({m.z(s), 1.0});
    for (int b = 0; b < L_tx; ++b) {
      for (int c = 0; c < L_rx; ++c) {
        const double l = coeffs.robust_scale * coeffs.si_leak(b, c);
        if (l != 0.0) g6.push_back({m.pi(b, c, s), -l});
      }
    }
    for (int c = 0; c < L_rx; ++c) {
      const double n = coeffs.noise_scale * coeffs.rx_noise[static_cast<std::size_t>(c)];
      if (n != 0.0) g6.push_back({m.rho(c, s), -n});
    }
    add(Tag::G6, detail::row_name(Tag::G6, s), std::move(g6), Sense::ge, 0.0);
  }
  return m;
}

/// Maps a schedule of one-hot beam choices onto every model variable.
/// z_s takes the left side of G1, the largest value G1 admits.
inline Valuation assignment_to_point(const MilpModel& model, const Schedule& schedule,
                                     const CoefficientTable& coeffs) {
  if (static_cast<int>(schedule.size()) != model.slots()) {
    throw std::invalid_argument("assignment_to_point: schedule length differs from the model horizon");
  }
  Valuation x(static_cast<std::size_t>(model.num_variables()), 0.0);
  auto set = [&x](int i) { x[static_cast<std::size_t>(i)] = 1.0; };
  for (int s = 0; s < model.slots(); ++s) {
    const SlotAssignment& slot = schedule[static_cast<std::size_t>(s)];
    if (!slot.well_formed()) {
      throw std::invalid_argument("assignment_to_point: malformed slot " + std::to_string(s));
    }
    if (slot.tx_index && (*slot.tx_index < 0 || *slot.tx_index >= model.n_tx())) {
      throw std::invalid_argument("assignment_to_point: tx index out of range in slot " + std::to_string(s));
    }
    if (slot.rx_index && (*slot.rx_index < 0 || *slot.rx_index >= model.n_rx())) {
      throw std::invalid_argument("assignment_to_point: rx index out of range in slot " + std::to_string(s));
    }
    if (slot.comm_on) set(model.kappa(s));
    if (slot.sense_on) set(model.zeta(s));
    if (slot.active()) {
      set(model.gamma(s));
      set(model.chi(*slot.tx_index, s));
    }
    if (slot.comm_on) set(model.delta(*slot.tx_index, s));
    if (slot.sense_on) {
      set(model.rho(*slot.rx_index, s));
      set(model.pi(*slot.tx_index, *slot.rx_index, s));
      x[static_cast<std::size_t>(model.z(s))] = coeffs.sense_gain(*slot.tx_index, *slot.rx_index);
    }
  }
  return x;
}

inline double row_activity(const Row& row, const Valuation& x) {
  double a = 0.0;
  for (const Term& t : row.terms) a += t.coef * x[static_cast<std::size_t>(t.var)];
  return a;
}

/// Row test with a tolerance relative to the magnitude of its terms, so
/// that rows whose coefficients are tiny (the scaled sensing rows) are not
/// judged by an absolute tolerance of the wrong size.
inline bool row_satisfied(const Row& row, const Valuation& x, double rel_tol = 1e-12) {
  double activity = 0.0;
  double magnitude = std::abs(row.rhs);
  for (const Term& t : row.terms) {
    const double v = t.coef * x[static_cast<std::size_t>(t.var)];
    activity += v;
    magnitude += std::abs(v);
  }
  const double tol = rel_tol * magnitude;
  switch (row.sense) {
    case Sense::le: return activity <= row.rhs + tol;
    case Sense::ge: return activity >= row.rhs - tol;
    case Sense::eq: return std::abs(activity - row.rhs) <= tol;
  }
  return false;
}

struct PointCheck {
  bool feasible = true;
  std::optional<std::size_t> first_violated_row;
};

/// Checks variable domains (binaries integral, bounds) and every row.
inline PointCheck check_point(const MilpModel& model, const Valuation& x) {
  PointCheck check;
  if (static_cast<int>(x.size()) != model.num_variables()) {
    throw std::invalid_argument("check_point: valuation size differs from the model");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Variable& v = model.variables()[i];
    if (x[i] < v.lower || x[i] > v.upper || (v.binary && x[i] != 0.0 && x[i] != 1.0)) {
      check.feasible = false;
      return check;
    }
  }
  for (std::size_t r = 0; r < model.rows().size(); ++r) {
    if (!row_satisfied(model.rows()[r], x)) {
      check.feasible = false;
      check.first_violated_row = r;
      return check;
    }
  }
  return check;
}

inline double objective_value(const MilpModel& model, const Valuation& x) {
  double v = 0.0;
  for (const Term& t : model.objective()) v += t.coef * x[static_cast<std::size_t>(t.var)];
  return v;
}

}  // namespace fdisac::milp
