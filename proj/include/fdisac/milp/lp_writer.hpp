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

// CPLEX-LP text export of a MilpModel.

#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fdisac/format.hpp"
#include "fdisac/milp/model.hpp"

namespace fdisac::milp {

using fdisac::format_number;

namespace detail {

// CPLEX caps LP lines at 255 characters; wrap well before that.
class LineWriter {
 public:
  explicit LineWriter(std::ostream& out) : out_(out) {}

  void put(const std::string& token) {
    if (width_ + token.size() + 1 > 200 && width_ > 0) {
      out_ << '\n' << "   ";
      width_ = 3;
    }
    out_ << ' ' << token;
    width_ += token.size() + 1;
  }

  void start(const std::string& label) {
    out_ << ' ' << label;
    width_ = label.size() + 1;
  }

  void end() {
    out_ << '\n';
    width_ = 0;
  }

 private:
  std::ostream& out_;
  std::size_t width_ = 0;
};

inline void write_terms(LineWriter& w, const MilpModel& model, const std::vector<Term>& terms) {
  bool first = true;
  for (const Term& t : terms) {
    std::string coef = format_number(std::abs(t.coef));
    const std::string& var = model.variable(t.var).name;
    if (first) {
      w.put((t.coef < 0 ? "-" : "") + std::string(coef == "1" ? "" : coef + " ") + var);
    } else {
      w.put(t.coef < 0 ? "-" : "+");
      w.put(coef == "1" ? var : coef + " " + var);
    }
    first = false;
  }
  if (first) w.put("0");
}

inline const char* sense_token(Sense s) {
  switch (s) {
    case Sense::le: return "<=";
    case Sense::ge: return ">=";
    case Sense::eq: return "=";
  }
  return "=";
}

}  // namespace detail

inline void write_lp(const MilpModel& model, std::ostream& out) {
  out << "\\ fdisac timeslot and beam selection model\n";
  out << "\\ slots " << model.slots() << ", L_tx " << model.n_tx() << ", L_rx " << model.n_rx()
      << ", min sensing slots " << model.min_sensing_slots() << "\n";
  out << "\\ rows G1 and G6 are divided by |psi|^2/Lambda = " << format_number(model.sensing_row_scale())
      << " (positive row scaling, optimum unchanged)\n";
  out << "\\ binaries " << model.num_binaries() << ", continuous " << model.num_continuous() << "\n";

  detail::LineWriter w(out);
  out << "Maximize\n";
  w.start("obj:");
  detail::write_terms(w, model, model.objective());
  w.end();

  out << "Subject To\n";
  for (const Row& row : model.rows()) {
    w.start(row.name + ":");
    detail::write_terms(w, model, row.terms);
    w.put(detail::sense_token(row.sense));
    w.put(format_number(row.rhs));
    w.end();
  }

  out << "Bounds\n";
  for (const Variable& v : model.variables()) {
    if (!v.binary) out << ' ' << v.name << " >= " << format_number(v.lower) << '\n';
  }

  out << "Binaries\n";
  for (const Variable& v : model.variables()) {
    if (v.binary) w.put(v.name);
  }
  w.end();
  out << "End\n";
}

inline std::string to_lp_string(const MilpModel& model) {
  std::ostringstream os;
  write_lp(model, os);
  return os.str();
}

inline void export_lp(const MilpModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_lp: cannot open " + path);
  write_lp(model, out);
  out.flush();
  if (!out) throw std::runtime_error("export_lp: write failed for " + path);
}

}  // namespace fdisac::milp
