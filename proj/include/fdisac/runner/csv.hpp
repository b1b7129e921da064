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

// CSV output of sweep results. Numbers use the shortest round-trip form
// and `.` as the decimal separator; empty statistics print as `nan`.

#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fdisac/format.hpp"
#include "fdisac/runner/sweep.hpp"

namespace fdisac::runner {

inline constexpr const char* kCsvHeader =
    "scenario,mode,realization,theta_deg,sinr_threshold,si_nominal,si_radius,min_sensing_slots,slots,psi,"
    "array_separation_m,realizations,feasible_realizations,feasibility_fraction,mean_throughput_bits,"
    "mean_worst_case_sinr,modal_tx_direction_deg,modal_tx_beamwidth_deg,modal_rx_direction_deg,"
    "modal_rx_beamwidth_deg";

inline void write_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const ResultRow& r : rows) {
    const Cell& c = r.cell;
    out << to_string(r.scenario) << ',' << to_string(r.mode) << ','
        << (r.realization ? std::to_string(*r.realization) : std::string("mean")) << ','
        << format_number(c.theta_deg) << ',' << format_number(c.sinr_threshold) << ','
        << format_number(c.si_nominal) << ',' << format_number(c.si_radius) << ',' << c.min_sensing_slots << ','
        << c.slots << ',' << format_number(c.psi) << ',' << format_number(c.array_separation_m) << ','
        << r.realizations << ',' << r.feasible_realizations << ',' << format_number(r.feasibility_fraction) << ','
        << format_number(r.mean_throughput_bits) << ',' << format_number(r.mean_worst_case_sinr) << ','
        << format_number(r.modal_tx_direction_deg) << ',' << format_number(r.modal_tx_beamwidth_deg) << ','
        << format_number(r.modal_rx_direction_deg) << ',' << format_number(r.modal_rx_beamwidth_deg) << '\n';
  }
}

inline std::string to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream out;
  write_csv(rows, out);
  return out.str();
}

/// Writes the table to `path`; throws std::runtime_error on I/O failure.
inline void emit_csv(const std::vector<ResultRow>& rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(rows, out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace fdisac::runner
