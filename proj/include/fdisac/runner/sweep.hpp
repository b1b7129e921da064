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

// Monte Carlo sweeps over the Cartesian product of the configured axes.
//
// Channel draws depend only on (seed, realization): every cell sees the
// same channels for a given realization, so per-seed trends along any
// axis carry straight into the means, and results do not depend on sweep
// order or worker count.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "fdisac/beams.hpp"
#include "fdisac/channels.hpp"
#include "fdisac/metrics.hpp"
#include "fdisac/milp/coefficients.hpp"
#include "fdisac/runner/config.hpp"
#include "fdisac/solver/structured.hpp"

namespace fdisac::runner {

/// One point of the sweep grid.
struct Cell {
  double theta_deg = 90.0;
  double sinr_threshold = 3.0;
  double si_nominal = 0.0;
  double si_radius = 0.0;
  int min_sensing_slots = 1;
  int slots = 1;
  double psi = 6e-4;
  double array_separation_m = 0.15;
};

enum class Mode { robust, nonrobust };

inline const char* to_string(Mode m) { return m == Mode::robust ? "robust" : "nonrobust"; }

struct ResultRow {
  ScenarioId scenario = ScenarioId::custom;
  Mode mode = Mode::robust;
  std::optional<int> realization;  // empty for the mean over realizations
  Cell cell;
  int realizations = 0;
  int feasible_realizations = 0;
  double feasibility_fraction = 0.0;
  double mean_throughput_bits = 0.0;  // infeasible realizations count as 0 bits
  double mean_worst_case_sinr = std::numeric_limits<double>::quiet_NaN();
  double modal_tx_direction_deg = std::numeric_limits<double>::quiet_NaN();
  double modal_tx_beamwidth_deg = std::numeric_limits<double>::quiet_NaN();
  double modal_rx_direction_deg = std::numeric_limits<double>::quiet_NaN();
  double modal_rx_beamwidth_deg = std::numeric_limits<double>::quiet_NaN();
};

/// Cells in axis order theta, Lambda, ubar, eps, M, S, psi, d_c; the last
/// axis varies fastest.
inline std::vector<Cell> cells(const ScenarioConfig& c) {
  std::vector<Cell> out;
  for (double theta : c.theta_deg)
    for (double lambda : c.sinr_threshold)
      for (double nominal : c.si_nominal)
        for (double radius : c.si_radius)
          for (int m : c.min_sensing_slots)
            for (int s : c.slots)
              for (double psi : c.psi)
                for (double sep : c.array_separation_m)
                  out.push_back({theta, lambda, nominal, radius, m, s, psi, sep});
  return out;
}

inline ArrayGeometry tx_geometry(const ScenarioConfig& c) { return {c.n_tx, c.element_spacing, 0.0, 0.0}; }

/// Receive array center on the transmit axis at +d_c (plus the optional
/// broadside offset).
inline ArrayGeometry rx_geometry(const ScenarioConfig& c, double separation_m) {
  return {c.n_rx, c.element_spacing, separation_m, c.rx_broadside_offset_m};
}

struct Codebooks {
  Codebook tx;
  Codebook rx;
};

inline Codebooks make_codebooks(const ScenarioConfig& c) {
  return {build_codebook(tx_geometry(c), c.tx_directions, c.tx_beamwidths, c.p_tx),
          build_codebook(rx_geometry(c, 1.0), c.rx_directions, c.rx_beamwidths, c.p_rx)};
}

inline CommChannelParams comm_params(const ScenarioConfig& c) {
  return {c.k_factor, c.los_angle_deg, c.distance_m, c.carrier_ghz, c.noise_com_dbw};
}

/// Channel draw of one realization; stream 0 of the master seed.
inline cvec draw_channel(const ScenarioConfig& c, int realization) {
  std::mt19937_64 rng(derive_seed(c.seed, 0, static_cast<std::uint64_t>(realization)));
  return rician_channel(tx_geometry(c), comm_params(c), rng);
}

/// Why a cell cannot be solved at all, if it cannot.
inline std::optional<std::string> invalid_reason(const ScenarioConfig& c, const Cell& cell) {
  if (cell.min_sensing_slots > cell.slots) return std::string(solver::detail::kTooManySensingSlots);
  if (cell.si_nominal + cell.si_radius > c.si_cap) return std::string("si_nominal + si_radius exceeds si_cap");
  return std::nullopt;
}

inline ChannelSet make_channels(const ScenarioConfig& c, const Cell& cell, cvec h) {
  SensingParams sensing{cell.theta_deg, cell.psi, c.noise_sen_dbw, cell.sinr_threshold, cell.min_sensing_slots};
  SiUncertainty si{cell.si_nominal, cell.si_radius, c.si_cap};
  return make_channel_set(std::move(h), c.noise_com_dbw, tx_geometry(c), rx_geometry(c, cell.array_separation_m),
                          c.carrier_ghz, sensing, si);
}

/// Everything needed to solve one (cell, realization) pair.
struct Instance {
  ChannelSet channels;
  milp::CoefficientTable coeffs;
};

inline Instance make_instance(const ScenarioConfig& c, const Codebooks& books, const Cell& cell, cvec h) {
  Instance inst{make_channels(c, cell, std::move(h)), {}};
  inst.coeffs = milp::precompute(inst.channels, books.tx, books.rx, c.bandwidth_hz, c.slot_s);
  return inst;
}

/// Outcome of one realization of one cell.
struct Trial {
  bool feasible = false;
  double bits = 0.0;
  double worst_sinr = std::numeric_limits<double>::quiet_NaN();  // min over sensing slots
  std::optional<int> tx_index;  // slot 0
  std::optional<int> rx_index;  // first sensing slot
};

namespace detail {

inline double min_sensing_sinr(const std::vector<double>& per_slot) {
  double m = std::numeric_limits<double>::quiet_NaN();
  for (double v : per_slot) {
    if (!std::isnan(v) && (std::isnan(m) || v < m)) m = v;
  }
  return m;
}

inline Trial summarize(const Schedule& schedule, const ScheduleEvaluation& eval) {
  Trial t;
  t.feasible = eval.feasible;
  if (!t.feasible) return t;
  t.bits = eval.total_bits;
  t.worst_sinr = min_sensing_sinr(eval.worst_case_sinr);
  if (!schedule.empty()) t.tx_index = schedule.front().tx_index;
  for (const SlotAssignment& slot : schedule) {
    if (slot.sense_on) {
      t.rx_index = slot.rx_index;
      break;
    }
  }
  return t;
}

/// Mode of a sample; the smallest value wins ties.
inline double modal(const std::vector<double>& values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::map<double, int> counts;
  for (double v : values) ++counts[v];
  double best = counts.begin()->first;
  int best_count = 0;
  for (const auto& [v, n] : counts) {
    if (n > best_count) {
      best = v;
      best_count = n;
    }
  }
  return best;
}

}  // namespace detail

/// Robust solve of one realization, re-validated against the nonlinear
/// model. Throws std::logic_error if the two disagree.
inline Trial solve_trial(const ScenarioConfig& c, const Codebooks& books, const Cell& cell, const cvec& h) {
  const Instance inst = make_instance(c, books, cell, h);
  const solver::Solution sol = solver::solve_structured(inst.coeffs, cell.slots, cell.min_sensing_slots);
  if (!sol.optimal()) return {};
  const ScheduleEvaluation eval = evaluate_schedule(inst.channels, books.tx, books.rx, sol.schedule, c.bandwidth_hz,
                                                    c.slot_s, cell.min_sensing_slots, cell.slots);
  if (!eval.feasible || !solver::objectives_agree(eval.total_bits, sol.objective_bits)) {
    throw std::logic_error("optimal schedule fails re-validation (" + eval.violated_tag + ")");
  }
  return detail::summarize(sol.schedule, eval);
}

/// SI-blind solve (ubar = eps = 0), then evaluation under the configured
/// worst case.
inline Trial solve_blind_trial(const ScenarioConfig& c, const Codebooks& books, const Cell& cell, const cvec& h) {
  Cell blind = cell;
  blind.si_nominal = 0.0;
  blind.si_radius = 0.0;
  const Instance blind_inst = make_instance(c, books, blind, h);
  const solver::Solution sol = solver::solve_structured(blind_inst.coeffs, cell.slots, cell.min_sensing_slots);
  if (!sol.optimal()) return {};
  const ChannelSet truth = make_channels(c, cell, h);
  const ScheduleEvaluation eval = evaluate_schedule(truth, books.tx, books.rx, sol.schedule, c.bandwidth_hz, c.slot_s,
                                                    cell.min_sensing_slots, cell.slots);
  return detail::summarize(sol.schedule, eval);
}

inline ResultRow aggregate(ScenarioId id, Mode mode, const Cell& cell, const Codebooks& books,
                           const std::vector<Trial>& trials, std::optional<int> realization = std::nullopt) {
  ResultRow row;
  row.scenario = id;
  row.mode = mode;
  row.realization = realization;
  row.cell = cell;
  row.realizations = static_cast<int>(trials.size());
  double bits = 0.0;
  double sinr_sum = 0.0;
  int sinr_count = 0;
  std::vector<double> tx_dir, tx_bw, rx_dir, rx_bw;
  for (const Trial& t : trials) {  // fixed realization order
    if (!t.feasible) continue;
    ++row.feasible_realizations;
    bits += t.bits;
    if (!std::isnan(t.worst_sinr)) {
      sinr_sum += t.worst_sinr;
      ++sinr_count;
    }
    if (t.tx_index) {
      tx_dir.push_back(books.tx[*t.tx_index].direction_deg);
      tx_bw.push_back(books.tx[*t.tx_index].beamwidth_deg);
    }
    if (t.rx_index) {
      rx_dir.push_back(books.rx[*t.rx_index].direction_deg);
      rx_bw.push_back(books.rx[*t.rx_index].beamwidth_deg);
    }
  }
  if (row.realizations > 0) {
    row.feasibility_fraction = static_cast<double>(row.feasible_realizations) / row.realizations;
    row.mean_throughput_bits = bits / row.realizations;
  }
  if (sinr_count > 0) row.mean_worst_case_sinr = sinr_sum / sinr_count;
  row.modal_tx_direction_deg = detail::modal(tx_dir);
  row.modal_tx_beamwidth_deg = detail::modal(tx_bw);
  row.modal_rx_direction_deg = detail::modal(rx_dir);
  row.modal_rx_beamwidth_deg = detail::modal(rx_bw);
  return row;
}

namespace detail {

/// Runs `work(i)` for i in [0, n) on up to `workers` threads.
template <class Fn>
void parallel_for(int n, int workers, Fn&& work) {
  if (workers <= 0) workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < n && !failed; i = next++) {
        try {
          work(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline std::vector<ResultRow> sweep(const ScenarioConfig& config, Mode mode) {
  config.validate();
  const Codebooks books = make_codebooks(config);
  const std::vector<Cell> grid = cells(config);
  std::vector<cvec> channels;
  for (int r = 0; r < config.realizations; ++r) channels.push_back(draw_channel(config, r));

  std::vector<std::vector<ResultRow>> per_cell(grid.size());
  parallel_for(static_cast<int>(grid.size()), config.workers, [&](int i) {
    const Cell& cell = grid[static_cast<std::size_t>(i)];
    std::vector<Trial> trials(static_cast<std::size_t>(config.realizations));
    if (!invalid_reason(config, cell)) {
      for (int r = 0; r < config.realizations; ++r) {
        const cvec& h = channels[static_cast<std::size_t>(r)];
        trials[static_cast<std::size_t>(r)] = mode == Mode::robust ? solve_trial(config, books, cell, h)
                                                                   : solve_blind_trial(config, books, cell, h);
      }
    }
    auto& rows = per_cell[static_cast<std::size_t>(i)];
    if (config.per_realization) {
      for (int r = 0; r < config.realizations; ++r) {
        rows.push_back(aggregate(config.scenario, mode, cell, books, {trials[static_cast<std::size_t>(r)]}, r));
      }
    }
    rows.push_back(aggregate(config.scenario, mode, cell, books, trials));
  });

  std::vector<ResultRow> out;
  for (auto& rows : per_cell) out.insert(out.end(), rows.begin(), rows.end());
  return out;
}

}  // namespace detail

/// Robust sweep; one mean row per cell, preceded by per-realization rows
/// when `per_realization` is set.
inline std::vector<ResultRow> run(const ScenarioConfig& config) { return detail::sweep(config, Mode::robust); }

/// SI-blind baseline judged under the configured residual-SI worst case.
inline std::vector<ResultRow> run_nonrobust_comparison(const ScenarioConfig& config) {
  return detail::sweep(config, Mode::nonrobust);
}

/// Robust rows, followed by the SI-blind rows when `nonrobust_comparison`
/// is set.
inline std::vector<ResultRow> run_all(const ScenarioConfig& config) {
  std::vector<ResultRow> rows = run(config);
  if (config.nonrobust_comparison) {
    std::vector<ResultRow> blind = run_nonrobust_comparison(config);
    rows.insert(rows.end(), blind.begin(), blind.end());
  }
  return rows;
}

}  // namespace fdisac::runner
