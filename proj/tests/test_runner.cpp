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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <gtest/gtest.h>

#include "fdisac/runner/config.hpp"
#include "fdisac/runner/csv.hpp"
#include "fdisac/runner/sweep.hpp"

namespace fdisac::runner {
namespace {

TEST(Config, EmptyDocumentGivesDefaults) {
  const ScenarioConfig c = parse_config("");
  EXPECT_EQ(c, ScenarioConfig{});
  EXPECT_EQ(c.bandwidth_hz, 200e6);
  EXPECT_EQ(c.slot_s, 1e-3);
  EXPECT_EQ(c.n_tx, 8);
  EXPECT_EQ(c.n_rx, 16);
  EXPECT_EQ(c.carrier_ghz, 41.0);
  EXPECT_EQ(c.distance_m, 60.0);
  EXPECT_EQ(c.los_angle_deg, 90.0);
  EXPECT_EQ(c.k_factor, 100.0);
  EXPECT_EQ(c.noise_com_dbw, -114.0);
  EXPECT_EQ(c.noise_sen_dbw, -74.0);
  EXPECT_EQ(c.p_tx, 1.0);
  EXPECT_EQ(c.p_rx, 0.25);
  EXPECT_EQ(c.psi, std::vector<double>{6e-4});
  EXPECT_EQ(c.array_separation_m, std::vector<double>{0.15});
  EXPECT_EQ(c.realizations, 50);
}

TEST(Config, EmitThenParseIsIdentity) {
  for (ScenarioId id : {ScenarioId::I, ScenarioId::II, ScenarioId::III, ScenarioId::IV, ScenarioId::custom}) {
    const ScenarioConfig c = scenario_preset(id);
    const std::string text = to_text(c);
    EXPECT_EQ(parse_config(text), c) << to_string(id);
    EXPECT_EQ(to_text(parse_config(text)), text);
  }
}

TEST(Config, OverridesCommentsAndLists) {
  const ScenarioConfig c = parse_config(
      "# header comment\n"
      "realizations = 3   # trailing comment\n"
      "seed=7\n"
      "  theta_deg = 90, 110 ,130\n"
      "si_nominal = linspace(0, 0.95, 20)\n"
      "min_sensing_slots = 1-3, 8\n"
      "tx_beamwidths = 13:8, 26:4\n"
      "per_realization = true\n");
  EXPECT_EQ(c.realizations, 3);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.theta_deg, (std::vector<double>{90, 110, 130}));
  ASSERT_EQ(c.si_nominal.size(), 20u);
  EXPECT_EQ(c.si_nominal[1], 0.05);
  EXPECT_EQ(c.si_nominal[19], 0.95);
  EXPECT_EQ(c.min_sensing_slots, (std::vector<int>{1, 2, 3, 8}));
  ASSERT_EQ(c.tx_beamwidths.size(), 2u);
  EXPECT_EQ(c.tx_beamwidths[1].beamwidth_deg, 26.0);
  EXPECT_EQ(c.tx_beamwidths[1].n_active, 4);
  EXPECT_TRUE(c.per_realization);
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config("no_such_key = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("seed = 1\nseed = 2\n"), ConfigError);
  EXPECT_THROW(parse_config("realizations = many\n"), ConfigError);
  EXPECT_THROW(parse_config("realizations = 2.5\n"), ConfigError);
  EXPECT_THROW(parse_config("realizations = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("theta_deg = 90, x\n"), ConfigError);
  EXPECT_THROW(parse_config("theta_deg = 0\n"), ConfigError);
  EXPECT_THROW(parse_config("psi =\n"), ConfigError);
  EXPECT_THROW(parse_config("just some words\n"), ConfigError);
  EXPECT_THROW(parse_config("per_realization = maybe\n"), ConfigError);
  EXPECT_THROW(parse_config("si_nominal = linspace(0, 1)\n"), ConfigError);
  EXPECT_THROW(parse_config("tx_beamwidths = 13\n"), ConfigError);
  EXPECT_THROW(parse_config("tx_beamwidths = 13:9\n"), ConfigError);
  EXPECT_THROW(parse_config("scenario = v\n"), ConfigError);
  EXPECT_THROW(parse_config("seed = -1\n"), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.txt"), ConfigError);
}

TEST(Config, Presets) {
  const auto one = scenario_preset(ScenarioId::I);
  EXPECT_EQ(cells(one).size(), 9u);
  EXPECT_TRUE(one.per_realization);
  const auto two = scenario_preset(ScenarioId::II);
  EXPECT_EQ(two.theta_deg, std::vector<double>{100.0});
  EXPECT_EQ(two.sinr_threshold, (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(two.slots, std::vector<int>{8});
  EXPECT_EQ(two.min_sensing_slots, std::vector<int>{4});
  EXPECT_EQ(two.si_radius, std::vector<double>{0.05});
  const auto three = scenario_preset(ScenarioId::III);
  EXPECT_EQ(three.min_sensing_slots.size(), 8u);
  EXPECT_EQ(three.si_nominal.size(), 20u);
  EXPECT_TRUE(three.nonrobust_comparison);
  const auto four = scenario_preset(ScenarioId::IV);
  EXPECT_EQ(four.si_nominal, std::vector<double>{1.0});
  EXPECT_EQ(four.si_radius, std::vector<double>{0.0});
  EXPECT_EQ(four.array_separation_m.back(), 1000.0);
  EXPECT_EQ(parse_scenario_id("III"), ScenarioId::III);
}

ScenarioConfig small_config() {
  ScenarioConfig c;
  c.realizations = 4;
  c.seed = 7;
  c.theta_deg = {100.0};
  c.sinr_threshold = {1.0, 3.0};
  c.slots = {4};
  c.min_sensing_slots = {1, 2};
  c.si_nominal = {0.0, 0.5};
  c.si_radius = {0.05};
  return c;
}

TEST(Run, CartesianProductInAxisOrder) {
  const auto rows = run(small_config());
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0].cell.sinr_threshold, 1.0);
  EXPECT_EQ(rows[0].cell.si_nominal, 0.0);
  EXPECT_EQ(rows[1].cell.min_sensing_slots, 2);
  EXPECT_EQ(rows[2].cell.si_nominal, 0.5);
  EXPECT_EQ(rows[4].cell.sinr_threshold, 3.0);
  for (const auto& r : rows) {
    EXPECT_EQ(r.realizations, 4);
    EXPECT_FALSE(r.realization.has_value());
    EXPECT_DOUBLE_EQ(r.feasibility_fraction, r.feasible_realizations / 4.0);
  }
}

TEST(Run, DeterministicAndIndependentOfWorkers) {
  ScenarioConfig c = small_config();
  c.workers = 1;
  const std::string one = to_csv(run(c));
  c.workers = 3;
  EXPECT_EQ(to_csv(run(c)), one);
  EXPECT_EQ(to_csv(run(c)), one);
  c.seed = 8;
  EXPECT_NE(to_csv(run(c)), one);
}

TEST(Run, InvalidCombinationsAreInfeasibleCells) {
  ScenarioConfig c = small_config();
  c.slots = {1};
  c.min_sensing_slots = {2};
  c.si_nominal = {0.99};
  const auto rows = run(c);
  for (const auto& r : rows) {
    EXPECT_EQ(r.feasible_realizations, 0);
    EXPECT_EQ(r.feasibility_fraction, 0.0);
    EXPECT_EQ(r.mean_throughput_bits, 0.0);
  }
}

TEST(Run, PerRealizationRowsPrecedeTheMean) {
  ScenarioConfig c = small_config();
  c.per_realization = true;
  c.sinr_threshold = {3.0};
  c.min_sensing_slots = {1};
  c.si_nominal = {0.0};
  const auto rows = run(c);
  ASSERT_EQ(rows.size(), 5u);
  double sum = 0.0;
  for (int r = 0; r < 4; ++r) {
    EXPECT_EQ(rows[r].realization, r);
    EXPECT_EQ(rows[r].realizations, 1);
    sum += rows[r].mean_throughput_bits;
  }
  EXPECT_FALSE(rows[4].realization.has_value());
  EXPECT_NEAR(rows[4].mean_throughput_bits, sum / 4.0, 1e-9 * sum);
}

TEST(Run, NonIncreasingAlongSiAndSensingAxesPerSeed) {
  ScenarioConfig c;
  c.realizations = 6;
  c.per_realization = true;
  c.theta_deg = {100.0};
  c.sinr_threshold = {3.0};
  c.slots = {8};
  c.min_sensing_slots = {1, 2, 3, 4, 5, 6, 7, 8};
  c.si_nominal = {0.0, 0.25, 0.5, 0.75, 0.95};
  c.si_radius = {0.05};
  c.rx_broadside_offset_m = 0.01;  // let SI bite
  const auto rows = run(c);
  // key: (M, realization or -1) -> throughput along ubar
  std::map<std::pair<int, int>, std::vector<double>> by_nominal;
  std::map<std::pair<double, int>, std::vector<double>> by_m;
  for (const auto& r : rows) {
    const int real = r.realization.value_or(-1);
    by_nominal[{r.cell.min_sensing_slots, real}].push_back(r.mean_throughput_bits);
    by_m[{r.cell.si_nominal, real}].push_back(r.mean_throughput_bits);
  }
  for (const auto& [key, values] : by_nominal)
    for (std::size_t i = 1; i < values.size(); ++i) EXPECT_LE(values[i], values[i - 1] * (1 + 1e-12));
  for (const auto& [key, values] : by_m)
    for (std::size_t i = 1; i < values.size(); ++i) EXPECT_LE(values[i], values[i - 1] * (1 + 1e-12));
}

TEST(Run, BlindBaselineWithoutMismatchIsAlwaysFeasible) {
  ScenarioConfig c = small_config();
  c.si_nominal = {0.0};
  c.si_radius = {0.0};
  c.sinr_threshold = {3.0};
  const auto robust = run(c);
  const auto blind = run_nonrobust_comparison(c);
  ASSERT_EQ(robust.size(), blind.size());
  for (std::size_t i = 0; i < blind.size(); ++i) {
    EXPECT_EQ(blind[i].mode, Mode::nonrobust);
    EXPECT_EQ(blind[i].feasibility_fraction, robust[i].feasibility_fraction);
    EXPECT_EQ(blind[i].mean_throughput_bits, robust[i].mean_throughput_bits);
  }
}

TEST(Run, RobustRowsNeverFailTheirOwnWorstCase) {
  ScenarioConfig c = small_config();
  c.rx_broadside_offset_m = 0.01;
  for (const auto& r : run(c)) {
    if (r.feasible_realizations == 0) continue;
    EXPECT_GE(r.mean_worst_case_sinr, r.cell.sinr_threshold * (1 - 1e-12));
  }
}

TEST(Csv, HeaderAndFormatting) {
  ScenarioConfig c = small_config();
  c.sinr_threshold = {3.0};
  c.min_sensing_slots = {1};
  c.si_nominal = {0.0};
  const std::string csv = to_csv(run(c));
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, kCsvHeader);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("custom,robust,mean,100,3,0,0.05,1,4,6e-04,0.15,4,", 0), 0u) << line;
  std::size_t commas = 0;
  for (char ch : header) commas += ch == ',';
  for (char ch : line) commas -= ch == ',';
  EXPECT_EQ(commas, 0u);
}

TEST(Csv, EmitWritesTheSameBytes) {
  const auto rows = run(small_config());
  const auto path = std::filesystem::temp_directory_path() / "fdisac_runner_test.csv";
  emit_csv(rows, path.string());
  std::ifstream in(path, std::ios::binary);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), to_csv(rows));
  std::filesystem::remove(path);
  EXPECT_THROW(emit_csv(rows, "/nonexistent-dir/out.csv"), std::runtime_error);
  EXPECT_THROW(emit_csv({}, path.string()), std::invalid_argument);
}

}  // namespace
}  // namespace fdisac::runner
