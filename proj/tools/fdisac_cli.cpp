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

// Command-line front end.
//
//   fdisac scenario {i|ii|iii|iv} [--seed N] [--realizations N] [--out FILE]
//   fdisac custom --config FILE    [--seed N] [--realizations N] [--out FILE]
//   fdisac export-lp --config FILE --out FILE
//
// CSV goes to stdout unless --out is given. Exit status: 0 on success,
// 2 on a configuration error, 1 on any other failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fdisac/error.hpp"
#include "fdisac/milp/lp_writer.hpp"
#include "fdisac/milp/model.hpp"
#include "fdisac/runner/config.hpp"
#include "fdisac/runner/csv.hpp"
#include "fdisac/runner/sweep.hpp"

namespace {

constexpr int kConfigErrorExit = 2;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> realizations;
  std::optional<int> workers;
};

fdisac::runner::ScenarioConfig apply(fdisac::runner::ScenarioConfig config, const Overrides& o) {
  if (o.seed) config.seed = *o.seed;
  if (o.realizations) config.realizations = *o.realizations;
  if (o.workers) config.workers = *o.workers;
  config.validate();
  return config;
}

void emit(const fdisac::runner::ScenarioConfig& config, const std::string& out) {
  const auto rows = fdisac::runner::run_all(config);
  if (out.empty() || out == "-") {
    fdisac::runner::write_csv(rows, std::cout);
  } else {
    fdisac::runner::emit_csv(rows, out);
  }
}

/// MILP of the first cell and realization 0 of the sweep.
void export_lp(const fdisac::runner::ScenarioConfig& config, const std::string& out) {
  using namespace fdisac::runner;
  const Cell cell = cells(config).front();
  if (const auto why = invalid_reason(config, cell)) throw fdisac::ConfigError("first cell is invalid: " + *why);
  const Codebooks books = make_codebooks(config);
  const Instance inst = make_instance(config, books, cell, draw_channel(config, 0));
  const auto model = fdisac::milp::build_milp(inst.coeffs, cell.slots, cell.min_sensing_slots);
  fdisac::milp::export_lp(model, out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust beam scheduling for full-duplex sensing and communication"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string out;
  auto add_run_flags = [&](CLI::App* cmd) {
    cmd->add_option("--seed", overrides.seed, "Master seed");
    cmd->add_option("--realizations", overrides.realizations, "Channel realizations per cell")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--workers", overrides.workers, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    cmd->add_option("--out", out, "CSV destination (default: stdout)");
  };

  std::string scenario_name;
  auto* scenario = app.add_subcommand("scenario", "Run one of the reference scenarios");
  scenario->add_option("id", scenario_name, "i, ii, iii or iv")
      ->required()
      ->check(CLI::IsMember({"i", "ii", "iii", "iv"}, CLI::ignore_case));
  add_run_flags(scenario);

  std::string config_path;
  auto* custom = app.add_subcommand("custom", "Run a sweep described by a config file");
  custom->add_option("--config", config_path, "key = value config file")->required();
  add_run_flags(custom);

  std::string lp_config;
  std::string lp_out;
  auto* lp = app.add_subcommand("export-lp", "Write the MILP of the first cell as a CPLEX LP file");
  lp->add_option("--config", lp_config, "key = value config file")->required();
  lp->add_option("--out", lp_out, "LP destination")->required();
  lp->add_option("--seed", overrides.seed, "Master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigErrorExit;
  }

  try {
    using namespace fdisac::runner;
    if (*scenario) {
      emit(apply(scenario_preset(parse_scenario_id(scenario_name)), overrides), out);
    } else if (*custom) {
      ScenarioConfig base;
      emit(apply(load_config(config_path, base), overrides), out);
    } else if (*lp) {
      export_lp(apply(load_config(lp_config), overrides), lp_out);
    }
  } catch (const fdisac::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigErrorExit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
