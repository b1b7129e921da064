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

// Scenario configuration as a flat `key = value` document.
//
// Lines are `key = value`; `#` starts a comment. List-valued keys take a
// comma-separated list or `linspace(first, last, count)`. Beamwidth maps
// are comma-separated `beamwidth_deg:n_active` pairs. Every key has a
// default; unknown keys, repeated keys and malformed values are errors.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "fdisac/beams.hpp"
#include "fdisac/error.hpp"
#include "fdisac/format.hpp"

namespace fdisac::runner {

enum class ScenarioId { I, II, III, IV, custom };

inline const char* to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::I: return "i";
    case ScenarioId::II: return "ii";
    case ScenarioId::III: return "iii";
    case ScenarioId::IV: return "iv";
    case ScenarioId::custom: return "custom";
  }
  return "custom";
}

inline ScenarioId parse_scenario_id(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "i" || lower == "1") return ScenarioId::I;
  if (lower == "ii" || lower == "2") return ScenarioId::II;
  if (lower == "iii" || lower == "3") return ScenarioId::III;
  if (lower == "iv" || lower == "4") return ScenarioId::IV;
  if (lower == "custom") return ScenarioId::custom;
  throw ConfigError("unknown scenario '" + std::string(text) + "'");
}

struct ScenarioConfig {
  ScenarioId scenario = ScenarioId::custom;

  double bandwidth_hz = 200e6;
  double slot_s = 1e-3;
  int n_tx = 8;
  int n_rx = 16;
  double element_spacing = 0.5;
  double carrier_ghz = 41.0;
  double distance_m = 60.0;
  double los_angle_deg = 90.0;
  double k_factor = 100.0;
  double noise_com_dbw = -114.0;
  double noise_sen_dbw = -74.0;
  double p_tx = 1.0;
  double p_rx = 0.25;
  double rx_broadside_offset_m = 0.0;
  double si_cap = 1.0;
  std::vector<double> tx_directions = default_directions();
  std::vector<double> rx_directions = default_directions();
  std::vector<BeamwidthOption> tx_beamwidths = default_tx_beamwidths();
  std::vector<BeamwidthOption> rx_beamwidths = default_rx_beamwidths();

  // sweep axes
  std::vector<double> theta_deg{90.0};
  std::vector<double> sinr_threshold{3.0};
  std::vector<double> si_nominal{0.0};
  std::vector<double> si_radius{0.0};
  std::vector<int> min_sensing_slots{1};
  std::vector<int> slots{1};
  std::vector<double> psi{6e-4};
  std::vector<double> array_separation_m{0.15};

  int realizations = 50;
  std::uint64_t seed = 1;
  bool per_realization = false;
  bool nonrobust_comparison = false;
  int workers = 0;  // 0: one per hardware thread

  void validate() const;

  friend bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
    auto same_bw = [](const std::vector<BeamwidthOption>& x, const std::vector<BeamwidthOption>& y) {
      return std::equal(x.begin(), x.end(), y.begin(), y.end(), [](const BeamwidthOption& p, const BeamwidthOption& q) {
        return p.beamwidth_deg == q.beamwidth_deg && p.n_active == q.n_active;
      });
    };
    return a.scenario == b.scenario && a.bandwidth_hz == b.bandwidth_hz && a.slot_s == b.slot_s &&
           a.n_tx == b.n_tx && a.n_rx == b.n_rx && a.element_spacing == b.element_spacing &&
           a.carrier_ghz == b.carrier_ghz && a.distance_m == b.distance_m && a.los_angle_deg == b.los_angle_deg &&
           a.k_factor == b.k_factor && a.noise_com_dbw == b.noise_com_dbw && a.noise_sen_dbw == b.noise_sen_dbw &&
           a.p_tx == b.p_tx && a.p_rx == b.p_rx && a.rx_broadside_offset_m == b.rx_broadside_offset_m &&
           a.si_cap == b.si_cap && a.tx_directions == b.tx_directions && a.rx_directions == b.rx_directions &&
           same_bw(a.tx_beamwidths, b.tx_beamwidths) && same_bw(a.rx_beamwidths, b.rx_beamwidths) &&
           a.theta_deg == b.theta_deg && a.sinr_threshold == b.sinr_threshold && a.si_nominal == b.si_nominal &&
           a.si_radius == b.si_radius && a.min_sensing_slots == b.min_sensing_slots && a.slots == b.slots &&
           a.psi == b.psi && a.array_separation_m == b.array_separation_m && a.realizations == b.realizations &&
           a.seed == b.seed && a.per_realization == b.per_realization &&
           a.nonrobust_comparison == b.nonrobust_comparison && a.workers == b.workers;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
  return v;
}

inline long long parse_integer(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  }
  if (used != text.size()) throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  return v;
}

inline int parse_int(const std::string& key, const std::string& text) {
  const long long v = parse_integer(key, text);
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ConfigError("key '" + key + "': integer out of range");
  }
  return static_cast<int>(v);
}

inline bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("key '" + key + "': expected true/false, got '" + text + "'");
}

/// Values are rounded to 12 decimals so that linspace grids land on the
/// decimals one would type by hand.
inline std::vector<double> linspace(double first, double last, int count) {
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    const double v = count == 1 ? first : first + (last - first) * k / (count - 1);
    out.push_back(std::round(v * 1e12) / 1e12);
  }
  return out;
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
  if (text.rfind("linspace(", 0) == 0) {
    if (text.back() != ')') throw ConfigError("key '" + key + "': unterminated linspace(...)");
    const auto args = split(std::string_view(text).substr(9, text.size() - 10), ',');
    if (args.size() != 3) throw ConfigError("key '" + key + "': linspace takes (first, last, count)");
    const int count = parse_int(key, args[2]);
    if (count < 1) throw ConfigError("key '" + key + "': linspace count must be >= 1");
    return linspace(parse_double(key, args[0]), parse_double(key, args[1]), count);
  }
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) out.push_back(parse_double(key, item));
  return out;
}

inline std::vector<int> parse_int_list(const std::string& key, const std::string& text) {
  std::vector<int> out;
  for (const std::string& item : split(text, ',')) {
    const auto range = split(item, '-');
    if (range.size() == 2 && !range[0].empty()) {
      const int lo = parse_int(key, range[0]);
      const int hi = parse_int(key, range[1]);
      if (hi < lo) throw ConfigError("key '" + key + "': empty range '" + item + "'");
      for (int v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_int(key, item));
    }
  }
  return out;
}

inline std::vector<BeamwidthOption> parse_beamwidths(const std::string& key, const std::string& text) {
  std::vector<BeamwidthOption> out;
  for (const std::string& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) {
      throw ConfigError("key '" + key + "': expected beamwidth_deg:n_active, got '" + item + "'");
    }
    out.push_back({parse_double(key, parts[0]), parse_int(key, parts[1])});
  }
  return out;
}

template <class T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_same_v<T, double>) {
      out += format_number(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

inline std::string join_beamwidths(const std::vector<BeamwidthOption>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += format_number(values[i].beamwidth_deg) + ":" + std::to_string(values[i].n_active);
  }
  return out;
}

struct Field {
  std::function<void(ScenarioConfig&, const std::string&, const std::string&)> parse;
  std::function<std::string(const ScenarioConfig&)> emit;
};

#define FDISAC_DOUBLE(name)                                                                            \
  {#name, {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.name = parse_double(k, v); }, \
           [](const ScenarioConfig& c) { return format_number(c.name); }}}
#define FDISAC_INT(name)                                                                            \
  {#name, {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.name = parse_int(k, v); }, \
           [](const ScenarioConfig& c) { return std::to_string(c.name); }}}
#define FDISAC_DLIST(name)                                                                                \
  {#name, {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.name = parse_double_list(k, v); }, \
           [](const ScenarioConfig& c) { return join(c.name); }}}
#define FDISAC_ILIST(name)                                                                             \
  {#name, {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.name = parse_int_list(k, v); }, \
           [](const ScenarioConfig& c) { return join(c.name); }}}
#define FDISAC_BWLIST(name)                                                                               \
  {#name, {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.name = parse_beamwidths(k, v); }, \
           [](const ScenarioConfig& c) { return join_beamwidths(c.name); }}}
#define FDISAC_BOOL(name)                                                                            \
  {#name, {[](ScenarioConfig& c, const std::string& k, const std::string& v) { c.name = parse_bool(k, v); }, \
           [](const ScenarioConfig& c) { return std::string(c.name ? "true" : "false"); }}}

// Emission order follows this table.
inline const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"scenario",
       {[](ScenarioConfig& c, const std::string&, const std::string& v) { c.scenario = parse_scenario_id(v); },
        [](const ScenarioConfig& c) { return std::string(to_string(c.scenario)); }}},
      FDISAC_DOUBLE(bandwidth_hz),
      FDISAC_DOUBLE(slot_s),
      FDISAC_INT(n_tx),
      FDISAC_INT(n_rx),
      FDISAC_DOUBLE(element_spacing),
      FDISAC_DOUBLE(carrier_ghz),
      FDISAC_DOUBLE(distance_m),
      FDISAC_DOUBLE(los_angle_deg),
      FDISAC_DOUBLE(k_factor),
      FDISAC_DOUBLE(noise_com_dbw),
      FDISAC_DOUBLE(noise_sen_dbw),
      FDISAC_DOUBLE(p_tx),
      FDISAC_DOUBLE(p_rx),
      FDISAC_DOUBLE(rx_broadside_offset_m),
      FDISAC_DOUBLE(si_cap),
      FDISAC_DLIST(tx_directions),
      FDISAC_DLIST(rx_directions),
      FDISAC_BWLIST(tx_beamwidths),
      FDISAC_BWLIST(rx_beamwidths),
      FDISAC_DLIST(theta_deg),
      FDISAC_DLIST(sinr_threshold),
      FDISAC_DLIST(si_nominal),
      FDISAC_DLIST(si_radius),
      FDISAC_ILIST(min_sensing_slots),
      FDISAC_ILIST(slots),
      FDISAC_DLIST(psi),
      FDISAC_DLIST(array_separation_m),
      FDISAC_INT(realizations),
      {"seed",
       {[](ScenarioConfig& c, const std::string& k, const std::string& v) {
          const long long s = parse_integer(k, v);
          if (s < 0) throw ConfigError("key 'seed': must be >= 0");
          c.seed = static_cast<std::uint64_t>(s);
        },
        [](const ScenarioConfig& c) { return std::to_string(c.seed); }}},
      FDISAC_BOOL(per_realization),
      FDISAC_BOOL(nonrobust_comparison),
      FDISAC_INT(workers),
  };
  return table;
}

#undef FDISAC_DOUBLE
#undef FDISAC_INT
#undef FDISAC_DLIST
#undef FDISAC_ILIST
#undef FDISAC_BWLIST
#undef FDISAC_BOOL

}  // namespace detail

inline void ScenarioConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(bandwidth_hz > 0 && slot_s > 0, "bandwidth_hz and slot_s must be > 0");
  require(n_tx >= 1 && n_rx >= 1, "n_tx and n_rx must be >= 1");
  require(element_spacing > 0, "element_spacing must be > 0");
  require(carrier_ghz > 0 && distance_m > 0, "carrier_ghz and distance_m must be > 0");
  require(los_angle_deg > 0 && los_angle_deg < 180, "los_angle_deg must lie in (0, 180)");
  require(k_factor >= 0, "k_factor must be >= 0");
  require(p_tx > 0 && p_rx > 0, "p_tx and p_rx must be > 0");
  require(si_cap > 0, "si_cap must be > 0");
  require(realizations >= 1, "realizations must be >= 1");
  require(workers >= 0, "workers must be >= 0");
  require(!tx_directions.empty() && !rx_directions.empty(), "direction lists must be nonempty");
  require(!tx_beamwidths.empty() && !rx_beamwidths.empty(), "beamwidth maps must be nonempty");
  for (const auto& bw : tx_beamwidths) require(bw.n_active >= 1 && bw.n_active <= n_tx, "tx beamwidth n_active out of range");
  for (const auto& bw : rx_beamwidths) require(bw.n_active >= 1 && bw.n_active <= n_rx, "rx beamwidth n_active out of range");
  require(!theta_deg.empty() && !sinr_threshold.empty() && !si_nominal.empty() && !si_radius.empty() &&
              !min_sensing_slots.empty() && !slots.empty() && !psi.empty() && !array_separation_m.empty(),
          "every sweep axis must be nonempty");
  for (double t : theta_deg) require(t > 0 && t < 180, "theta_deg values must lie in (0, 180)");
  for (double l : sinr_threshold) require(l > 0, "sinr_threshold values must be > 0");
  for (double v : si_nominal) require(v >= 0, "si_nominal values must be >= 0");
  for (double e : si_radius) require(e >= 0, "si_radius values must be >= 0");
  for (int m : min_sensing_slots) require(m >= 0, "min_sensing_slots values must be >= 0");
  for (int s : slots) require(s >= 1, "slots values must be >= 1");
  for (double p : psi) require(p > 0, "psi values must be > 0");
  for (double d : array_separation_m) require(d > 0, "array_separation_m values must be > 0");
}

/// Parses a configuration document on top of `base` (full defaults when
/// omitted).
inline ScenarioConfig parse_config(std::string_view document, ScenarioConfig base = {}) {
  std::map<std::string, bool> seen;
  std::istringstream in{std::string(document)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    const std::string content = detail::trim(std::string_view(line).substr(0, hash));
    if (content.empty()) continue;
    const std::size_t eq = content.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = detail::trim(std::string_view(content).substr(0, eq));
    const std::string value = detail::trim(std::string_view(content).substr(eq + 1));
    const auto& table = detail::fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key; });
    if (it == table.end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (seen[key]) throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' given twice");
    seen[key] = true;
    if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' has no value");
    it->second.parse(base, key, value);
  }
  base.validate();
  return base;
}

inline ScenarioConfig load_config(const std::string& path, ScenarioConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), std::move(base));
}

/// Emits every key, so parse_config(to_text(c)) == c.
inline std::string to_text(const ScenarioConfig& config) {
  std::string out;
  for (const auto& [key, field] : detail::fields()) out += key + " = " + field.emit(config) + "\n";
  return out;
}

/// Preset sweeps for the four reference scenarios.
inline ScenarioConfig scenario_preset(ScenarioId id) {
  ScenarioConfig c;
  c.scenario = id;
  switch (id) {
    case ScenarioId::I:
      // user at broadside, target moving away; one shared slot, no SI
      c.theta_deg = {90.0, 110.0, 130.0};
      c.sinr_threshold = {3.0, 4.0, 5.0};
      c.slots = {1};
      c.min_sensing_slots = {1};
      c.si_nominal = {0.0};
      c.si_radius = {0.0};
      c.per_realization = true;
      break;
    case ScenarioId::II:
      c.theta_deg = {100.0};
      c.sinr_threshold = {1.0, 2.0, 3.0};
      c.slots = {8};
      c.min_sensing_slots = {4};
      c.si_nominal = detail::linspace(0.0, 0.95, 20);
      c.si_radius = {0.05};
      c.psi = {6e-4, 9e-4};
      break;
    case ScenarioId::III:
      c.theta_deg = {100.0};
      c.sinr_threshold = {3.0};
      c.slots = {8};
      c.min_sensing_slots = {1, 2, 3, 4, 5, 6, 7, 8};
      c.si_nominal = detail::linspace(0.0, 0.95, 20);
      c.si_radius = {0.05};
      c.nonrobust_comparison = true;
      break;
    case ScenarioId::IV:
      // no active cancellation: the full SI channel, mitigated only by
      // array separation
      c.theta_deg = {100.0};
      c.sinr_threshold = {1.0, 2.0, 3.0, 4.0, 5.0};
      c.slots = {8};
      c.min_sensing_slots = {4};
      c.si_nominal = {1.0};
      c.si_radius = {0.0};
      c.array_separation_m = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5, 0.75, 1.0, 1000.0};
      break;
    case ScenarioId::custom:
      break;
  }
  return c;
}

}  // namespace fdisac::runner
