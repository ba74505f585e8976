// Copyright 2026 The qsync Authors
//
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

// Run configuration for the qsync front end.
//
// Config files are flat "key = value" lines; '#' starts a comment line.
// Sweep axes are written "sweep.<param> = start:stop:count" (linear spacing).
// Output files echo their resolved configuration as "#@ key = value" lines
// (CSV) or under meta.config (JSON); when such lines are present only they
// are read, so an output file can be fed back with --config.

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qsync/core_types.hpp"
#include "qsync/liouvillian.hpp"
#include "qsync/quadrature.hpp"
#include "qsync/spin1.hpp"

namespace qsync::sweep {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Command { steady, tongue, smeasure, qsurface, evolve, spin1 };
enum class Model { tls, spin1 };

inline constexpr std::array<std::pair<std::string_view, Command>, 6> kCommands{{
    {"steady", Command::steady},
    {"tongue", Command::tongue},
    {"smeasure", Command::smeasure},
    {"qsurface", Command::qsurface},
    {"evolve", Command::evolve},
    {"spin1", Command::spin1},
}};

inline std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [n, c] : kCommands) {
    if (n == name) return c;
  }
  return std::nullopt;
}

inline std::string to_string(Command c) {
  for (const auto& [n, cmd] : kCommands) {
    if (cmd == c) return std::string(n);
  }
  return "?";
}

/// Fixed formatting used for every number written by the front end:
/// 17 significant digits, '.' separator, no negative zero.
inline std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

using Entries = std::map<std::string, std::string>;

/// Splits "key = value"; throws ConfigError naming the line on failure.
inline std::pair<std::string, std::string> split_assignment(std::string_view line, std::string_view where) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(where) + ": expected 'key = value', got '" + trim(line) + "'");
  }
  std::string key = trim(line.substr(0, eq));
  std::string value = trim(line.substr(eq + 1));
  if (key.empty()) throw ConfigError(std::string(where) + ": empty key");
  return {std::move(key), std::move(value)};
}

inline Entries parse_entries(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config JSON: ") + e.what());
    }
    if (!doc.contains("meta") || !doc["meta"].contains("config") || !doc["meta"]["config"].is_object()) {
      throw ConfigError("config JSON: missing meta.config object");
    }
    Entries out;
    for (const auto& [k, v] : doc["meta"]["config"].items()) {
      if (!v.is_string()) throw ConfigError("config JSON: value of '" + k + "' must be a string");
      out[k] = v.get<std::string>();
    }
    return out;
  }

  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  const bool echo_only = std::any_of(lines.begin(), lines.end(), [](const std::string& l) {
    return trim(l).rfind("#@", 0) == 0;
  });

  Entries out;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    std::string line = trim(lines[n]);
    if (echo_only) {
      if (line.rfind("#@", 0) != 0) continue;
      line = line.substr(2);
    } else if (line.empty() || line.front() == '#') {
      continue;
    }
    auto [k, v] = split_assignment(line, "line " + std::to_string(n + 1));
    out[std::move(k)] = std::move(v);
  }
  return out;
}

inline double parse_number(const std::string& key, const std::string& text) {
  const std::string s = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ConfigError("invalid number for '" + key + "': '" + text + "'");
  }
  return v;
}

inline std::size_t parse_count(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v < 1.0 || v != std::floor(v) || v > 1e9) {
    throw ConfigError("'" + key + "' must be a positive integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

struct SweepAxis {
  std::string name;
  double start = 0.0;
  double stop = 0.0;
  std::size_t count = 1;

  std::vector<double> values() const { return linspace(start, stop, count); }

  std::string spec() const { return format_number(start) + ":" + format_number(stop) + ":" + std::to_string(count); }

  static SweepAxis parse(const std::string& name, const std::string& text) {
    const std::string key = "sweep." + name;
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos) {
      throw ConfigError("'" + key + "' must be 'start:stop:count', got '" + text + "'");
    }
    SweepAxis axis{name, parse_number(key, text.substr(0, c1)), parse_number(key, text.substr(c1 + 1, c2 - c1 - 1)),
                   parse_count(key, text.substr(c2 + 1))};
    if (axis.start > axis.stop) throw ConfigError("'" + key + "': start must be <= stop");
    return axis;
  }
};

using Echo = std::vector<std::pair<std::string, std::string>>;

/// Fully resolved configuration of one run.
struct RunConfig {
  Command command = Command::steady;
  Model model = Model::tls;
  SystemParams tls{10.0, 1.0, 1.0, 0.0, std::nullopt, std::nullopt};
  Spin1Params spin1{3.0, 1.0};
  std::vector<SweepAxis> axes;  // canonical order
  std::size_t n_theta = 181;
  std::size_t n_phi = 361;
  std::size_t n_phi_measure = 361;
  double t_final = 0.0;
  double dt = 0.0;
  std::size_t stride = 1;
  BlochVector3 initial{0.0, 0.0, -1.0};
  double omega = 0.0;  // lab-frame rotation frequency used by evolve
  double deformation_threshold = 0.1;

  const SweepAxis* axis(std::string_view name) const {
    for (const auto& a : axes) {
      if (a.name == name) return &a;
    }
    return nullptr;
  }

  /// The resolved configuration as key/value pairs, in a fixed order.
  Echo echo() const {
    Echo e;
    auto num = [&](const char* k, double v) { e.emplace_back(k, format_number(v)); };
    auto sweeps = [&] {
      for (const auto& a : axes) e.emplace_back("sweep." + a.name, a.spec());
    };
    if (model == Model::spin1) {
      e.emplace_back("model", "spin1");
      num("alpha", spin1.alpha);
      num("beta", spin1.beta);
      sweeps();
      return e;
    }
    e.emplace_back("model", "tls");
    num("gamma_g", tls.gamma_g);
    num("gamma_d", tls.gamma_d);
    num("epsilon", tls.epsilon);
    num("delta", tls.delta);
    if (tls.omega0) num("omega0", *tls.omega0);
    if (tls.omega && command != Command::evolve) num("omega", *tls.omega);
    sweeps();
    switch (command) {
      case Command::tongue:
        num("deformation_threshold", deformation_threshold);
        break;
      case Command::smeasure:
        e.emplace_back("n_phi_measure", std::to_string(n_phi_measure));
        break;
      case Command::qsurface:
        e.emplace_back("n_theta", std::to_string(n_theta));
        e.emplace_back("n_phi", std::to_string(n_phi));
        break;
      case Command::evolve:
        num("mx0", initial.x);
        num("my0", initial.y);
        num("mz0", initial.z);
        num("t_final", t_final);
        num("dt", dt);
        e.emplace_back("stride", std::to_string(stride));
        num("omega", omega);
        break;
      default:
        break;
    }
    return e;
  }
};

namespace detail {

inline const std::set<std::string>& keys_for(Command c) {
  static const std::set<std::string> tls_common{"model", "gamma_g", "gamma_d", "epsilon", "delta", "omega0", "omega"};
  static const std::map<Command, std::set<std::string>> extra{
      {Command::steady, {"sweep.gamma_g", "sweep.gamma_d", "sweep.epsilon", "sweep.delta"}},
      {Command::tongue, {"sweep.epsilon", "sweep.delta", "deformation_threshold"}},
      {Command::smeasure, {"sweep.epsilon", "sweep.delta", "n_phi_measure"}},
      {Command::qsurface, {"n_theta", "n_phi"}},
      {Command::evolve, {"mx0", "my0", "mz0", "t_final", "dt", "stride"}},
  };
  static std::map<Command, std::set<std::string>> cache = [&] {
    std::map<Command, std::set<std::string>> m;
    for (const auto& [cmd, keys] : extra) {
      auto all = tls_common;
      all.insert(keys.begin(), keys.end());
      m[cmd] = std::move(all);
    }
    m[Command::spin1] = {"model", "alpha", "beta", "sweep.alpha", "sweep.beta"};
    return m;
  }();
  return cache.at(c);
}

// Sweep axes are stored in this order regardless of the order in the file.
inline constexpr std::array<std::string_view, 6> kAxisOrder{"gamma_g", "gamma_d", "epsilon", "delta", "alpha", "beta"};

}  // namespace detail

inline RunConfig resolve_config(Command command, const Entries& entries) {
  const auto& allowed = detail::keys_for(command);
  for (const auto& [k, v] : entries) {
    if (!allowed.contains(k)) {
      throw ConfigError("unknown or unsupported key '" + k + "' for command '" + to_string(command) + "'");
    }
  }
  auto get = [&](const std::string& k) -> std::optional<std::string> {
    auto it = entries.find(k);
    if (it == entries.end()) return std::nullopt;
    return it->second;
  };
  auto number = [&](const std::string& k, double& target) {
    if (auto v = get(k)) target = parse_number(k, *v);
  };
  auto count = [&](const std::string& k, std::size_t& target, std::size_t minimum) {
    if (auto v = get(k)) {
      target = parse_count(k, *v);
      if (target < minimum) throw ConfigError("'" + k + "' must be >= " + std::to_string(minimum));
    }
  };

  RunConfig cfg;
  cfg.command = command;
  const Model expected = command == Command::spin1 ? Model::spin1 : Model::tls;
  cfg.model = expected;
  if (auto m = get("model")) {
    if (*m != "tls" && *m != "spin1") throw ConfigError("'model' must be tls or spin1, got '" + *m + "'");
    const Model requested = *m == "tls" ? Model::tls : Model::spin1;
    if (requested != expected) {
      throw ConfigError("'model' = " + *m + " is not valid for command '" + to_string(command) + "'");
    }
  }

  for (auto name : detail::kAxisOrder) {
    const std::string key = "sweep." + std::string(name);
    if (auto v = get(key)) cfg.axes.push_back(SweepAxis::parse(std::string(name), *v));
  }

  if (cfg.model == Model::spin1) {
    number("alpha", cfg.spin1.alpha);
    number("beta", cfg.spin1.beta);
    if (cfg.spin1.alpha < 0.0) throw ConfigError("'alpha' must be >= 0");
    if (cfg.spin1.beta < 0.0) throw ConfigError("'beta' must be >= 0");
    for (const auto& a : cfg.axes) {
      if (a.start < 0.0) throw ConfigError("'sweep." + a.name + "' must not go below 0");
    }
    return cfg;
  }

  SystemParams& p = cfg.tls;
  number("gamma_g", p.gamma_g);
  number("gamma_d", p.gamma_d);
  number("epsilon", p.epsilon);
  if (auto v = get("omega0")) p.omega0 = parse_number("omega0", *v);
  if (auto v = get("omega")) p.omega = parse_number("omega", *v);
  if (auto v = get("delta")) {
    p.delta = parse_number("delta", *v);
  } else if (p.omega0 && p.omega) {
    p.delta = *p.omega0 - *p.omega;
  }
  try {
    p.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  for (const auto& a : cfg.axes) {
    if (a.name != "delta" && a.start < 0.0) throw ConfigError("'sweep." + a.name + "' must not go below 0");
  }
  if ((p.omega0 || p.omega) && cfg.axis("delta")) {
    throw ConfigError("'sweep.delta' cannot be combined with omega0/omega");
  }

  // Unit of the default grids: the smaller rate, as in the figure captions.
  const double lo = std::min(p.gamma_g, p.gamma_d);
  const double unit = lo > 0.0 ? lo : std::max(std::max(p.gamma_g, p.gamma_d), 1.0);

  switch (command) {
    case Command::tongue:
      number("deformation_threshold", cfg.deformation_threshold);
      if (!cfg.axis("epsilon")) cfg.axes.push_back({"epsilon", 0.0, unit, 81});
      if (!cfg.axis("delta")) cfg.axes.push_back({"delta", -2.0 * unit, 2.0 * unit, 81});
      std::stable_sort(cfg.axes.begin(), cfg.axes.end(), [](const SweepAxis& a, const SweepAxis& b) {
        return a.name == "epsilon" && b.name != "epsilon";
      });
      break;
    case Command::smeasure:
      count("n_phi_measure", cfg.n_phi_measure, 2);
      if (cfg.axes.size() > 1) throw ConfigError("smeasure takes at most one family axis (sweep.delta or sweep.epsilon)");
      break;
    case Command::qsurface:
      count("n_theta", cfg.n_theta, 2);
      count("n_phi", cfg.n_phi, 2);
      break;
    case Command::evolve: {
      number("mx0", cfg.initial.x);
      number("my0", cfg.initial.y);
      number("mz0", cfg.initial.z);
      if (cfg.initial.norm() > 1.0 + tol::kPhysical) throw ConfigError("initial Bloch vector (mx0, my0, mz0) lies outside the unit ball");
      cfg.t_final = 20.0 / std::min(p.total_rate(), 1.0);
      if (!(p.total_rate() > 0.0)) cfg.t_final = 20.0;
      number("t_final", cfg.t_final);
      if (cfg.t_final < 0.0) throw ConfigError("'t_final' must be >= 0");
      cfg.dt = default_time_step(std::max({p.total_rate(), std::abs(p.delta), p.epsilon}));
      number("dt", cfg.dt);
      if (!(cfg.dt > 0.0)) throw ConfigError("'dt' must be > 0");
      count("stride", cfg.stride, 1);
      if (p.omega) {
        cfg.omega = *p.omega;
      } else if (p.omega0) {
        cfg.omega = *p.omega0 - p.delta;
      }
      break;
    }
    default:
      break;
  }
  return cfg;
}

}  // namespace qsync::sweep
