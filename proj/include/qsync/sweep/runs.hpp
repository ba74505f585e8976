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

#include <chrono>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "qsync/liouvillian.hpp"
#include "qsync/phase_space.hpp"
#include "qsync/spin1.hpp"
#include "qsync/sweep/config.hpp"
#include "qsync/sweep/parallel.hpp"
#include "qsync/sweep/table.hpp"
#include "qsync/tls.hpp"

namespace qsync::sweep {

/// Closed form and oracle must agree to this in run_steady.
inline constexpr double kOracleTolerance = 1e-10;
/// Sphere normalization accepted for a Q surface.
inline constexpr double kNormalizationTolerance = 1e-6;

namespace detail {

struct Row {
  std::vector<double> cells;
  std::string status = "ok";
};

/// Cartesian product of the sweep axes, last axis fastest. Each point is a
/// list of (axis name, value); no axes gives a single empty point.
inline std::vector<std::vector<std::pair<std::string, double>>> grid_points(const std::vector<SweepAxis>& axes) {
  std::vector<std::vector<std::pair<std::string, double>>> points{{}};
  for (const auto& axis : axes) {
    std::vector<std::vector<std::pair<std::string, double>>> next;
    const auto values = axis.values();
    next.reserve(points.size() * values.size());
    for (const auto& p : points) {
      for (double v : values) {
        auto q = p;
        q.emplace_back(axis.name, v);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

inline void assign(SystemParams& p, const std::string& name, double v) {
  if (name == "gamma_g") p.gamma_g = v;
  else if (name == "gamma_d") p.gamma_d = v;
  else if (name == "epsilon") p.epsilon = v;
  else if (name == "delta") p.delta = v;
  else throw ConfigError("cannot sweep '" + name + "' for the two-level model");
}

inline void assign(Spin1Params& p, const std::string& name, double v) {
  if (name == "alpha") p.alpha = v;
  else if (name == "beta") p.beta = v;
  else throw ConfigError("cannot sweep '" + name + "' for the spin-1 model");
}

inline ResultTable start_table(const RunConfig& cfg, std::vector<std::string> columns) {
  ResultTable t;
  t.command = to_string(cfg.command);
  t.columns = std::move(columns);
  t.config = cfg.echo();
  return t;
}

inline void fill(ResultTable& t, std::vector<Row>& rows) {
  t.rows.reserve(rows.size());
  for (auto& r : rows) t.add_row(std::move(r.cells), std::move(r.status));
}

template <class Clock = std::chrono::steady_clock>
struct Stopwatch {
  typename Clock::time_point start = Clock::now();
  double seconds() const { return std::chrono::duration<double>(Clock::now() - start).count(); }
};

}  // namespace detail

/// Steady states over the configured axes, closed form next to the
/// Liouvillian nullspace oracle.
inline ResultTable run_steady(const RunConfig& cfg, unsigned jobs = 1) {
  if (cfg.model != Model::tls) throw ConfigError("steady requires model = tls");
  detail::Stopwatch<> clock;
  ResultTable t = detail::start_table(cfg, {"gamma_g", "gamma_d", "epsilon", "delta", "mx", "my", "mz", "mx_oracle",
                                            "my_oracle", "mz_oracle", "max_residual"});
  const auto points = detail::grid_points(cfg.axes);
  std::vector<detail::Row> rows(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    SystemParams p = cfg.tls;
    for (const auto& [name, v] : points[i]) detail::assign(p, name, v);
    detail::Row& row = rows[i];
    row.cells = {p.gamma_g, p.gamma_d, p.epsilon, p.delta, 0, 0, 0, 0, 0, 0, 0};
    try {
      const BlochVector3 closed = steady_state_closed_form(p);
      const BlochVector3 oracle = bloch_from_density(steady_state(tls_liouvillian(p)));
      const double residual = max_abs_diff(closed, oracle);
      row.cells = {p.gamma_g, p.gamma_d, p.epsilon, p.delta, closed.x, closed.y, closed.z,
                   oracle.x,  oracle.y,  oracle.z,  residual};
      if (residual > kOracleTolerance) row.status = "oracle-mismatch";
    } catch (const NonUniqueSteadyState&) {
      row.status = "non-unique";
    }
  });
  detail::fill(t, rows);
  t.wall_seconds = clock.seconds();
  return t;
}

/// Arnold tongue in long format, epsilon-major.
inline ResultTable run_tongue(const RunConfig& cfg, unsigned jobs = 1) {
  if (cfg.model != Model::tls) throw ConfigError("tongue requires model = tls");
  const SweepAxis* eps_axis = cfg.axis("epsilon");
  const SweepAxis* delta_axis = cfg.axis("delta");
  if (!eps_axis || !delta_axis) throw ConfigError("tongue requires sweep.epsilon and sweep.delta");
  if (!(cfg.tls.total_rate() > 0.0)) throw ConfigError("tongue requires gamma_g + gamma_d > 0");
  detail::Stopwatch<> clock;
  ResultTable t = detail::start_table(cfg, {"epsilon", "delta", "S_max", "phi_star", "K_eps2"});
  const auto eps = eps_axis->values();
  const auto deltas = delta_axis->values();
  std::vector<detail::Row> rows(eps.size() * deltas.size());
  parallel_for(rows.size(), jobs, [&](std::size_t k) {
    const TongueCell c = tongue_cell(cfg.tls, eps[k / deltas.size()], deltas[k % deltas.size()]);
    std::string status = to_string(c.status);
    if (c.status != CellStatus::invalid && c.deformation > cfg.deformation_threshold) status += "|deforming";
    rows[k] = {{c.epsilon, c.delta, c.s_max, c.phi_star, c.deformation}, std::move(status)};
  });
  detail::fill(t, rows);
  t.wall_seconds = clock.seconds();
  return t;
}

/// S(phi) curves, one per value of the optional family axis.
inline ResultTable run_smeasure(const RunConfig& cfg, unsigned jobs = 1) {
  if (cfg.model != Model::tls) throw ConfigError("smeasure requires model = tls");
  if (cfg.n_phi_measure < 2) throw ConfigError("'n_phi_measure' must be >= 2");
  detail::Stopwatch<> clock;
  ResultTable t = detail::start_table(cfg, {"family_value", "phi", "S"});
  const std::string family = cfg.axes.empty() ? "delta" : cfg.axes.front().name;
  const std::vector<double> members =
      cfg.axes.empty() ? std::vector<double>{cfg.tls.delta} : cfg.axes.front().values();
  t.notes.emplace_back("family", family);
  const auto phis = linspace(-kPi, kPi, cfg.n_phi_measure);

  std::vector<detail::Row> rows(members.size() * phis.size());
  parallel_for(members.size(), jobs, [&](std::size_t f) {
    SystemParams p = cfg.tls;
    detail::assign(p, family, members[f]);
    std::string status = "ok";
    BlochVector3 m;
    try {
      m = steady_state_closed_form(p);
    } catch (const NonUniqueSteadyState&) {
      status = "non-unique";
    }
    for (std::size_t j = 0; j < phis.size(); ++j) {
      rows[f * phis.size() + j] = {{members[f], phis[j], status == "ok" ? sync_measure(m, phis[j]) : 0.0}, status};
    }
  });
  detail::fill(t, rows);
  t.wall_seconds = clock.seconds();
  return t;
}

/// Husimi Q of the steady state on the (theta, phi) grid.
inline ResultTable run_qsurface(const RunConfig& cfg, unsigned jobs = 1) {
  if (cfg.model != Model::tls) throw ConfigError("qsurface requires model = tls");
  detail::Stopwatch<> clock;
  ResultTable t = detail::start_table(cfg, {"theta", "phi", "Q"});
  std::string status = "ok";
  BlochVector3 m;
  try {
    m = steady_state_closed_form(cfg.tls);
  } catch (const NonUniqueSteadyState&) {
    status = "non-unique";
  }
  const auto thetas = linspace(0.0, kPi, cfg.n_theta);
  const auto phis = linspace(-kPi, kPi, cfg.n_phi);
  QSurface surface{thetas, phis, std::vector<double>(thetas.size() * phis.size(), 0.0)};
  parallel_for(thetas.size(), jobs, [&](std::size_t i) {
    for (std::size_t j = 0; j < phis.size(); ++j) {
      surface.values[i * phis.size() + j] = status == "ok" ? husimi_q(m, thetas[i], phis[j]) : 0.0;
    }
  });
  std::vector<detail::Row> rows(surface.values.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k] = {{thetas[k / phis.size()], phis[k % phis.size()], surface.values[k]}, status};
  }
  detail::fill(t, rows);
  if (status == "ok") {
    const double integral = surface.sphere_integral();
    const auto peak = surface.argmax();
    t.notes.emplace_back("sphere_integral", format_number(integral));
    t.notes.emplace_back("normalization_check",
                         std::abs(integral - 1.0) <= kNormalizationTolerance ? "pass" : "fail");
    t.notes.emplace_back("peak_theta", format_number(peak.theta));
    t.notes.emplace_back("peak_phi", format_number(peak.phi));
  }
  t.wall_seconds = clock.seconds();
  return t;
}

/// RK4 trajectory of the master equation in the drive frame, with the
/// transverse components also rotated back to the lab frame.
inline ResultTable run_evolve(const RunConfig& cfg, unsigned /*jobs*/ = 1) {
  if (cfg.model != Model::tls) throw ConfigError("evolve requires model = tls");
  detail::Stopwatch<> clock;
  ResultTable t = detail::start_table(cfg, {"t", "mx", "my", "mz", "mx_lab", "my_lab"});
  const Liouvillian gen = tls_liouvillian(cfg.tls);
  EvolveOptions options;
  options.stride = cfg.stride;
  const Trajectory traj = evolve(gen, density_from_bloch(cfg.initial), cfg.t_final, cfg.dt, options);
  for (const auto& s : traj.samples) {
    const BlochVector3 m = bloch_from_density(s.rho);
    const BlochVector3 lab = rotate_to_lab_frame(m, cfg.omega, s.time);
    t.add_row({s.time, m.x, m.y, m.z, lab.x, lab.y});
  }
  t.notes.emplace_back("max_trace_drift", format_number(traj.max_trace_drift));
  t.notes.emplace_back("max_hermiticity_drift", format_number(traj.max_hermiticity_drift));
  t.notes.emplace_back("renormalizations", std::to_string(traj.renormalizations));
  t.wall_seconds = clock.seconds();
  return t;
}

/// Spin-1 oracle steady states next to the printed stationary formulas.
inline ResultTable run_spin1(const RunConfig& cfg, unsigned jobs = 1) {
  if (cfg.model != Model::spin1) throw ConfigError("spin1 requires model = spin1");
  detail::Stopwatch<> clock;
  ResultTable t = detail::start_table(cfg, {"alpha", "beta", "p1", "p0", "pm1", "m3_oracle", "m8_oracle", "m3_paper",
                                            "m8_paper", "purity", "paper_formula_physical"});
  const auto points = detail::grid_points(cfg.axes);
  std::vector<detail::Row> rows(points.size());
  parallel_for(points.size(), jobs, [&](std::size_t i) {
    Spin1Params p = cfg.spin1;
    for (const auto& [name, v] : points[i]) detail::assign(p, name, v);
    detail::Row& row = rows[i];
    row.cells = {p.alpha, p.beta, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    if (!(p.alpha + p.beta > 0.0)) {
      row.status = "non-unique";
      return;
    }
    const Spin1Comparison cmp = compare_with_paper_formula(p);
    const Spin1LimitCycleReport report = spin1_limit_cycle_report(p);
    row.cells = {p.alpha,
                 p.beta,
                 report.populations[0],
                 report.populations[1],
                 report.populations[2],
                 cmp.m3_oracle,
                 cmp.m8_oracle,
                 cmp.printed.m3,
                 cmp.printed.m8.value_or(0.0),
                 report.purity,
                 cmp.printed_physical() ? 1.0 : 0.0};
    if (!cmp.printed.m8) row.status = "paper-formula-singular";
  });
  detail::fill(t, rows);
  t.wall_seconds = clock.seconds();
  return t;
}

inline ResultTable run(const RunConfig& cfg, unsigned jobs = 1) {
  switch (cfg.command) {
    case Command::steady: return run_steady(cfg, jobs);
    case Command::tongue: return run_tongue(cfg, jobs);
    case Command::smeasure: return run_smeasure(cfg, jobs);
    case Command::qsurface: return run_qsurface(cfg, jobs);
    case Command::evolve: return run_evolve(cfg, jobs);
    case Command::spin1: return run_spin1(cfg, jobs);
  }
  throw ConfigError("unknown command");
}

}  // namespace qsync::sweep
