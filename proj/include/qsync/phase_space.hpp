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

// Husimi Q function of a spin-1/2 state, the phase-resolved synchronization
// measure S(phi) and its maximum over phi (the Arnold tongue observable).

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "qsync/core_types.hpp"
#include "qsync/quadrature.hpp"
#include "qsync/tls.hpp"

namespace qsync {

inline constexpr double kPi = std::numbers::pi;

/// |theta, phi> = cos(theta/2) |up> + e^{i phi} sin(theta/2) |down>, the +1
/// eigenstate of n . sigma with n = (sin t cos p, sin t sin p, cos t).
struct SpinCoherentState {
  double theta = 0.0;
  double phi = 0.0;
  Eigen::Vector2cd amplitudes = Eigen::Vector2cd(1.0, 0.0);

  BlochVector3 direction() const {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
  }
};

inline SpinCoherentState coherent_state(double theta, double phi) {
  constexpr double slack = 1e-12;
  if (!(theta >= -slack && theta <= kPi + slack)) throw InvalidArgument("theta must lie in [0, pi]");
  if (!(phi >= -kPi - slack && phi <= kPi + slack)) throw InvalidArgument("phi must lie in [-pi, pi]");
  SpinCoherentState s;
  s.theta = theta;
  s.phi = phi;
  s.amplitudes(0) = std::cos(0.5 * theta);
  s.amplitudes(1) = std::polar(std::sin(0.5 * theta), phi);
  return s;
}

/// Q(theta, phi) = <theta, phi| rho |theta, phi> / (2 pi).
inline double husimi_q(const DensityMatrix& rho, double theta, double phi) {
  if (rho.dim() != 2) throw InvalidArgument("husimi_q is defined for spin-1/2 states");
  const auto psi = coherent_state(theta, phi).amplitudes;
  const Complex overlap = psi.dot(rho.matrix() * psi);
  return overlap.real() / (2.0 * kPi);
}

/// Same quantity from the Bloch vector: (1 + m . n(theta, phi)) / (4 pi).
inline double husimi_q(const BlochVector3& m, double theta, double phi) {
  const double st = std::sin(theta);
  return (1.0 + m.x * std::cos(phi) * st + m.y * std::sin(phi) * st + m.z * std::cos(theta)) / (4.0 * kPi);
}

/// Q sampled on a uniform (theta, phi) grid over [0, pi] x [-pi, pi].
struct QSurface {
  std::vector<double> thetas;
  std::vector<double> phis;
  std::vector<double> values;  // row-major: values[i * phis.size() + j]

  double at(std::size_t i, std::size_t j) const { return values[i * phis.size() + j]; }

  /// Integral of Q over the sphere: Simpson in theta (odd node counts,
  /// trapezoid otherwise) and periodic trapezoid in phi.
  double sphere_integral() const {
    const std::size_t nt = thetas.size();
    const std::size_t np = phis.size();
    if (nt < 2 || np < 2) throw InvalidArgument("grid too small for quadrature");
    const double hp = phis[1] - phis[0];
    std::vector<double> marginal(nt);
    for (std::size_t i = 0; i < nt; ++i) {
      const std::span<const double> row(values.data() + i * np, np);
      marginal[i] = trapezoid(row, hp) * std::sin(thetas[i]);
    }
    const double ht = thetas[1] - thetas[0];
    return nt % 2 == 1 && nt >= 3 ? simpson(marginal, ht) : trapezoid(marginal, ht);
  }

  struct Peak {
    std::size_t i = 0;
    std::size_t j = 0;
    double theta = 0.0;
    double phi = 0.0;
    double value = 0.0;
  };

  Peak argmax() const {
    Peak best{0, 0, thetas.front(), phis.front(), values.front()};
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      for (std::size_t j = 0; j < phis.size(); ++j) {
        if (at(i, j) > best.value) best = {i, j, thetas[i], phis[j], at(i, j)};
      }
    }
    return best;
  }
};

inline constexpr std::size_t kDefaultThetaNodes = 181;
inline constexpr std::size_t kDefaultPhiNodes = 361;

inline QSurface q_surface(const BlochVector3& m, std::size_t n_theta = kDefaultThetaNodes,
                          std::size_t n_phi = kDefaultPhiNodes) {
  if (n_theta < 2 || n_phi < 2) throw InvalidArgument("Q surface needs at least 2 nodes per axis");
  QSurface s;
  s.thetas = linspace(0.0, kPi, n_theta);
  s.phis = linspace(-kPi, kPi, n_phi);
  s.values.reserve(n_theta * n_phi);
  for (double t : s.thetas) {
    for (double p : s.phis) s.values.push_back(husimi_q(m, t, p));
  }
  return s;
}

/// S(phi) = (m_x cos phi + m_y sin phi) / 8.
inline double sync_measure(const BlochVector3& m, double phi) {
  return 0.125 * (m.x * std::cos(phi) + m.y * std::sin(phi));
}

/// S(phi) from its definition, int_0^pi sin(theta) Q(theta, phi) dtheta - 1/(2 pi),
/// with Q evaluated as the coherent-state expectation value.
inline double sync_measure_quadrature(const DensityMatrix& rho, double phi,
                                      std::size_t n_theta = kDefaultThetaNodes) {
  const auto thetas = linspace(0.0, kPi, n_theta);
  std::vector<double> integrand(n_theta);
  for (std::size_t i = 0; i < n_theta; ++i) {
    integrand[i] = std::sin(thetas[i]) * husimi_q(rho, thetas[i], phi);
  }
  return simpson(integrand, thetas[1] - thetas[0]) - 1.0 / (2.0 * kPi);
}

struct SyncPeak {
  double s_max = 0.0;
  double phi_star = 0.0;
  bool degenerate = false;  // no transverse component, phi_star meaningless
};

/// Below this transverse Bloch length the phase of the peak is reported as 0.
inline constexpr double kDegenerateTransverse = 1e-14;

inline SyncPeak max_sync(const BlochVector3& m) {
  const double r = m.transverse_norm();
  if (r <= kDegenerateTransverse) return {0.125 * r, 0.0, true};
  return {0.125 * r, std::atan2(m.y, m.x), false};
}

enum class CellStatus { ok, degenerate_phase, invalid };

inline std::string to_string(CellStatus s) {
  switch (s) {
    case CellStatus::ok: return "ok";
    case CellStatus::degenerate_phase: return "degenerate-phase";
    case CellStatus::invalid: return "invalid";
  }
  return "invalid";
}

struct TongueCell {
  double epsilon = 0.0;
  double delta = 0.0;
  double s_max = 0.0;
  double phi_star = 0.0;
  double deformation = 0.0;  // K eps^2
  CellStatus status = CellStatus::ok;
};

inline TongueCell tongue_cell(const SystemParams& base, double epsilon, double delta) {
  SystemParams p = base;
  p.epsilon = epsilon;
  p.delta = delta;
  p.omega0.reset();
  p.omega.reset();
  TongueCell cell{epsilon, delta};
  try {
    const SyncPeak peak = max_sync(steady_state_closed_form(p));
    cell.s_max = peak.s_max;
    cell.phi_star = peak.phi_star;
    cell.deformation = deformation_parameter(p);
    cell.status = peak.degenerate ? CellStatus::degenerate_phase : CellStatus::ok;
  } catch (const Error&) {
    cell.status = CellStatus::invalid;
  }
  return cell;
}

/// S_max over an (epsilon, delta) grid; cells are stored epsilon-major.
/// Failing cells are marked invalid and the sweep continues.
struct TongueGrid {
  std::vector<double> epsilons;
  std::vector<double> deltas;
  std::vector<TongueCell> cells;

  const TongueCell& at(std::size_t i, std::size_t j) const { return cells[i * deltas.size() + j]; }
};

inline TongueGrid arnold_tongue(const SystemParams& base, std::span<const double> eps_grid,
                                std::span<const double> delta_grid) {
  if (eps_grid.empty() || delta_grid.empty()) throw InvalidArgument("tongue grids must be non-empty");
  detail::require_dissipation(base);
  TongueGrid grid{{eps_grid.begin(), eps_grid.end()}, {delta_grid.begin(), delta_grid.end()}, {}};
  grid.cells.reserve(eps_grid.size() * delta_grid.size());
  for (double e : eps_grid) {
    for (double d : delta_grid) grid.cells.push_back(tongue_cell(base, e, d));
  }
  return grid;
}

}  // namespace qsync
