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

// Closed-form results for the driven two-level system with gain and damping,
// written in the frame rotating at the drive frequency:
//
//   H = (delta sigma_z + epsilon sigma_y) / 2,
//   channels (sigma_+, gamma_g / 2) and (sigma_-, gamma_d / 2).

#include <cmath>
#include <numbers>
#include <vector>

#include "qsync/core_types.hpp"
#include "qsync/liouvillian.hpp"

namespace qsync {

inline Matrix tls_hamiltonian(const SystemParams& p) {
  return 0.5 * (p.delta * pauli::sigma_z() + p.epsilon * pauli::sigma_y());
}

inline std::vector<JumpChannel> tls_channels(const SystemParams& p) {
  return {{pauli::sigma_plus(), 0.5 * p.gamma_g}, {pauli::sigma_minus(), 0.5 * p.gamma_d}};
}

inline Liouvillian tls_liouvillian(const SystemParams& p) {
  p.validate();
  return build_liouvillian(tls_hamiltonian(p), tls_channels(p));
}

/// Time derivative of the Bloch vector in the drive frame.
inline BlochVector3 bloch_ode_rhs(const SystemParams& p, const BlochVector3& m) {
  const double relax = 0.25 * p.total_rate();
  return {
      -relax * m.x - p.delta * m.y + p.epsilon * m.z,
      p.delta * m.x - relax * m.y,
      0.5 * (p.gamma_g * (1.0 - m.z) - p.gamma_d * (1.0 + m.z) - 2.0 * p.epsilon * m.x),
  };
}

namespace detail {

inline void require_dissipation(const SystemParams& p) {
  p.validate();
  if (!(p.total_rate() > 0.0)) {
    throw NonUniqueSteadyState("gamma_g + gamma_d must be > 0 for a unique steady state");
  }
}

}  // namespace detail

/// Stationary Bloch vector of the driven system. The numerator of m_z is
/// (gamma_g - gamma_d), which is what the Bloch equations and the undriven
/// limit m_z = (gamma_g - gamma_d) / (gamma_g + gamma_d) require.
inline BlochVector3 steady_state_closed_form(const SystemParams& p) {
  detail::require_dissipation(p);
  const double g = p.total_rate();
  const double imbalance = p.gamma_g - p.gamma_d;
  const double detuned = g * g + 16.0 * p.delta * p.delta;
  const double denom = detuned + 8.0 * p.epsilon * p.epsilon;
  return {
      4.0 * p.epsilon * imbalance / denom,
      16.0 * p.epsilon * p.delta * imbalance / (g * denom),
      imbalance * detuned / (g * denom),
  };
}

/// Rotation from the drive frame back to the non-rotating frame at time t.
inline BlochVector3 rotate_to_lab_frame(const BlochVector3& m, double omega, double t) {
  const double c = std::cos(omega * t);
  const double s = std::sin(omega * t);
  return {m.x * c - m.y * s, m.x * s + m.y * c, m.z};
}

/// Circle of pure states at fixed polar angle whose uniform mixture is the
/// undriven steady state. Each member precesses at `angular_frequency` in the
/// lab frame.
struct LimitCycleCircle {
  double polar_angle = 0.0;
  double angular_frequency = 0.0;
  bool fixed_point = false;  // circle collapsed onto a pole

  BlochVector3 point(double azimuth) const {
    const double s = std::sin(polar_angle);
    return {s * std::cos(azimuth), s * std::sin(azimuth), std::cos(polar_angle)};
  }
};

inline LimitCycleCircle limit_cycle_circle(const SystemParams& p) {
  detail::require_dissipation(p);
  if (p.epsilon != 0.0) throw InvalidArgument("limit cycle circle is defined for the undriven system");
  LimitCycleCircle circle;
  circle.angular_frequency = p.omega0.value_or(0.0);
  if (p.gamma_g == 0.0 || p.gamma_d == 0.0) {
    circle.fixed_point = true;
    circle.polar_angle = p.gamma_d == 0.0 ? 0.0 : std::numbers::pi;
    return circle;
  }
  circle.polar_angle = std::acos((p.gamma_g - p.gamma_d) / p.total_rate());
  return circle;
}

/// Equal-weight mixture of `n` equally spaced pure states on the circle.
inline DensityMatrix circle_ensemble_state(const LimitCycleCircle& circle, int n) {
  if (n < 1) throw InvalidArgument("ensemble size must be >= 1");
  Matrix rho = Matrix::Zero(2, 2);
  for (int k = 0; k < n; ++k) {
    const double azimuth = 2.0 * std::numbers::pi * k / n;
    rho += density_from_bloch(circle.point(azimuth)).matrix();
  }
  return DensityMatrix(rho / static_cast<double>(n));
}

/// Weak-drive coefficients: the steady state satisfies exactly
///   (m_x, m_y, m_z) (1 + K eps^2) = (A eps, B eps, C).
struct ExpansionCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double k = 0.0;
};

inline ExpansionCoeffs expansion_coeffs(const SystemParams& p) {
  detail::require_dissipation(p);
  const double g = p.total_rate();
  const double imbalance = p.gamma_g - p.gamma_d;
  const double detuned = g * g + 16.0 * p.delta * p.delta;
  return {
      4.0 * imbalance / detuned,
      16.0 * p.delta * imbalance / (g * detuned),
      imbalance / g,
      8.0 / detuned,
  };
}

/// K eps^2: how far the drive pushes m_z away from its undriven value.
inline double deformation_parameter(const SystemParams& p) {
  return expansion_coeffs(p).k * p.epsilon * p.epsilon;
}

inline constexpr double kDefaultDeformationThreshold = 0.1;

inline bool is_deforming(const SystemParams& p, double threshold = kDefaultDeformationThreshold) {
  return deformation_parameter(p) > threshold;
}

}  // namespace qsync
