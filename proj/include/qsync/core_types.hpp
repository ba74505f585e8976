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

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qsync {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Tolerances shared by every module. Algebraic identities of the closed forms
// are exact up to rounding; physicality checks leave a little more slack.
namespace tol {
inline constexpr double kAlgebraic = 1e-12;
inline constexpr double kPhysical = 1e-9;
}  // namespace tol

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input: unphysical vector, wrong dimension, out-of-range angle...
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The generator has more than one stationary state (e.g. no dissipation).
class NonUniqueSteadyState : public Error {
 public:
  using Error::Error;
};

/// The time integrator lost trace, Hermiticity or positivity.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Rates and drive of the two-level model in units with hbar = 1.
/// `delta` is the detuning omega0 - omega; `omega0` and `omega` are only
/// needed when rotating results back to the lab frame.
struct SystemParams {
  double gamma_g = 0.0;
  double gamma_d = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::optional<double> omega0;
  std::optional<double> omega;

  double total_rate() const { return gamma_g + gamma_d; }

  /// Throws InvalidArgument on negative rates, negative drive, non-finite
  /// values or an inconsistent (omega0, omega, delta) triple. A vanishing
  /// total rate is reported separately by the steady-state solvers.
  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(gamma_g) || !finite(gamma_d) || !finite(epsilon) || !finite(delta)) {
      throw InvalidArgument("system parameters must be finite");
    }
    if (gamma_g < 0.0) throw InvalidArgument("gamma_g must be >= 0");
    if (gamma_d < 0.0) throw InvalidArgument("gamma_d must be >= 0");
    if (epsilon < 0.0) throw InvalidArgument("epsilon must be >= 0");
    if (omega0 && omega) {
      const double expected = *omega0 - *omega;
      const double scale = std::max({std::abs(*omega0), std::abs(*omega), 1.0});
      if (std::abs(expected - delta) > 1e-12 * scale) {
        throw InvalidArgument("delta must equal omega0 - omega");
      }
    }
  }
};

struct BlochVector3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  double transverse_norm() const { return std::hypot(x, y); }

  friend BlochVector3 operator+(const BlochVector3& a, const BlochVector3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend BlochVector3 operator-(const BlochVector3& a, const BlochVector3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend BlochVector3 operator*(double s, const BlochVector3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const BlochVector3&, const BlochVector3&) = default;
};

inline double max_abs_diff(const BlochVector3& a, const BlochVector3& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

/// A d x d complex matrix (d = 2 or 3) standing for a quantum state.
/// Construction only checks the shape; physicality is reported by
/// validate_state() so that deliberately broken states can be inspected.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols() || (entries_.rows() != 2 && entries_.rows() != 3)) {
      throw InvalidArgument("density matrix must be 2x2 or 3x3");
    }
  }

  static DensityMatrix diagonal(std::initializer_list<double> populations) {
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(populations.size()),
                            static_cast<Eigen::Index>(populations.size()));
    Eigen::Index i = 0;
    for (double p : populations) {
      m(i, i) = p;
      ++i;
    }
    return DensityMatrix(std::move(m));
  }

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& matrix() const { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  double purity() const { return (entries_ * entries_).trace().real(); }

 private:
  Matrix entries_;
};

struct StateDiagnostics {
  double hermiticity_defect = 0.0;  // max |rho_ij - conj(rho_ji)|
  double trace_defect = 0.0;        // |tr rho - 1|
  double min_eigenvalue = 0.0;      // of the Hermitian part
  bool hermitian = false;
  bool unit_trace = false;
  bool positive = false;

  bool physical() const { return hermitian && unit_trace && positive; }
};

namespace pauli {

// Basis order: index 0 = |up> (m_z = +1), index 1 = |down>.
inline Matrix identity() { return Matrix::Identity(2, 2); }

inline Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Matrix sigma_y() {
  Matrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

inline Matrix sigma_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

/// |up><down|, raises the excitation.
inline Matrix sigma_plus() { return 0.5 * (sigma_x() + kI * sigma_y()); }

inline Matrix sigma_minus() { return 0.5 * (sigma_x() - kI * sigma_y()); }

}  // namespace pauli

/// rho = (1 + m . sigma) / 2.
inline DensityMatrix density_from_bloch(const BlochVector3& m) {
  if (!std::isfinite(m.norm()) || m.norm() > 1.0 + tol::kPhysical) {
    throw InvalidArgument("Bloch vector outside the unit ball");
  }
  Matrix rho(2, 2);
  rho(0, 0) = 0.5 * (1.0 + m.z);
  rho(1, 1) = 0.5 * (1.0 - m.z);
  rho(0, 1) = Complex(0.5 * m.x, -0.5 * m.y);
  rho(1, 0) = Complex(0.5 * m.x, 0.5 * m.y);
  return DensityMatrix(std::move(rho));
}

inline BlochVector3 bloch_from_density(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw InvalidArgument("Bloch vector requires a 2x2 density matrix");
  const Complex off = rho(0, 1);
  return {2.0 * off.real(), -2.0 * off.imag(), (rho(0, 0) - rho(1, 1)).real()};
}

inline StateDiagnostics validate_state(const DensityMatrix& rho) {
  const Matrix& m = rho.matrix();
  StateDiagnostics diag;
  diag.hermiticity_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  diag.trace_defect = std::abs(m.trace() - 1.0);
  const Matrix hermitian_part = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part, Eigen::EigenvaluesOnly);
  diag.min_eigenvalue = solver.eigenvalues().minCoeff();
  diag.hermitian = diag.hermiticity_defect <= tol::kAlgebraic;
  diag.unit_trace = diag.trace_defect <= tol::kAlgebraic;
  diag.positive = diag.min_eigenvalue >= -tol::kPhysical;
  return diag;
}

}  // namespace qsync
