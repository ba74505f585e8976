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

// Undriven spin-1 model with transitions in both directions:
//
//   d rho / dt = alpha D[S_+] rho + beta D[S_-] rho
//
// Basis order is (|1>, |0>, |-1>). The state is parameterized by eight real
// components m1..m8:
//
//   rho = 1/sqrt(3) * | 1/sqrt3 + m3 + m8/sqrt3   m1 - i m2                 m4 - i m5      |
//                     | m1 + i m2                 1/sqrt3 - m3 + m8/sqrt3   m6 - i m7      |
//                     | m4 + i m5                 m6 + i m7                 1/sqrt3 - 2m8/sqrt3 |
//
// so that m3 = -sqrt(3)/2, m8 = 1/2 is exactly the |0> projector.

#include <array>
#include <cmath>
#include <optional>

#include "qsync/core_types.hpp"
#include "qsync/liouvillian.hpp"

namespace qsync {

struct Spin1Params {
  double alpha = 0.0;  // upward rate (towards |1>)
  double beta = 0.0;   // downward rate (towards |-1>)

  void validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) throw InvalidArgument("spin-1 rates must be finite");
    if (alpha < 0.0) throw InvalidArgument("alpha must be >= 0");
    if (beta < 0.0) throw InvalidArgument("beta must be >= 0");
  }
};

/// m1..m8, stored zero-based; use m(k) for the one-based component.
struct GellmannVector8 {
  std::array<double, 8> components{};

  double m(int k) const { return components.at(static_cast<std::size_t>(k - 1)); }
  double& m(int k) { return components.at(static_cast<std::size_t>(k - 1)); }
};

namespace spin1 {

inline const double kSqrt3 = std::sqrt(3.0);

inline Matrix s_plus() {
  const double r2 = std::sqrt(2.0);
  Matrix s = Matrix::Zero(3, 3);
  s(0, 1) = r2;
  s(1, 2) = r2;
  return s;
}

inline Matrix s_minus() { return s_plus().adjoint(); }

inline Matrix s_z() { return DensityMatrix::diagonal({1.0, 0.0, -1.0}).matrix(); }

/// Reference point of the |0> state.
inline GellmannVector8 zero_state_vector() {
  GellmannVector8 v;
  v.m(3) = -kSqrt3 / 2.0;
  v.m(8) = 0.5;
  return v;
}

}  // namespace spin1

inline DensityMatrix gellmann_to_density(const GellmannVector8& v) {
  const double s3 = spin1::kSqrt3;
  Matrix rho(3, 3);
  rho(0, 0) = 1.0 / 3.0 + v.m(3) / s3 + v.m(8) / 3.0;
  rho(1, 1) = 1.0 / 3.0 - v.m(3) / s3 + v.m(8) / 3.0;
  rho(2, 2) = 1.0 / 3.0 - 2.0 * v.m(8) / 3.0;
  rho(1, 0) = Complex(v.m(1), v.m(2)) / s3;
  rho(2, 0) = Complex(v.m(4), v.m(5)) / s3;
  rho(2, 1) = Complex(v.m(6), v.m(7)) / s3;
  rho(0, 1) = std::conj(rho(1, 0));
  rho(0, 2) = std::conj(rho(2, 0));
  rho(1, 2) = std::conj(rho(2, 1));
  return DensityMatrix(std::move(rho));
}

inline GellmannVector8 density_to_gellmann(const DensityMatrix& rho) {
  if (rho.dim() != 3) throw InvalidArgument("Gell-Mann parameterization requires a 3x3 density matrix");
  const double s3 = spin1::kSqrt3;
  GellmannVector8 v;
  v.m(1) = s3 * rho(1, 0).real();
  v.m(2) = s3 * rho(1, 0).imag();
  v.m(4) = s3 * rho(2, 0).real();
  v.m(5) = s3 * rho(2, 0).imag();
  v.m(6) = s3 * rho(2, 1).real();
  v.m(7) = s3 * rho(2, 1).imag();
  v.m(3) = 0.5 * s3 * (rho(0, 0) - rho(1, 1)).real();
  v.m(8) = 0.5 * (1.0 - 3.0 * rho(2, 2).real());
  return v;
}

inline Liouvillian spin1_liouvillian(const Spin1Params& p) {
  p.validate();
  return build_liouvillian(Matrix::Zero(3, 3), {{spin1::s_plus(), p.alpha}, {spin1::s_minus(), p.beta}});
}

/// Steady state from the Liouvillian nullspace; this is the reference the
/// printed stationary formulas are compared against.
inline DensityMatrix spin1_steady_oracle(const Spin1Params& p) {
  p.validate();
  if (!(p.alpha + p.beta > 0.0)) throw NonUniqueSteadyState("alpha + beta must be > 0 for a unique steady state");
  return steady_state(spin1_liouvillian(p));
}

/// The stationary m3 and m8 exactly as printed in the source article, kept
/// for side-by-side comparison only. m8 is singular at alpha = 0.
struct PrintedStationary {
  double m3 = 0.0;
  std::optional<double> m8;
};

inline PrintedStationary spin1_paper_formula(const Spin1Params& p) {
  p.validate();
  const double a = p.alpha;
  const double b = p.beta;
  if (!(a + b > 0.0)) throw InvalidArgument("alpha + beta must be > 0");
  PrintedStationary out;
  out.m3 = (-12.0 * a * a - 6.0 * a * b) / (spin1::kSqrt3 * (2.0 * a + 4.0 * b) * (2.0 * a + b));
  if (a > 0.0) out.m8 = 0.5 + b * (a - 4.0 * b) / (2.0 * a * (2.0 * a + b));
  return out;
}

/// Side-by-side record of the printed formulas and the oracle.
struct Spin1Comparison {
  double m3_oracle = 0.0;
  double m8_oracle = 0.0;
  PrintedStationary printed;
  double m3_deviation = 0.0;
  std::optional<double> m8_deviation;
  std::optional<StateDiagnostics> printed_state;  // absent when m8 is singular
  StateDiagnostics oracle_state;

  bool printed_physical() const { return printed_state && printed_state->physical(); }
};

inline Spin1Comparison compare_with_paper_formula(const Spin1Params& p) {
  const DensityMatrix oracle = spin1_steady_oracle(p);
  const GellmannVector8 ov = density_to_gellmann(oracle);
  Spin1Comparison cmp;
  cmp.m3_oracle = ov.m(3);
  cmp.m8_oracle = ov.m(8);
  cmp.printed = spin1_paper_formula(p);
  cmp.m3_deviation = cmp.printed.m3 - cmp.m3_oracle;
  cmp.oracle_state = validate_state(oracle);
  if (cmp.printed.m8) {
    cmp.m8_deviation = *cmp.printed.m8 - cmp.m8_oracle;
    GellmannVector8 pv;
    pv.m(3) = cmp.printed.m3;
    pv.m(8) = *cmp.printed.m8;
    cmp.printed_state = validate_state(gellmann_to_density(pv));
  }
  return cmp;
}

struct Spin1LimitCycleReport {
  double purity = 1.0;
  bool mixed = false;
  double m3_offset = 0.0;  // m3 - m3(|0>)
  double m8_offset = 0.0;  // m8 - m8(|0>)
  std::array<double, 3> populations{};
};

inline Spin1LimitCycleReport spin1_limit_cycle_report(const Spin1Params& p) {
  const DensityMatrix rho = spin1_steady_oracle(p);
  const GellmannVector8 v = density_to_gellmann(rho);
  const GellmannVector8 zero = spin1::zero_state_vector();
  Spin1LimitCycleReport r;
  r.purity = rho.purity();
  r.mixed = r.purity < 1.0 - tol::kPhysical;
  r.m3_offset = v.m(3) - zero.m(3);
  r.m8_offset = v.m(8) - zero.m(8);
  for (int i = 0; i < 3; ++i) r.populations[static_cast<std::size_t>(i)] = rho(i, i).real();
  return r;
}

}  // namespace qsync
