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

// Dense Lindblad superoperator for small systems (d = 2, 3).
//
//   d rho / dt = -i [H, rho] + sum_k rate_k (O_k rho O_k^+ - 1/2 {O_k^+ O_k, rho})
//
// Density matrices are vectorized column-major: vec(rho)[i + d*j] = rho(i, j),
// so that vec(A rho B) = (B^T kron A) vec(rho).

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "qsync/core_types.hpp"

namespace qsync {

struct JumpChannel {
  Matrix op;
  double rate = 0.0;
};

inline Vector vectorize(const Matrix& rho) {
  return Eigen::Map<const Vector>(rho.data(), rho.size());
}

inline Matrix devectorize(const Vector& v, int dim) {
  return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

namespace detail {

inline void check_generator(const Matrix& hamiltonian, const std::vector<JumpChannel>& channels) {
  if (hamiltonian.rows() != hamiltonian.cols() || hamiltonian.rows() < 1) {
    throw InvalidArgument("Hamiltonian must be square");
  }
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > tol::kAlgebraic) {
    throw InvalidArgument("Hamiltonian must be Hermitian");
  }
  for (const auto& ch : channels) {
    if (ch.op.rows() != hamiltonian.rows() || ch.op.cols() != hamiltonian.cols()) {
      throw InvalidArgument("jump operator dimension does not match the Hamiltonian");
    }
    if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) {
      throw InvalidArgument("jump rates must be finite and >= 0");
    }
  }
}

}  // namespace detail

/// Right-hand side of the master equation evaluated directly on matrices.
inline Matrix master_equation_rhs(const Matrix& hamiltonian, const std::vector<JumpChannel>& channels,
                                  const Matrix& rho) {
  detail::check_generator(hamiltonian, channels);
  Matrix out = -kI * (hamiltonian * rho - rho * hamiltonian);
  for (const auto& ch : channels) {
    const Matrix od = ch.op.adjoint();
    const Matrix n = od * ch.op;
    out += ch.rate * (ch.op * rho * od - 0.5 * (n * rho + rho * n));
  }
  return out;
}

class Liouvillian {
 public:
  Liouvillian(int dim, Matrix generator) : dim_(dim), generator_(std::move(generator)) {}

  int dim() const { return dim_; }
  const Matrix& matrix() const { return generator_; }

  Matrix apply(const Matrix& rho) const { return devectorize(generator_ * vectorize(rho), dim_); }

 private:
  int dim_;
  Matrix generator_;
};

inline Liouvillian build_liouvillian(const Matrix& hamiltonian, const std::vector<JumpChannel>& channels) {
  detail::check_generator(hamiltonian, channels);
  const auto d = hamiltonian.rows();
  const Matrix id = Matrix::Identity(d, d);

  Matrix gen = -kI * Eigen::kroneckerProduct(id, hamiltonian).eval() +
               kI * Eigen::kroneckerProduct(hamiltonian.transpose(), id).eval();
  for (const auto& ch : channels) {
    if (ch.rate == 0.0) continue;
    const Matrix n = ch.op.adjoint() * ch.op;
    gen += ch.rate * (Eigen::kroneckerProduct(ch.op.conjugate(), ch.op).eval() -
                      0.5 * Eigen::kroneckerProduct(id, n).eval() -
                      0.5 * Eigen::kroneckerProduct(n.transpose(), id).eval());
  }
  return Liouvillian(static_cast<int>(d), std::move(gen));
}

/// Relative singular-value threshold below which a direction counts as null.
inline constexpr double kNullspaceThreshold = 1e-8;

/// Unique stationary state of `L`, from the least-squares solution of
/// L vec(rho) = 0 augmented with tr(rho) = 1. The nullspace dimension is
/// checked on the singular values of L first, so a degenerate generator is
/// rejected instead of returning an arbitrary member of the nullspace.
inline DensityMatrix steady_state(const Liouvillian& liouvillian) {
  const int d = liouvillian.dim();
  const Matrix& gen = liouvillian.matrix();
  const Eigen::Index n = gen.rows();

  Eigen::JacobiSVD<Matrix> svd(gen);
  const auto& sv = svd.singularValues();
  const double scale = std::max(1.0, sv(0));
  int nullity = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) <= kNullspaceThreshold * scale) ++nullity;
  }
  if (nullity != 1) {
    throw NonUniqueSteadyState("Liouvillian nullspace has dimension " + std::to_string(nullity) +
                               ", steady state is not unique");
  }

  Matrix augmented = Matrix::Zero(n + 1, n);
  augmented.topRows(n) = gen;
  for (int i = 0; i < d; ++i) augmented(n, i + d * i) = 1.0;
  Vector rhs = Vector::Zero(n + 1);
  rhs(n) = 1.0;
  const Vector v = augmented.colPivHouseholderQr().solve(rhs);

  Matrix rho = devectorize(v, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();

  const double residual = (gen * vectorize(rho)).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-10 * scale)) {
    throw Error("steady-state residual " + std::to_string(residual) + " exceeds tolerance");
  }
  return DensityMatrix(std::move(rho));
}

struct TrajectorySample {
  double time = 0.0;
  DensityMatrix rho;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  double max_trace_drift = 0.0;        // before any renormalization
  double max_hermiticity_drift = 0.0;
  int renormalizations = 0;            // steps whose trace was reset to 1
};

/// dt = 0.01 / max(rates, |detuning|, drive, 1).
inline double default_time_step(double fastest_scale) {
  return 0.01 / std::max(fastest_scale, 1.0);
}

struct EvolveOptions {
  std::size_t stride = 1;             // keep every `stride`-th step (final state always kept)
  double abort_drift = 1e-6;          // trace/Hermiticity drift that aborts the run
  double renormalize_above = 1e-12;   // trace drift that triggers a renormalization
};

/// Classical fixed-step RK4 on vec(rho). The step is shrunk uniformly to
/// t_final / ceil(t_final / dt) so the last sample lands exactly on t_final.
inline Trajectory evolve(const Liouvillian& liouvillian, const DensityMatrix& rho0, double t_final, double dt,
                         const EvolveOptions& options = {}) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be > 0");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw InvalidArgument("t_final must be >= 0");
  if (rho0.dim() != liouvillian.dim()) throw InvalidArgument("initial state dimension mismatch");
  if (options.stride == 0) throw InvalidArgument("stride must be >= 1");

  const int d = liouvillian.dim();
  const Matrix& gen = liouvillian.matrix();
  const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-9));
  const double h = steps == 0 ? 0.0 : t_final / static_cast<double>(steps);

  Trajectory traj;
  traj.samples.reserve(steps / options.stride + 2);
  traj.samples.push_back({0.0, rho0});

  Vector v = vectorize(rho0.matrix());
  for (std::size_t step = 1; step <= steps; ++step) {
    const Vector k1 = gen * v;
    const Vector k2 = gen * (v + 0.5 * h * k1);
    const Vector k3 = gen * (v + 0.5 * h * k2);
    const Vector k4 = gen * (v + h * k3);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    Matrix rho = devectorize(v, d);
    const double t = step == steps ? t_final : h * static_cast<double>(step);
    if (!rho.allFinite()) {
      throw IntegrationError("state became non-finite at t = " + std::to_string(t) + "; reduce dt");
    }
    const double trace_drift = std::abs(rho.trace() - 1.0);
    const double herm_drift = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    traj.max_trace_drift = std::max(traj.max_trace_drift, trace_drift);
    traj.max_hermiticity_drift = std::max(traj.max_hermiticity_drift, herm_drift);
    if (trace_drift > options.abort_drift || herm_drift > options.abort_drift) {
      throw IntegrationError("trace/Hermiticity drift " + std::to_string(std::max(trace_drift, herm_drift)) +
                             " at t = " + std::to_string(t) + "; step too large");
    }
    if (trace_drift > options.renormalize_above) {
      rho /= rho.trace();
      v = vectorize(rho);
      ++traj.renormalizations;
    }
    if (step % options.stride == 0 || step == steps) {
      DensityMatrix sample(std::move(rho));
      const double min_eig = validate_state(sample).min_eigenvalue;
      if (min_eig < -options.abort_drift) {
        throw IntegrationError("state lost positivity (eigenvalue " + std::to_string(min_eig) +
                               ") at t = " + std::to_string(t) + "; step too large");
      }
      traj.samples.push_back({t, std::move(sample)});
    }
  }
  return traj;
}

}  // namespace qsync
