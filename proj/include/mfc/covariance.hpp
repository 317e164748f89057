// Copyright 2026 The mfchain Authors
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

// Fast engine: closed equations of motion for the two-point function
// C_jk = <c_j^dag c_k> under a quadratic Hamiltonian, on-site dephasing,
// a pump at site 1 and a loss at site N:
//
//   dC/dt = i (h^T C - C h^T) - G o C + gamma_s e_1 e_1^T
//   G_jk  = gamma (1 - delta_jk) + gamma_s/2 (delta_j1 + delta_k1)
//                                + gamma_d/2 (delta_jN + delta_kN)
//
// where o is the element-wise product. The coefficients are checked against
// the exact Liouvillian by validate_generator_fd().

#pragma once

#include <functional>

#include "mfc/liouville.hpp"
#include "mfc/model.hpp"
#include "mfc/ode.hpp"

namespace mfc {

struct CovarianceMatrix {
  Matrix c;
  double time = 0.0;

  int n_sites() const { return static_cast<int>(c.rows()); }
  /// C = I/2, the two-point function of the maximally mixed state.
  static CovarianceMatrix maximally_mixed(int n_sites);
};

struct CovarianceDiagnostics {
  double hermiticity = 0.0;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

CovarianceDiagnostics diagnose(const CovarianceMatrix& c);

/// Hermitian to 1e-10 and spectrum inside [-1e-8, 1 + 1e-8]; throws Error(Integration).
void check_covariance(const CovarianceMatrix& c, double hermiticity_tol = 1e-10, double occupation_tol = 1e-8);

/// Full: all N^2 complex entries. Hermitian: the N^2 real parameters of the
/// upper triangle (Re diag, then Re/Im of each j < k pair in row-major order).
enum class CovarianceMode { Full, Hermitian };

RealVector pack_hermitian(const Matrix& c);
Matrix unpack_hermitian(const RealVector& x, int n_sites);

/// Affine generator vec(C) -> A vec(C) + b (column-stacked vec).
class CovarianceGenerator {
 public:
  CovarianceGenerator(const QuadraticHamiltonian& h, const MonitorSpec& monitor);

  int n_sites() const { return static_cast<int>(h_.rows()); }
  const Matrix& hamiltonian() const { return h_; }
  const MonitorSpec& monitor() const { return monitor_; }
  /// Element-wise damping rates G_jk.
  const RealMatrix& damping() const { return damping_; }

  /// dC/dt for a given C.
  Matrix apply(const Matrix& c) const;

  const SparseMatrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  /// The same map restricted to Hermitian C in the packed real parameters.
  const RealSparseMatrix& hermitian_a() const { return ha_; }
  const RealVector& hermitian_b() const { return hb_; }

 private:
  Matrix h_;
  MonitorSpec monitor_;
  RealMatrix damping_;
  SparseMatrix a_;
  Vector b_;
  RealSparseMatrix ha_;
  RealVector hb_;
};

CovarianceGenerator derive_generator(const QuadraticHamiltonian& h, const MonitorSpec& monitor);

using CovarianceObserver = std::function<bool(const CovarianceMatrix&)>;

CovarianceMatrix evolve_covariance(const CovarianceMatrix& c0, const CovarianceGenerator& gen, double t_final,
                                   const StepControl& ctl = {}, CovarianceMode mode = CovarianceMode::Hermitian,
                                   const CovarianceObserver& observer = {});

struct CovarianceSteady {
  CovarianceMatrix state;
  double residual = 0.0;   // max |A vec(C) + b|
  double condition = 0.0;  // 2-norm condition estimate of the solved system
};

/// Direct sparse LU solve of A vec(C) + b = 0. Rejects undriven generators
/// with Error(Degenerate).
CovarianceSteady steady_covariance(const CovarianceGenerator& gen, CovarianceMode mode = CovarianceMode::Hermitian);

/// C_jk = tr(rho c_j^dag c_k).
CovarianceMatrix covariance_from_density(const DensityMatrix& rho, const FermionOps& ops);

/// Compares gen.apply(C(rho)) with a fourth-order forward finite difference of
/// C(rho(t)) computed by the exact engine. Returns the max entrywise deviation.
double validate_generator_fd(const QuadraticHamiltonian& h, const MonitorSpec& monitor, const DensityMatrix& rho,
                             const FermionOps& ops, double delta = 1e-3);

}  // namespace mfc
