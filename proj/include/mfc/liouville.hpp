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

// Exact many-body engine: the vectorized Lindblad superoperator on the full
// 2^N Fock space, its time integration and its steady state.
//
// Vectorization is column stacking, vec(A rho B) = (B^T (x) A) vec(rho).

#pragma once

#include <functional>
#include <vector>

#include "mfc/model.hpp"
#include "mfc/ode.hpp"

namespace mfc {

struct DensityMatrix {
  Matrix rho;
  double time = 0.0;

  int n_sites() const;
  static DensityMatrix maximally_mixed(int n_sites);
  /// |s><s| for an occupation pattern listed from site 1 to site N.
  static DensityMatrix occupation(const std::vector<int>& occupations);
  static DensityMatrix pure(const Vector& psi);
};

/// Measured deviations from a physical state.
struct StateDiagnostics {
  double hermiticity = 0.0;  // max |rho - rho^dag|
  double trace_error = 0.0;  // |tr rho - 1|
  double min_eigenvalue = 0.0;
};

StateDiagnostics diagnose(const DensityMatrix& rho);

struct StateTolerances {
  double hermiticity = 1e-9;
  double trace = 1e-9;
  double min_eigenvalue = -1e-7;
};

/// Throws Error(Integration) listing every violated bound.
void check_state(const DensityMatrix& rho, const StateTolerances& tol = {});

struct Superoperator {
  SparseMatrix l;
  int n_sites = 0;

  long hilbert_dim() const { return 1L << n_sites; }
  Matrix apply(const Matrix& rho) const;
};

Superoperator assemble_liouvillian(const QuadraticHamiltonian& h, const std::vector<JumpSpec>& jumps,
                                   const FermionOps& ops);

/// Called after each accepted integration step; return false to stop.
using DensityObserver = std::function<bool(const DensityMatrix&)>;

/// Integrates d rho/dt = L rho up to t_final and re-checks the state invariants.
DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& l, double t_final,
                     const StepControl& ctl = {}, const DensityObserver& observer = {});

enum class SteadyMethod { LinearSolve, NullSpace, TimeEvolve };

struct SteadyOptions {
  SteadyMethod method = SteadyMethod::LinearSolve;
  /// Kernel must be one-dimensional: second-smallest singular value over the
  /// largest (dense route) or the bordered-system conditioning (sparse route).
  double uniqueness_tolerance = 1e-8;
  /// Hilbert spaces up to this many sites use dense factorizations.
  int dense_max_sites = 4;
  StepControl step{1e-12, 1e-10};
  double stationarity_tolerance = 1e-10;  // TimeEvolve: stop when max|L rho| falls below
  double max_time = 1e6;
};

struct SteadyState {
  DensityMatrix state;
  double residual = 0.0;          // max |L vec(rho_ss)|
  double uniqueness_ratio = 0.0;  // measured quantity compared to uniqueness_tolerance
};

/// Throws Error(Degenerate) when the stationary subspace is not one-dimensional.
SteadyState steady_state(const Superoperator& l, const SteadyOptions& options = {});

/// tr(rho obs); throws Error(Hermiticity) if the imaginary part exceeds 1e-10.
double expectation(const DensityMatrix& rho, const SparseMatrix& obs);
double expectation(const DensityMatrix& rho, const Matrix& obs);

}  // namespace mfc
