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

// Steady-state transport: bond currents, the discrete Fick's law estimate
//   D = N <J_12> / (<n_1> - <n_N>)
// (positive for source-to-drain flow), gamma sweeps and the log-log fit.
//
// Bond current J_{i,i+1} = i t (c_i^dag c_{i+1} - c_{i+1}^dag c_i), so
// <J_{i,i+1}> = -2 t Im C_{i,i+1}.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mfc/covariance.hpp"
#include "mfc/liouville.hpp"
#include "mfc/model.hpp"

namespace mfc {

struct TransportObservables {
  RealVector bond_currents;  // N-1 entries, bond (i, i+1) at index i-1
  RealVector densities;      // N entries
  double uniformity_spread = 0.0;
};

RealVector bond_currents(const Matrix& c, double hopping);
TransportObservables observables_from_covariance(const CovarianceMatrix& c, double hopping);

/// Many-body J_{site,site+1}.
SparseMatrix current_operator(const FermionOps& ops, int site, double hopping);
TransportObservables observables_from_density(const DensityMatrix& rho, const FermionOps& ops, double hopping);

/// Max over sites of |dn_i/dt - (J_{i-1,i} - J_{i,i+1} + pump_i - loss_i)|
/// with dn_i/dt read from the generator.
double continuity_check(const Matrix& c, const CovarianceGenerator& gen);

enum class Engine { Exact, Covariance };

const char* engine_name(Engine engine);

struct DiffusionEstimate {
  double gamma = 0.0;
  double d_value = 0.0;
  double j12 = 0.0;
  double n1 = 0.0;
  double nN = 0.0;
  int n_sites = 0;
  Engine engine = Engine::Covariance;
  double residual = 0.0;
  double uniformity_spread = 0.0;
};

/// Uses bond (1,2) after checking spread/|J_12| <= uniformity_tolerance
/// (Error(NonUniformCurrent)). Throws Error(UndefinedDiffusion) when
/// |n_1 - n_N| <= 1e-12. gamma, engine and residual are left for the caller.
DiffusionEstimate fick_diffusion(const TransportObservables& obs, int n_sites, double uniformity_tolerance = 1e-6);

struct TransportConfig {
  LatticeSpec lattice;
  double gamma_s = 0.01;
  double gamma_d = 0.01;
  Engine engine = Engine::Covariance;
  SteadyMethod method = SteadyMethod::LinearSolve;
  CovarianceMode mode = CovarianceMode::Hermitian;
  double uniformity_tolerance = 1e-6;
  StepControl step{1e-12, 1e-10};
  double stationarity_tolerance = 1e-10;
  double max_time = 1e6;
};

struct SteadyTransport {
  TransportObservables observables;
  DiffusionEstimate estimate;
};

SteadyTransport steady_transport(const TransportConfig& config, double gamma);

struct SweepPoint {
  double gamma = 0.0;
  std::optional<SteadyTransport> result;
  ErrorCode error_code = ErrorCode::Solver;
  std::string error;

  bool ok() const { return result.has_value(); }
};

/// One point per gamma in input order; per-point failures are recorded, not
/// thrown. Gammas must be positive and distinct.
std::vector<SweepPoint> gamma_sweep(const TransportConfig& config, const std::vector<double>& gammas);

struct ScalingFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;  // (ln gamma, ln D)
  std::vector<double> residuals;
};

/// OLS of y on x. Needs at least 4 points (Error(InsufficientPoints)).
ScalingFit fit_line(const std::vector<std::pair<double, double>>& points);

/// OLS on (ln gamma, ln D).
ScalingFit fit_scaling(const std::vector<DiffusionEstimate>& estimates);

std::vector<DiffusionEstimate> successful_estimates(const std::vector<SweepPoint>& sweep);

/// 8 log-spaced points from 0.125 to 8.
std::vector<double> default_gamma_grid();

}  // namespace mfc
