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

#include "mfc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mfc/parallel.hpp"

namespace mfc {

namespace {

double spread(const RealVector& v) { return v.size() ? v.maxCoeff() - v.minCoeff() : 0.0; }

// Integrates the covariance EOM from C = I/2 until max|dC/dt| drops below
// the stationarity tolerance.
CovarianceSteady evolve_to_stationary(const CovarianceGenerator& gen, const TransportConfig& config) {
  if (!gen.monitor().driven()) {
    throw Error(ErrorCode::Degenerate, "steady covariance is not unique without drive (gamma_s = gamma_d = 0)");
  }
  CovarianceMatrix c = CovarianceMatrix::maximally_mixed(gen.n_sites());
  double residual = std::numeric_limits<double>::infinity();
  c = evolve_covariance(c, gen, config.max_time, config.step, config.mode, [&](const CovarianceMatrix& now) {
    residual = gen.apply(now.c).cwiseAbs().maxCoeff();
    return residual >= config.stationarity_tolerance;
  });
  if (residual >= config.stationarity_tolerance) {
    throw Error(ErrorCode::Solver, "steady covariance: time evolution did not become stationary by t=" +
                                       std::to_string(config.max_time));
  }
  return CovarianceSteady{c, residual, 0.0};
}

}  // namespace

RealVector bond_currents(const Matrix& c, double hopping) {
  const long n = c.rows();
  RealVector j(std::max<long>(n - 1, 0));
  for (long i = 0; i + 1 < n; ++i) j[i] = -2.0 * hopping * c(i, i + 1).imag();
  return j;
}

TransportObservables observables_from_covariance(const CovarianceMatrix& c, double hopping) {
  TransportObservables out;
  out.bond_currents = bond_currents(c.c, hopping);
  out.densities = c.c.diagonal().real();
  out.uniformity_spread = spread(out.bond_currents);
  return out;
}

SparseMatrix current_operator(const FermionOps& ops, int site, double hopping) {
  if (site < 1 || site >= ops.n_sites) {
    throw Error(ErrorCode::InvalidArgument, "current_operator: bond " + std::to_string(site) + " outside the chain");
  }
  SparseMatrix forward = ops.c_dag(site) * ops.c(site + 1);
  SparseMatrix backward = ops.c_dag(site + 1) * ops.c(site);
  SparseMatrix j = Complex(0.0, hopping) * (forward - backward);
  j.prune(Complex(0.0));
  return j;
}

TransportObservables observables_from_density(const DensityMatrix& rho, const FermionOps& ops, double hopping) {
  TransportObservables out;
  out.bond_currents.resize(ops.n_sites - 1);
  out.densities.resize(ops.n_sites);
  for (int i = 1; i <= ops.n_sites; ++i) out.densities[i - 1] = expectation(rho, ops.number(i));
  for (int i = 1; i < ops.n_sites; ++i) out.bond_currents[i - 1] = expectation(rho, current_operator(ops, i, hopping));
  out.uniformity_spread = spread(out.bond_currents);
  return out;
}

double continuity_check(const Matrix& c, const CovarianceGenerator& gen) {
  const int n = gen.n_sites();
  const Matrix dc = gen.apply(c);
  // Bond currents of the generator's own Hamiltonian: J_{i,i+1} = i (h_{i,i+1} C_{i,i+1} - c.c.).
  const Matrix& h = gen.hamiltonian();
  auto current = [&](int i) {  // 0-based bond (i, i+1)
    const Complex v = kI * (h(i, i + 1) * c(i, i + 1) - std::conj(h(i, i + 1) * c(i, i + 1)));
    return v.real();
  };
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (std::abs(j - k) > 1 && h(j, k) != Complex(0.0)) {
        throw Error(ErrorCode::InvalidArgument, "continuity_check: hamiltonian is not nearest-neighbour");
      }
    }
  }
  double worst = 0.0;
  const MonitorSpec& m = gen.monitor();
  for (int i = 0; i < n; ++i) {
    double expected = 0.0;
    if (i > 0) expected += current(i - 1);
    if (i + 1 < n) expected -= current(i);
    if (i == 0) expected += m.gamma_s * (1.0 - c(0, 0).real());
    if (i == n - 1) expected -= m.gamma_d * c(n - 1, n - 1).real();
    worst = std::max(worst, std::abs(dc(i, i) - expected));
  }
  return worst;
}

const char* engine_name(Engine engine) { return engine == Engine::Exact ? "exact" : "covariance"; }

DiffusionEstimate fick_diffusion(const TransportObservables& obs, int n_sites, double uniformity_tolerance) {
  if (obs.densities.size() != n_sites || obs.bond_currents.size() != n_sites - 1 || n_sites < 2) {
    throw Error(ErrorCode::InvalidArgument, "fick_diffusion: observables do not match n_sites");
  }
  DiffusionEstimate out;
  out.n_sites = n_sites;
  out.j12 = obs.bond_currents[0];
  out.n1 = obs.densities[0];
  out.nN = obs.densities[n_sites - 1];
  out.uniformity_spread = obs.uniformity_spread;
  const double gradient = out.n1 - out.nN;
  if (!(std::abs(gradient) > 1e-12)) {
    throw Error(ErrorCode::UndefinedDiffusion,
                "fick_diffusion: vanishing density difference n_1 - n_N; diffusion constant undefined");
  }
  if (obs.uniformity_spread > uniformity_tolerance * std::abs(out.j12)) {
    std::ostringstream msg;
    msg << "fick_diffusion: bond currents are not uniform (spread " << obs.uniformity_spread << ", |J_12| "
        << std::abs(out.j12) << ", relative tolerance " << uniformity_tolerance << ")";
    throw Error(ErrorCode::NonUniformCurrent, msg.str());
  }
  out.d_value = static_cast<double>(n_sites) * out.j12 / gradient;
  return out;
}

SteadyTransport steady_transport(const TransportConfig& config, double gamma) {
  config.lattice.validate();
  const MonitorSpec monitor{gamma, config.gamma_s, config.gamma_d};
  monitor.validate();
  const QuadraticHamiltonian h = build_hamiltonian(config.lattice);
  SteadyTransport out;
  double residual = 0.0;
  if (config.engine == Engine::Covariance) {
    const CovarianceGenerator gen = derive_generator(h, monitor);
    CovarianceSteady steady;
    if (config.method == SteadyMethod::TimeEvolve) {
      steady = evolve_to_stationary(gen, config);
    } else if (config.method == SteadyMethod::LinearSolve) {
      steady = steady_covariance(gen, config.mode);
    } else {
      throw Error(ErrorCode::Config, "solver: null-space is only available for the exact engine");
    }
    out.observables = observables_from_covariance(steady.state, config.lattice.hopping);
    residual = steady.residual;
  } else {
    const FermionOps ops = fermion_operators(config.lattice.n_sites);
    const Superoperator l = assemble_liouvillian(h, build_jump_set(config.lattice, monitor), ops);
    SteadyOptions options;
    options.method = config.method;
    options.step = config.step;
    options.stationarity_tolerance = config.stationarity_tolerance;
    options.max_time = config.max_time;
    const SteadyState steady = steady_state(l, options);
    out.observables = observables_from_density(steady.state, ops, config.lattice.hopping);
    residual = steady.residual;
  }
  out.estimate = fick_diffusion(out.observables, config.lattice.n_sites, config.uniformity_tolerance);
  out.estimate.gamma = gamma;
  out.estimate.engine = config.engine;
  out.estimate.residual = residual;
  return out;
}

std::vector<SweepPoint> gamma_sweep(const TransportConfig& config, const std::vector<double>& gammas) {
  std::set<double> seen;
  for (double g : gammas) {
    if (!std::isfinite(g) || g <= 0.0) {
      throw Error(ErrorCode::InvalidArgument, "gamma_sweep: gamma values must be positive, got " + std::to_string(g));
    }
    if (!seen.insert(g).second) {
      throw Error(ErrorCode::InvalidArgument, "gamma_sweep: duplicate gamma " + std::to_string(g));
    }
  }
  std::vector<SweepPoint> points(gammas.size());
  parallel_for(gammas.size(), [&](std::size_t i) {
    points[i].gamma = gammas[i];
    try {
      points[i].result = steady_transport(config, gammas[i]);
    } catch (const Error& e) {
      points[i].error_code = e.code();
      points[i].error = e.what();
    } catch (const std::exception& e) {
      points[i].error_code = ErrorCode::Solver;
      points[i].error = e.what();
    }
  });
  return points;
}

ScalingFit fit_line(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) {
    throw Error(ErrorCode::InsufficientPoints,
                "fit: need at least 4 valid points, got " + std::to_string(points.size()));
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (!(sxx > 0.0)) throw Error(ErrorCode::InsufficientPoints, "fit: all x values coincide");
  ScalingFit fit;
  fit.points = points;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssr = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - (fit.intercept + fit.slope * x);
    fit.residuals.push_back(r);
    ssr += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  fit.slope_stderr = std::sqrt(ssr / (n - 2.0) / sxx);
  return fit;
}

ScalingFit fit_scaling(const std::vector<DiffusionEstimate>& estimates) {
  std::vector<std::pair<double, double>> points;
  points.reserve(estimates.size());
  for (const auto& e : estimates) {
    if (!(e.gamma > 0.0) || !(e.d_value > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "fit: gamma and D must be positive for a log-log fit (gamma=" +
                                                  std::to_string(e.gamma) + ", D=" + std::to_string(e.d_value) + ")");
    }
    points.emplace_back(std::log(e.gamma), std::log(e.d_value));
  }
  return fit_line(points);
}

std::vector<DiffusionEstimate> successful_estimates(const std::vector<SweepPoint>& sweep) {
  std::vector<DiffusionEstimate> out;
  for (const auto& p : sweep) {
    if (p.ok()) out.push_back(p.result->estimate);
  }
  return out;
}

std::vector<double> default_gamma_grid() {
  std::vector<double> grid;
  for (int k = 0; k < 8; ++k) grid.push_back(0.125 * std::pow(64.0, k / 7.0));
  return grid;
}

}  // namespace mfc
