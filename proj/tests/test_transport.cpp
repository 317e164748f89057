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

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mfc/transport.hpp"
#include "oracles.hpp"

using namespace mfc;

namespace {

TransportConfig covariance_config(int n, double gs = 0.01, double gd = 0.01) {
  TransportConfig cfg;
  cfg.lattice = {n, 1.0};
  cfg.gamma_s = gs;
  cfg.gamma_d = gd;
  cfg.engine = Engine::Covariance;
  return cfg;
}

DiffusionEstimate synthetic(double gamma, double d) {
  DiffusionEstimate e;
  e.gamma = gamma;
  e.d_value = d;
  return e;
}

}  // namespace

TEST_CASE("currents vanish without a coherent phase") {
  std::mt19937_64 rng(1);
  const Matrix sym = oracle::random_hermitian(5, rng).real().cast<Complex>();
  CHECK(bond_currents(sym, 1.0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(bond_currents(0.5 * Matrix::Identity(5, 5), 1.0).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("bond current is minus twice t times the imaginary coherence") {
  Matrix c = Matrix::Zero(3, 3);
  c(0, 1) = Complex(0.1, -0.25);
  c(1, 0) = std::conj(c(0, 1));
  const RealVector j = bond_currents(c, 0.5);
  CHECK(j[0] == doctest::Approx(0.25));
  CHECK(j[1] == 0.0);
}

TEST_CASE("current operator agrees with the two-point function") {
  std::mt19937_64 rng(2);
  const FermionOps ops = fermion_operators(3);
  const DensityMatrix rho{oracle::random_density(8, rng), 0.0};
  const TransportObservables from_rho = observables_from_density(rho, ops, 0.7);
  const TransportObservables from_c = observables_from_covariance(covariance_from_density(rho, ops), 0.7);
  CHECK((from_rho.bond_currents - from_c.bond_currents).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((from_rho.densities - from_c.densities).cwiseAbs().maxCoeff() < 1e-14);
  const Matrix jop = Matrix(current_operator(ops, 1, 0.7));
  CHECK((jop - jop.adjoint()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-site current balances the drain outflow") {
  const TransportConfig cfg = covariance_config(2, 0.2, 0.3);
  TransportConfig exact = cfg;
  exact.engine = Engine::Exact;
  const SteadyTransport r = steady_transport(exact, 1.0);
  CHECK(r.observables.bond_currents[0] == doctest::Approx(0.3 * r.observables.densities[1]).epsilon(1e-12));
}

TEST_CASE("continuity") {
  std::mt19937_64 rng(4);
  const QuadraticHamiltonian h = build_hamiltonian({5, 1.0});
  const Matrix c = oracle::random_hermitian(5, rng);
  SUBCASE("closed system") { CHECK(continuity_check(c, CovarianceGenerator(h, {0.0, 0.0, 0.0})) < 1e-10); }
  SUBCASE("dephasing only") { CHECK(continuity_check(c, CovarianceGenerator(h, {2.0, 0.0, 0.0})) < 1e-10); }
  SUBCASE("driven steady state") {
    const CovarianceGenerator gen(h, {1.0, 0.1, 0.2});
    const CovarianceSteady ss = steady_covariance(gen);
    CHECK(continuity_check(ss.state.c, gen) < 1e-10);
    CHECK(gen.apply(ss.state.c).diagonal().cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("fick estimate") {
  SUBCASE("zero gradient is undefined") {
    TransportObservables obs;
    obs.bond_currents = RealVector::Zero(3);
    obs.densities = RealVector::Constant(4, 0.5);
    try {
      fick_diffusion(obs, 4);
      FAIL("zero gradient accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::UndefinedDiffusion);
    }
  }
  SUBCASE("non-uniform current is rejected") {
    TransportObservables obs;
    obs.bond_currents = RealVector(3);
    obs.bond_currents << 1.0, 1.1, 1.0;
    obs.uniformity_spread = 0.1;
    obs.densities = RealVector(4);
    obs.densities << 0.6, 0.5, 0.5, 0.4;
    try {
      fick_diffusion(obs, 4);
      FAIL("non-uniform current accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonUniformCurrent);
    }
  }
  SUBCASE("six-site baseline") {
    const SteadyTransport r = steady_transport(covariance_config(6), 1.0);
    const oracle::ChainSteady expected = oracle::chain_steady(6, 1.0, 1.0, 0.01, 0.01);
    CHECK(r.estimate.d_value == doctest::Approx(expected.diffusion).epsilon(1e-12));
    CHECK(r.estimate.d_value == doctest::Approx(12.0 / 5.01).epsilon(1e-12));
    CHECK(r.estimate.j12 == doctest::Approx(expected.current).epsilon(1e-12));
    CHECK(r.estimate.n_sites == 6);
    CHECK(r.estimate.engine == Engine::Covariance);
  }
  SUBCASE("doubling gamma halves D") {
    const double d1 = steady_transport(covariance_config(6), 1.0).estimate.d_value;
    const double d2 = steady_transport(covariance_config(6), 2.0).estimate.d_value;
    CHECK(std::abs(d2 / d1 - 0.5) < 0.05);
  }
}

TEST_CASE("steady transport rejects an undriven chain") {
  try {
    steady_transport(covariance_config(4, 0.0, 0.0), 1.0);
    FAIL("undriven chain accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Degenerate);
  }
}

TEST_CASE("default sweep") {
  const std::vector<double> grid = default_gamma_grid();
  REQUIRE(grid.size() == 8);
  CHECK(grid.front() == doctest::Approx(0.125));
  CHECK(grid.back() == doctest::Approx(8.0));
  for (size_t k = 1; k < grid.size(); ++k) CHECK(grid[k] / grid[k - 1] == doctest::Approx(std::pow(64.0, 1.0 / 7)));

  const auto sweep = gamma_sweep(covariance_config(6), grid);
  const auto estimates = successful_estimates(sweep);
  REQUIRE(estimates.size() == 8);
  for (size_t k = 0; k < estimates.size(); ++k) {
    const oracle::ChainSteady expected = oracle::chain_steady(6, 1.0, grid[k], 0.01, 0.01);
    CHECK(estimates[k].gamma == grid[k]);
    CHECK(estimates[k].d_value > 0.0);
    CHECK(estimates[k].j12 > 0.0);
    CHECK(estimates[k].d_value == doctest::Approx(expected.diffusion).epsilon(1e-10));
    CHECK(estimates[k].uniformity_spread <= 1e-6 * std::abs(estimates[k].j12));
    if (k > 0) CHECK(estimates[k].d_value < estimates[k - 1].d_value);
  }
  const ScalingFit fit = fit_scaling(estimates);
  CHECK(std::abs(fit.slope + 1.0) < 0.05);
}

TEST_CASE("sweep edge cases") {
  CHECK(gamma_sweep(covariance_config(4), {}).empty());
  CHECK_THROWS_AS(gamma_sweep(covariance_config(4), {1.0, -1.0}), Error);
  CHECK_THROWS_AS(gamma_sweep(covariance_config(4), {1.0, 1.0}), Error);
}

TEST_CASE("sweep records per-point failures") {
  // A short relaxation horizon is enough at weak dephasing but not in the
  // strongly dephased, slowly relaxing regime.
  TransportConfig cfg = covariance_config(4, 1.0, 1.0);
  cfg.method = SteadyMethod::TimeEvolve;
  cfg.max_time = 200.0;
  const auto sweep = gamma_sweep(cfg, {0.5, 1000.0});
  REQUIRE(sweep.size() == 2);
  CHECK(sweep[0].ok());
  CHECK_FALSE(sweep[1].ok());
  CHECK(sweep[1].gamma == 1000.0);
  CHECK(sweep[1].error_code == ErrorCode::Solver);
  CHECK_FALSE(sweep[1].error.empty());
  CHECK(successful_estimates(sweep).size() == 1);
}

TEST_CASE("exact and covariance engines agree on D") {
  TransportConfig cov = covariance_config(5, 0.05, 0.05);
  TransportConfig exact = cov;
  exact.engine = Engine::Exact;
  const std::vector<double> gammas = {0.25, 1.0, 4.0};
  const auto a = successful_estimates(gamma_sweep(exact, gammas));
  const auto b = successful_estimates(gamma_sweep(cov, gammas));
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 3);
  for (size_t k = 0; k < 3; ++k) {
    CHECK(std::abs(a[k].d_value - b[k].d_value) / std::abs(b[k].d_value) < 1e-6);
    CHECK(a[k].engine == Engine::Exact);
  }
}

TEST_CASE("time-evolved covariance steady state agrees with the direct solve") {
  TransportConfig cfg = covariance_config(4, 0.3, 0.3);
  const SteadyTransport direct = steady_transport(cfg, 1.0);
  cfg.method = SteadyMethod::TimeEvolve;
  const SteadyTransport relaxed = steady_transport(cfg, 1.0);
  CHECK(relaxed.estimate.d_value == doctest::Approx(direct.estimate.d_value).epsilon(1e-8));
}

TEST_CASE("weak drive barely changes D") {
  const double d = steady_transport(covariance_config(6, 0.01, 0.01), 1.0).estimate.d_value;
  const double d_half = steady_transport(covariance_config(6, 0.005, 0.005), 1.0).estimate.d_value;
  CHECK(std::abs(d_half - d) / d < 0.02);
}

TEST_CASE("scaling exponent does not depend on the chain length") {
  for (int n : {4, 6, 12}) {
    const auto est = successful_estimates(gamma_sweep(covariance_config(n), default_gamma_grid()));
    REQUIRE(est.size() == 8);
    std::vector<double> x, y;
    for (const auto& e : est) {
      x.push_back(std::log(e.gamma));
      y.push_back(std::log(e.d_value));
    }
    CHECK(std::abs(oracle::ols_slope(x, y) + 1.0) < 0.05);
  }
}

TEST_CASE("fit on synthetic power laws") {
  std::vector<DiffusionEstimate> inv, inv_sq, scaled;
  for (double g : default_gamma_grid()) {
    inv.push_back(synthetic(g, 3.0 / g));
    inv_sq.push_back(synthetic(g, 3.0 / (g * g)));
    scaled.push_back(synthetic(g, 7.5 / g));
  }
  const ScalingFit a = fit_scaling(inv);
  CHECK(std::abs(a.slope + 1.0) < 1e-12);
  CHECK(std::abs(a.r_squared - 1.0) < 1e-12);
  CHECK(std::abs(a.intercept - std::log(3.0)) < 1e-12);
  CHECK(a.slope_stderr < 1e-12);
  CHECK(std::abs(fit_scaling(inv_sq).slope + 2.0) < 1e-12);
  const ScalingFit c = fit_scaling(scaled);
  CHECK(std::abs(c.slope - a.slope) < 1e-12);
  CHECK(std::abs(c.intercept - a.intercept - std::log(2.5)) < 1e-12);
}

TEST_CASE("fit matches the normal-equation oracle on noisy data") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<DiffusionEstimate> est;
  std::vector<double> x, y;
  for (double g : default_gamma_grid()) {
    est.push_back(synthetic(g, 2.0 * std::pow(g, -0.9) * std::exp(noise(rng))));
    x.push_back(std::log(g));
    y.push_back(std::log(est.back().d_value));
  }
  const ScalingFit fit = fit_scaling(est);
  CHECK(fit.slope == doctest::Approx(oracle::ols_slope(x, y)).epsilon(1e-12));
  CHECK(fit.r_squared < 1.0);
  CHECK(fit.slope_stderr > 0.0);
  CHECK(fit.points.size() == 8);
  CHECK(fit.residuals.size() == 8);
}

TEST_CASE("fit needs four points") {
  std::vector<DiffusionEstimate> est = {synthetic(1, 1), synthetic(2, 0.5), synthetic(4, 0.25)};
  try {
    fit_scaling(est);
    FAIL("three-point fit accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InsufficientPoints);
  }
}
