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

#include <cmath>
#include <random>

#include "mfc/theory.hpp"

using namespace mfc;

namespace {

const double kPi = std::acos(-1.0);

TheoryParams params(double v_f, double nu, int dim, double gamma) { return TheoryParams{v_f, nu, dim, gamma}; }

}  // namespace

TEST_CASE("modified diffusion constant") {
  CHECK(std::abs(modified_diffusion(params(1, 1, 1, 1)) - 1.0) < 1e-12);
  CHECK(std::abs(modified_diffusion(params(2, 1, 2, 1)) - 2.0) < 1e-12);
  for (double g : {0.1, 1.0, 7.0}) {
    const double ratio = modified_diffusion(params(1.3, 1, 3, 2 * g)) / modified_diffusion(params(1.3, 1, 3, g));
    CHECK(std::abs(ratio - 0.5) < 1e-12);
  }
}

TEST_CASE("modified diffusion is homogeneous") {
  for (double lambda : {0.5, 2.0, 3.7}) {
    const double base = modified_diffusion(params(1.1, 1, 2, 0.8));
    const double scaled = modified_diffusion(params(lambda * 1.1, 1, 2, lambda * lambda * 0.8));
    CHECK(std::abs(scaled - base) < 1e-12);
  }
}

TEST_CASE("free gas and invalid parameters are rejected") {
  for (const TheoryParams& p : {params(1, 1, 1, 0), params(1, 1, 1, -1), params(0, 1, 1, 1), params(1, 1, 0, 1)}) {
    try {
      modified_diffusion(p);
      FAIL("invalid parameters accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidArgument);
    }
  }
}

TEST_CASE("drude conductivity") {
  CHECK(std::abs(drude_conductivity(params(1, 1, 1, 1)) - 1.0) < 1e-12);
  CHECK(std::abs(drude_conductivity(params(1, 2, 1, 2)) / drude_conductivity(params(1, 2, 1, 1)) - 0.5) < 1e-12);
  CHECK(drude_conductivity(params(1, 1, 1, 1e12)) < 1e-11);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int k = 0; k < 20; ++k) {
    const TheoryParams p = params(u(rng), u(rng), 1 + k % 3, u(rng));
    CHECK(std::abs(drude_conductivity(p) - p.nu * modified_diffusion(p)) < 1e-12);
  }
}

TEST_CASE("diffuson at zero momentum is purely imaginary") {
  const DiffusonPair d = diffuson(0.0, 1.0, params(1, 1 / kPi, 1, 1));
  CHECK(std::abs(d.value_12 - Complex(0, -1)) < 1e-12);
  CHECK(std::abs(d.value_12.real()) < 1e-12);
}

TEST_CASE("static diffusons are real, equal and negative") {
  const TheoryParams p = params(1.2, 0.7, 2, 0.9);
  const DiffusonPair d = diffuson(0.8, 0.0, p);
  CHECK(std::abs(d.value_12.imag()) < 1e-12);
  CHECK(std::abs(d.value_12 - d.value_21) < 1e-12);
  CHECK(d.value_12.real() < 0.0);
  const double dprime = modified_diffusion(p) / 2;
  CHECK(std::abs(d.value_12.real() + 1.0 / (kPi * p.nu * dprime * 0.8)) < 1e-12);
}

TEST_CASE("diffuson conjugation symmetry") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    const TheoryParams p = params(std::abs(u(rng)) + 0.1, std::abs(u(rng)) + 0.1, 1 + k % 3, std::abs(u(rng)) + 0.1);
    const DiffusonPair d = diffuson(std::abs(u(rng)), u(rng), p);
    CHECK(std::abs(d.value_21 - std::conj(d.value_12)) < 1e-12);
  }
}

TEST_CASE("diffuson pole") {
  const TheoryParams p = params(1, 1, 1, 1);
  CHECK_THROWS_AS(diffuson(0.0, 0.0, p), Error);
  CHECK_THROWS_AS(diffuson(-1.0, 1.0, p), Error);
  CHECK_THROWS_AS(diffuson(1.0, 1.0, params(1, 0, 1, 1)), Error);
  double previous = 0.0;
  for (double s : {1.0, 1e-2, 1e-4, 1e-6}) {
    const double mag = std::abs(diffuson(0.3 * s, 0.7 * s, p).value_12);
    CHECK(mag > previous);
    previous = mag;
  }
  CHECK(previous > 1e5);
}

TEST_CASE("scaling comparison") {
  std::vector<DiffusionEstimate> est;
  for (double g : default_gamma_grid()) {
    DiffusionEstimate e;
    e.gamma = g;
    e.d_value = 3.0 / g;
    est.push_back(e);
  }
  const ScalingComparison c = compare_scaling(est);
  CHECK(std::abs(c.fit.slope + 1.0) < 1e-12);
  CHECK(c.theory_slope == -1.0);
  CHECK(c.slope_deviation < 1e-12);
  CHECK(std::abs(c.prefactor_mean - 3.0) < 1e-12);
  CHECK(c.prefactor_rel_spread < 1e-12);
  CHECK(c.prefactors.size() == 8);
}

TEST_CASE("scaling comparison on the six-site chain") {
  TransportConfig cfg;
  cfg.lattice = {6, 1.0};
  const ScalingComparison c = compare_scaling(successful_estimates(gamma_sweep(cfg, default_gamma_grid())));
  CHECK(c.slope_deviation < 0.05);
  CHECK(c.prefactor_rel_spread < 0.10);
}
