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

#include "mfc/model.hpp"
#include "oracles.hpp"

using namespace mfc;

namespace {

Matrix to_dense(const SparseMatrix& m) { return Matrix(m); }

}  // namespace

TEST_CASE("two-site hamiltonian is the exchange matrix") {
  const QuadraticHamiltonian h = build_hamiltonian({2, 1.0});
  Matrix expected(2, 2);
  expected << 0, 1, 1, 0;
  CHECK((h.h - expected).norm() == 0.0);
}

TEST_CASE("six-site hamiltonian is tridiagonal with unit hopping") {
  const QuadraticHamiltonian h = build_hamiltonian({6, 1.0});
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double expected = std::abs(i - j) == 1 ? 1.0 : 0.0;
      CHECK(h.h(i, j) == Complex(expected, 0.0));
    }
  }
  CHECK((h.h - h.h.adjoint()).norm() == 0.0);
}

TEST_CASE("three-site hamiltonian with half hopping") {
  const QuadraticHamiltonian h = build_hamiltonian({3, 0.5});
  CHECK(h.h(0, 1) == Complex(0.5));
  CHECK(h.h(1, 0) == Complex(0.5));
  CHECK(h.h(1, 2) == Complex(0.5));
  CHECK(h.h(2, 1) == Complex(0.5));
  CHECK(h.h(0, 2) == Complex(0.0));
}

TEST_CASE("lattice and monitor validation") {
  CHECK_THROWS_AS(build_hamiltonian({1, 1.0}), Error);
  CHECK_THROWS_AS(build_hamiltonian({4, 0.0}), Error);
  MonitorSpec bad{-1.0, 0.01, 0.01};
  try {
    bad.validate();
    FAIL("negative gamma accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
}

TEST_CASE("jump set: dephasing only") {
  const auto jumps = build_jump_set({3, 1.0}, {0.5, 0.0, 0.0});
  const std::vector<JumpSpec> expected = {
      {JumpKind::Dephase, 1, 0.5}, {JumpKind::Dephase, 2, 0.5}, {JumpKind::Dephase, 3, 0.5}};
  CHECK(jumps == expected);
}

TEST_CASE("jump set: drive only") {
  const auto jumps = build_jump_set({2, 1.0}, {0.0, 0.01, 0.02});
  const std::vector<JumpSpec> expected = {{JumpKind::Pump, 1, 0.01}, {JumpKind::Loss, 2, 0.02}};
  CHECK(jumps == expected);
}

TEST_CASE("jump set: default six-site chain has eight channels") {
  CHECK(build_jump_set({6, 1.0}, {1.0, 0.01, 0.01}).size() == 8);
}

TEST_CASE("single-mode annihilator") {
  const FermionOps ops = fermion_operators(1);
  Matrix expected = Matrix::Zero(2, 2);
  expected(0, 1) = 1.0;
  CHECK((to_dense(ops.c(1)) - expected).norm() == 0.0);
}

TEST_CASE("jordan-wigner operators match the kronecker oracle") {
  for (int n = 1; n <= 5; ++n) {
    const FermionOps ops = fermion_operators(n);
    for (int i = 1; i <= n; ++i) {
      CHECK((to_dense(ops.c(i)) - oracle::annihilator(n, i)).norm() == 0.0);
    }
  }
}

TEST_CASE("canonical anticommutation relations") {
  SUBCASE("two sites, exact zero") {
    const FermionOps ops = fermion_operators(2);
    const Matrix c1 = to_dense(ops.c(1));
    const Matrix c2d = to_dense(ops.c_dag(2));
    CHECK((c1 * c2d + c2d * c1).norm() == 0.0);
  }
  SUBCASE("up to six sites") {
    for (int n = 3; n <= 6; ++n) {
      const FermionOps ops = fermion_operators(n);
      const Matrix id = Matrix::Identity(ops.dim(), ops.dim());
      double worst = 0.0;
      for (int i = 1; i <= n; ++i) {
        const Matrix ci = to_dense(ops.c(i));
        for (int j = 1; j <= n; ++j) {
          const Matrix cj = to_dense(ops.c(j));
          const Matrix cjd = cj.adjoint();
          worst = std::max(worst, (ci * cjd + cjd * ci - (i == j ? id : Matrix::Zero(id.rows(), id.cols())))
                                      .cwiseAbs()
                                      .maxCoeff());
          worst = std::max(worst, (ci * cj + cj * ci).cwiseAbs().maxCoeff());
        }
      }
      CHECK(worst < 1e-14);
    }
  }
}

TEST_CASE("total number has integer spectrum 0..N") {
  const FermionOps ops = fermion_operators(4);
  const Matrix n_tot = to_dense(ops.total_number());
  Eigen::SelfAdjointEigenSolver<Matrix> es(n_tot);
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double v = es.eigenvalues()[k];
    CHECK(std::abs(v - std::round(v)) < 1e-12);
    CHECK(v >= -1e-12);
    CHECK(v <= 4 + 1e-12);
  }
  CHECK(std::abs(es.eigenvalues().maxCoeff() - 4.0) < 1e-12);
}

TEST_CASE("many-body hamiltonian matches the oracle") {
  const FermionOps ops = fermion_operators(4);
  const QuadraticHamiltonian h = build_hamiltonian({4, 0.7});
  const Matrix mb = to_dense(many_body_hamiltonian(h, ops));
  CHECK((mb - oracle::chain_hamiltonian(4, 0.7)).norm() < 1e-14);
}

TEST_CASE("jump operators") {
  const FermionOps ops = fermion_operators(3);
  CHECK((to_dense(jump_operator({JumpKind::Pump, 1, 0.1}, ops)) - oracle::annihilator(3, 1).adjoint()).norm() == 0.0);
  CHECK((to_dense(jump_operator({JumpKind::Loss, 3, 0.1}, ops)) - oracle::annihilator(3, 3)).norm() == 0.0);
  const oracle::Dense c2 = oracle::annihilator(3, 2);
  CHECK((to_dense(jump_operator({JumpKind::Dephase, 2, 0.1}, ops)) - c2.adjoint() * c2).norm() == 0.0);
  CHECK_THROWS_AS(jump_operator({JumpKind::Loss, 4, 0.1}, ops), Error);
}

TEST_CASE("exact size cap") {
  try {
    fermion_operators(kMaxExactSites + 1);
    FAIL("size cap not enforced");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SizeLimit);
  }
}
