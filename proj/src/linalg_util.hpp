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

// Power-iteration singular value estimates for sparse factorized systems.

#pragma once

#include <cmath>

#include <Eigen/Sparse>

namespace mfc::detail {

template <class SparseMat>
double estimate_sigma_max(const SparseMat& a) {
  using Vec = Eigen::Matrix<typename SparseMat::Scalar, Eigen::Dynamic, 1>;
  Vec x = Vec::Ones(a.cols()).normalized();
  double sigma = 0.0;
  for (int it = 0; it < 100; ++it) {
    Vec y = a.adjoint() * (a * x);
    const double norm = y.norm();
    if (norm == 0.0) return 0.0;
    const double next = std::sqrt(norm);
    x = y / norm;
    if (std::abs(next - sigma) < 1e-6 * next) return next;
    sigma = next;
  }
  return sigma;
}

/// 1/||A^-1||_2 using an existing factorization of A.
template <class Solver>
double estimate_sigma_min(Solver& lu, Eigen::Index n) {
  using Vec = Eigen::Matrix<typename Solver::Scalar, Eigen::Dynamic, 1>;
  Vec x = Vec::Ones(n).normalized();
  double inv_norm = 0.0;
  for (int it = 0; it < 100; ++it) {
    Vec y = lu.solve(x);
    Vec z = lu.adjoint().solve(y);
    const double norm = z.norm();
    if (!std::isfinite(norm) || norm == 0.0) return 0.0;
    const double next = std::sqrt(norm);
    x = z / norm;
    if (std::abs(next - inv_norm) < 1e-6 * next) return 1.0 / next;
    inv_norm = next;
  }
  return inv_norm > 0.0 ? 1.0 / inv_norm : 0.0;
}

}  // namespace mfc::detail
