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

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace mfc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using RealSparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<Complex>;

inline constexpr Complex kI{0.0, 1.0};

/// Largest chain handled by the many-body (2^N Fock space) engines.
inline constexpr int kMaxExactSites = 12;

/// Failure categories. The numeric values are the C API status codes.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Config = 2,
  SizeLimit = 3,
  Degenerate = 4,
  UndefinedDiffusion = 5,
  Solver = 6,
  Integration = 7,
  Hermiticity = 8,
  InsufficientPoints = 9,
  NonUniformCurrent = 10,
  Io = 11,
  Validation = 12,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mfc
