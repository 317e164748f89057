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

#include "mfc/liouville.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include "linalg_util.hpp"

namespace mfc {

namespace {

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, long dim) { return Eigen::Map<const Matrix>(v.data(), dim, dim); }

double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Complex trace_of_vec(const Vector& v, long dim) {
  Complex tr = 0.0;
  for (long i = 0; i < dim; ++i) tr += v[i + i * dim];
  return tr;
}

DensityMatrix from_kernel_vector(const Vector& x, long dim) {
  const Complex tr = trace_of_vec(x, dim);
  if (std::abs(tr) < 1e-300) {
    throw Error(ErrorCode::Solver, "steady state: kernel vector has zero trace");
  }
  Matrix rho = unvec(x / tr, dim);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix{rho, 0.0};
}

// Bordered system [[L, u], [w^T, 0]] with u = w = vec(I)/sqrt(d). It is
// non-singular exactly when ker L is one-dimensional, since trace
// preservation puts range(L) orthogonal to vec(I).
SparseMatrix bordered(const Superoperator& l) {
  const long d = l.hilbert_dim();
  const long n = d * d;
  const double weight = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<Triplet> entries;
  entries.reserve(static_cast<size_t>(l.l.nonZeros() + 2 * d));
  for (int k = 0; k < l.l.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(l.l, k); it; ++it) entries.emplace_back(it.row(), it.col(), it.value());
  }
  for (long i = 0; i < d; ++i) {
    entries.emplace_back(i + i * d, n, weight);
    entries.emplace_back(n, i + i * d, weight);
  }
  SparseMatrix b(n + 1, n + 1);
  b.setFromTriplets(entries.begin(), entries.end());
  b.makeCompressed();
  return b;
}

std::string degeneracy_message(double ratio, double tolerance) {
  std::ostringstream msg;
  msg << "steady state is not unique (stationary subspace has dimension > 1; measured ratio " << ratio
      << " <= " << tolerance
      << "). Without pump or loss every particle-number sector has its own stationary state; "
         "set gamma_s or gamma_d > 0";
  return msg.str();
}

SteadyState dense_steady(const Superoperator& l, const SteadyOptions& options) {
  const long d = l.hilbert_dim();
  const long n = d * d;
  Matrix dense = Matrix(l.l);
  Eigen::BDCSVD<Matrix> svd(dense, options.method == SteadyMethod::NullSpace ? Eigen::ComputeFullV : 0);
  const auto& sv = svd.singularValues();
  const double ratio = sv[0] > 0.0 ? sv[n - 2] / sv[0] : 0.0;
  if (!(ratio > options.uniqueness_tolerance)) {
    throw Error(ErrorCode::Degenerate, degeneracy_message(ratio, options.uniqueness_tolerance));
  }
  Vector x;
  if (options.method == SteadyMethod::NullSpace) {
    x = svd.matrixV().col(n - 1);
  } else {
    Matrix constrained = dense;
    constrained.row(0).setZero();
    for (long i = 0; i < d; ++i) constrained(0, i + i * d) = 1.0;
    Vector rhs = Vector::Zero(n);
    rhs[0] = 1.0;
    x = constrained.partialPivLu().solve(rhs);
  }
  SteadyState out{from_kernel_vector(x, d), 0.0, ratio};
  out.residual = max_abs(l.l * vec(out.state.rho));
  return out;
}

SteadyState sparse_steady(const Superoperator& l, const SteadyOptions& options) {
  const long d = l.hilbert_dim();
  const long n = d * d;
  SparseMatrix b = bordered(l);
  Eigen::SparseLU<SparseMatrix> lu;
  lu.compute(b);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorCode::Degenerate, degeneracy_message(0.0, options.uniqueness_tolerance));
  }
  const double sigma_max = detail::estimate_sigma_max(b);
  const double ratio = sigma_max > 0.0 ? detail::estimate_sigma_min(lu, n + 1) / sigma_max : 0.0;
  if (!(ratio > options.uniqueness_tolerance)) {
    throw Error(ErrorCode::Degenerate, degeneracy_message(ratio, options.uniqueness_tolerance));
  }

  Vector x;
  if (options.method == SteadyMethod::NullSpace) {
    // Shift-invert iteration towards the eigenvalue closest to zero.
    SparseMatrix shifted = l.l;
    const double shift = 1e-9 * sigma_max;
    for (long i = 0; i < n; ++i) shifted.coeffRef(i, i) -= shift;
    Eigen::SparseLU<SparseMatrix> inv;
    inv.compute(shifted);
    if (inv.info() != Eigen::Success) throw Error(ErrorCode::Solver, "steady state: shift-invert factorization failed");
    x = vec(Matrix::Identity(d, d) / static_cast<double>(d));
    for (int it = 0; it < 50; ++it) {
      x = inv.solve(x);
      x /= x.norm();
      if (max_abs(l.l * x) < 1e-14 * sigma_max) break;
    }
  } else {
    Vector rhs = Vector::Zero(n + 1);
    rhs[n] = 1.0;  // trace fixed up to the normalization in from_kernel_vector
    Vector full = lu.solve(rhs);
    x = full.head(n);
  }
  SteadyState out{from_kernel_vector(x, d), 0.0, ratio};
  out.residual = max_abs(l.l * vec(out.state.rho));
  return out;
}

}  // namespace

int DensityMatrix::n_sites() const {
  int n = 0;
  while ((1L << n) < rho.rows()) ++n;
  return n;
}

DensityMatrix DensityMatrix::maximally_mixed(int n_sites) {
  check_exact_size(n_sites);
  const long d = 1L << n_sites;
  return {Matrix::Identity(d, d) / static_cast<double>(d), 0.0};
}

DensityMatrix DensityMatrix::occupation(const std::vector<int>& occupations) {
  const int n = static_cast<int>(occupations.size());
  check_exact_size(n);
  long index = 0;
  for (int site = 0; site < n; ++site) {
    if (occupations[site] != 0) index |= 1L << (n - 1 - site);
  }
  const long d = 1L << n;
  Matrix rho = Matrix::Zero(d, d);
  rho(index, index) = 1.0;
  return {rho, 0.0};
}

DensityMatrix DensityMatrix::pure(const Vector& psi) {
  const Vector unit = psi.normalized();
  return {unit * unit.adjoint(), 0.0};
}

StateDiagnostics diagnose(const DensityMatrix& rho) {
  StateDiagnostics out;
  out.hermiticity = (rho.rho - rho.rho.adjoint()).cwiseAbs().maxCoeff();
  out.trace_error = std::abs(rho.rho.trace() - 1.0);
  const Matrix herm = 0.5 * (rho.rho + rho.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(herm, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  return out;
}

void check_state(const DensityMatrix& rho, const StateTolerances& tol) {
  const StateDiagnostics diag = diagnose(rho);
  std::ostringstream msg;
  if (diag.hermiticity > tol.hermiticity) msg << " hermiticity=" << diag.hermiticity;
  if (diag.trace_error > tol.trace) msg << " trace_error=" << diag.trace_error;
  if (diag.min_eigenvalue < tol.min_eigenvalue) msg << " min_eigenvalue=" << diag.min_eigenvalue;
  if (!msg.str().empty()) {
    throw Error(ErrorCode::Integration, "density matrix invariants violated at t=" + std::to_string(rho.time) + ":" +
                                            msg.str());
  }
}

Matrix Superoperator::apply(const Matrix& rho) const {
  const long d = hilbert_dim();
  if (rho.rows() != d || rho.cols() != d) {
    throw Error(ErrorCode::InvalidArgument, "superoperator applied to a state of the wrong dimension");
  }
  return unvec(l * vec(rho), d);
}

Superoperator assemble_liouvillian(const QuadraticHamiltonian& h, const std::vector<JumpSpec>& jumps,
                                   const FermionOps& ops) {
  check_exact_size(ops.n_sites);
  if (h.n_sites() != ops.n_sites) {
    throw Error(ErrorCode::InvalidArgument, "dimension mismatch: hamiltonian has " + std::to_string(h.n_sites()) +
                                                " sites, fermion operators have " + std::to_string(ops.n_sites));
  }
  const SparseMatrix id = ops.identity();
  const SparseMatrix hmb = many_body_hamiltonian(h, ops);

  SparseMatrix l = Eigen::kroneckerProduct(id, hmb);
  l *= -kI;
  SparseMatrix right = Eigen::kroneckerProduct(SparseMatrix(hmb.transpose()), id);
  l += kI * right;

  for (const JumpSpec& jump : jumps) {
    if (jump.rate == 0.0) continue;
    const SparseMatrix lk = jump_operator(jump, ops);
    const SparseMatrix lk_conj = lk.conjugate();
    const SparseMatrix ldl = lk.adjoint() * lk;
    SparseMatrix sandwich = Eigen::kroneckerProduct(lk_conj, lk);
    SparseMatrix left_anti = Eigen::kroneckerProduct(id, ldl);
    SparseMatrix right_anti = Eigen::kroneckerProduct(SparseMatrix(ldl.transpose()), id);
    l += jump.rate * (sandwich - 0.5 * left_anti - 0.5 * right_anti);
  }
  l.prune(Complex(0.0));
  l.makeCompressed();
  return Superoperator{std::move(l), ops.n_sites};
}

DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& l, double t_final, const StepControl& ctl,
                     const DensityObserver& observer) {
  const long d = l.hilbert_dim();
  if (rho0.rho.rows() != d || rho0.rho.cols() != d) {
    throw Error(ErrorCode::InvalidArgument, "evolve: initial state dimension does not match the superoperator");
  }
  check_state(rho0);
  Vector y = vec(rho0.rho);
  auto rhs = [&](double, const Vector& v) -> Vector { return l.l * v; };
  const double t0 = rho0.time;
  if (observer) {
    integrate(rhs, t0, y, t_final, ctl, [&](double t, const Vector& v) { return observer({unvec(v, d), t}); });
  } else {
    integrate(rhs, t0, y, t_final, ctl);
  }
  DensityMatrix out{unvec(y, d), t_final};
  check_state(out);
  return out;
}

SteadyState steady_state(const Superoperator& l, const SteadyOptions& options) {
  if (options.method == SteadyMethod::TimeEvolve) {
    // Uniqueness is checked the same way as for the algebraic routes.
    SteadyOptions probe = options;
    probe.method = SteadyMethod::LinearSolve;
    const SteadyState algebraic =
        l.n_sites <= options.dense_max_sites ? dense_steady(l, probe) : sparse_steady(l, probe);

    const long d = l.hilbert_dim();
    DensityMatrix rho = DensityMatrix::maximally_mixed(l.n_sites);
    Vector y = vec(rho.rho);
    double residual = max_abs(l.l * y);
    double t = 0.0;
    auto rhs = [&](double, const Vector& v) -> Vector { return l.l * v; };
    integrate(rhs, 0.0, y, options.max_time, options.step, [&](double now, const Vector& v) {
      t = now;
      residual = max_abs(l.l * v);
      return residual >= options.stationarity_tolerance;
    });
    if (residual >= options.stationarity_tolerance) {
      throw Error(ErrorCode::Solver, "steady state: time evolution did not become stationary by t=" +
                                         std::to_string(options.max_time));
    }
    DensityMatrix out{unvec(y, d), t};
    return SteadyState{out, residual, algebraic.uniqueness_ratio};
  }
  if (l.n_sites <= options.dense_max_sites) return dense_steady(l, options);
  return sparse_steady(l, options);
}

double expectation(const DensityMatrix& rho, const SparseMatrix& obs) {
  if (obs.rows() != rho.rho.rows() || obs.cols() != rho.rho.cols()) {
    throw Error(ErrorCode::InvalidArgument, "expectation: observable dimension does not match the state");
  }
  Complex tr = 0.0;
  for (int k = 0; k < obs.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(obs, k); it; ++it) tr += it.value() * rho.rho(it.col(), it.row());
  }
  if (std::abs(tr.imag()) > 1e-10) {
    throw Error(ErrorCode::Hermiticity, "expectation: imaginary part " + std::to_string(tr.imag()) +
                                            " exceeds 1e-10; observable or state is not Hermitian");
  }
  return tr.real();
}

double expectation(const DensityMatrix& rho, const Matrix& obs) {
  return expectation(rho, SparseMatrix(obs.sparseView()));
}

}  // namespace mfc
