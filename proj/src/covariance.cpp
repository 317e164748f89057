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

#include "mfc/covariance.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SparseLU>

#include "linalg_util.hpp"

namespace mfc {

namespace {

// Position of Re C_jk (j < k) in the packed Hermitian parameters; Im follows.
long pair_index(long n, long j, long k) { return n + 2 * (j * n - j * (j + 1) / 2 + (k - j - 1)); }

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

Matrix unvec(const Vector& v, long n) { return Eigen::Map<const Matrix>(v.data(), n, n); }

double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

CovarianceMatrix CovarianceMatrix::maximally_mixed(int n_sites) {
  return {Matrix::Identity(n_sites, n_sites) * 0.5, 0.0};
}

CovarianceDiagnostics diagnose(const CovarianceMatrix& c) {
  CovarianceDiagnostics out;
  out.hermiticity = (c.c - c.c.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (c.c + c.c.adjoint()), Eigen::EigenvaluesOnly);
  out.min_eigenvalue = eig.eigenvalues().minCoeff();
  out.max_eigenvalue = eig.eigenvalues().maxCoeff();
  return out;
}

void check_covariance(const CovarianceMatrix& c, double hermiticity_tol, double occupation_tol) {
  const CovarianceDiagnostics diag = diagnose(c);
  std::ostringstream msg;
  if (diag.hermiticity > hermiticity_tol) msg << " hermiticity=" << diag.hermiticity;
  if (diag.min_eigenvalue < -occupation_tol) msg << " min_eigenvalue=" << diag.min_eigenvalue;
  if (diag.max_eigenvalue > 1.0 + occupation_tol) msg << " max_eigenvalue=" << diag.max_eigenvalue;
  if (!msg.str().empty()) {
    throw Error(ErrorCode::Integration,
                "covariance matrix invariants violated at t=" + std::to_string(c.time) + ":" + msg.str());
  }
}

RealVector pack_hermitian(const Matrix& c) {
  const long n = c.rows();
  RealVector x(n * n);
  for (long j = 0; j < n; ++j) {
    x[j] = c(j, j).real();
    for (long k = j + 1; k < n; ++k) {
      const long p = pair_index(n, j, k);
      x[p] = c(j, k).real();
      x[p + 1] = c(j, k).imag();
    }
  }
  return x;
}

Matrix unpack_hermitian(const RealVector& x, int n_sites) {
  const long n = n_sites;
  if (x.size() != n * n) throw Error(ErrorCode::InvalidArgument, "unpack_hermitian: expected N^2 parameters");
  Matrix c(n, n);
  for (long j = 0; j < n; ++j) {
    c(j, j) = x[j];
    for (long k = j + 1; k < n; ++k) {
      const long p = pair_index(n, j, k);
      c(j, k) = Complex(x[p], x[p + 1]);
      c(k, j) = Complex(x[p], -x[p + 1]);
    }
  }
  return c;
}

CovarianceGenerator::CovarianceGenerator(const QuadraticHamiltonian& h, const MonitorSpec& monitor)
    : h_(h.h), monitor_(monitor) {
  monitor_.validate();
  const long n = h_.rows();
  if (n < 1 || h_.cols() != n) throw Error(ErrorCode::InvalidArgument, "covariance generator: h must be square");
  if ((h_ - h_.adjoint()).cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorCode::InvalidArgument, "covariance generator: h is not exactly Hermitian");
  }

  damping_ = RealMatrix::Constant(n, n, monitor_.gamma);
  damping_.diagonal().setZero();
  damping_.row(0).array() += 0.5 * monitor_.gamma_s;
  damping_.col(0).array() += 0.5 * monitor_.gamma_s;
  damping_.row(n - 1).array() += 0.5 * monitor_.gamma_d;
  damping_.col(n - 1).array() += 0.5 * monitor_.gamma_d;

  // A = i (I (x) h^T - h (x) I) - diag(vec G)
  std::vector<Triplet> entries;
  for (long col = 0; col < n; ++col) {
    for (long row = 0; row < n; ++row) {
      const long r = row + col * n;
      // (h^T C)_{row,col} = sum_a h_{a,row} C_{a,col}
      for (long a = 0; a < n; ++a) {
        if (h_(a, row) != Complex(0.0)) entries.emplace_back(r, a + col * n, kI * h_(a, row));
      }
      // (C h^T)_{row,col} = sum_a C_{row,a} h_{col,a}
      for (long a = 0; a < n; ++a) {
        if (h_(col, a) != Complex(0.0)) entries.emplace_back(r, row + a * n, -kI * h_(col, a));
      }
      if (damping_(row, col) != 0.0) entries.emplace_back(r, r, -damping_(row, col));
    }
  }
  a_.resize(n * n, n * n);
  a_.setFromTriplets(entries.begin(), entries.end());
  a_.makeCompressed();
  b_ = Vector::Zero(n * n);
  b_[0] = monitor_.gamma_s;

  // Hermitian restriction: column p of the real matrix is pack(A vec(E_p)).
  std::vector<Eigen::Triplet<double>> real_entries;
  Vector scratch = Vector::Zero(n * n);
  std::vector<long> touched;
  auto add_column = [&](long vec_index, Complex weight) {
    for (SparseMatrix::InnerIterator it(a_, vec_index); it; ++it) {
      if (scratch[it.row()] == Complex(0.0)) touched.push_back(it.row());
      scratch[it.row()] += weight * it.value();
    }
  };
  auto flush = [&](long p) {
    for (long r : touched) {
      const long row = r % n;
      const long col = r / n;
      const Complex y = scratch[r];
      scratch[r] = 0.0;
      if (row == col) {
        if (y.real() != 0.0) real_entries.emplace_back(row, p, y.real());
      } else if (row < col) {
        const long q = pair_index(n, row, col);
        if (y.real() != 0.0) real_entries.emplace_back(q, p, y.real());
        if (y.imag() != 0.0) real_entries.emplace_back(q + 1, p, y.imag());
      }
    }
    touched.clear();
  };
  for (long j = 0; j < n; ++j) {
    add_column(j + j * n, 1.0);
    flush(j);
  }
  for (long j = 0; j < n; ++j) {
    for (long k = j + 1; k < n; ++k) {
      const long p = pair_index(n, j, k);
      add_column(j + k * n, 1.0);
      add_column(k + j * n, 1.0);
      flush(p);
      add_column(j + k * n, kI);
      add_column(k + j * n, -kI);
      flush(p + 1);
    }
  }
  ha_.resize(n * n, n * n);
  ha_.setFromTriplets(real_entries.begin(), real_entries.end());
  ha_.makeCompressed();
  hb_ = pack_hermitian(unvec(b_, n));
}

Matrix CovarianceGenerator::apply(const Matrix& c) const {
  const Matrix ht = h_.transpose();
  Matrix out = kI * (ht * c - c * ht);
  out -= (damping_.cast<Complex>().array() * c.array()).matrix();
  out(0, 0) += monitor_.gamma_s;
  return out;
}

CovarianceGenerator derive_generator(const QuadraticHamiltonian& h, const MonitorSpec& monitor) {
  return CovarianceGenerator(h, monitor);
}

CovarianceMatrix evolve_covariance(const CovarianceMatrix& c0, const CovarianceGenerator& gen, double t_final,
                                   const StepControl& ctl, CovarianceMode mode, const CovarianceObserver& observer) {
  const int n = gen.n_sites();
  if (c0.n_sites() != n || c0.c.cols() != n) {
    throw Error(ErrorCode::InvalidArgument, "evolve_covariance: initial state dimension does not match the generator");
  }
  check_covariance(c0);
  const double t0 = c0.time;
  CovarianceMatrix out{Matrix(), t_final};
  if (mode == CovarianceMode::Full) {
    Vector y = vec(c0.c);
    auto rhs = [&](double, const Vector& v) -> Vector { return gen.a() * v + gen.b(); };
    integrate(rhs, t0, y, t_final, ctl, [&](double t, const Vector& v) {
      return observer ? observer({unvec(v, n), t}) : true;
    });
    out.c = unvec(y, n);
  } else {
    RealVector y = pack_hermitian(c0.c);
    auto rhs = [&](double, const RealVector& v) -> RealVector { return gen.hermitian_a() * v + gen.hermitian_b(); };
    integrate(rhs, t0, y, t_final, ctl, [&](double t, const RealVector& v) {
      return observer ? observer({unpack_hermitian(v, n), t}) : true;
    });
    out.c = unpack_hermitian(y, n);
  }
  check_covariance(out, 1e-9, 1e-8);
  return out;
}

CovarianceSteady steady_covariance(const CovarianceGenerator& gen, CovarianceMode mode) {
  if (!gen.monitor().driven()) {
    throw Error(ErrorCode::Degenerate,
                "steady covariance is not unique without drive (gamma_s = gamma_d = 0): the generator is singular "
                "because every particle-number sector is stationary");
  }
  const int n = gen.n_sites();
  CovarianceSteady out;
  out.state.time = std::numeric_limits<double>::infinity();
  auto singular = [] {
    return Error(ErrorCode::Degenerate, "steady covariance: generator is singular; no unique steady state");
  };
  if (mode == CovarianceMode::Full) {
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(gen.a());
    if (lu.info() != Eigen::Success) throw singular();
    Vector x = lu.solve(Vector(-gen.b()));
    const double smin = detail::estimate_sigma_min(lu, x.size());
    out.condition = smin > 0.0 ? detail::estimate_sigma_max(gen.a()) / smin : std::numeric_limits<double>::infinity();
    Matrix c = unvec(x, n);
    out.state.c = 0.5 * (c + c.adjoint());
  } else {
    Eigen::SparseLU<RealSparseMatrix> lu;
    lu.compute(gen.hermitian_a());
    if (lu.info() != Eigen::Success) throw singular();
    RealVector x = lu.solve(RealVector(-gen.hermitian_b()));
    const double smin = detail::estimate_sigma_min(lu, x.size());
    out.condition =
        smin > 0.0 ? detail::estimate_sigma_max(gen.hermitian_a()) / smin : std::numeric_limits<double>::infinity();
    out.state.c = unpack_hermitian(x, n);
  }
  if (!std::isfinite(out.condition) || !out.state.c.allFinite()) throw singular();
  out.residual = max_abs(gen.a() * vec(out.state.c) + gen.b());
  return out;
}

CovarianceMatrix covariance_from_density(const DensityMatrix& rho, const FermionOps& ops) {
  check_exact_size(ops.n_sites);
  if (rho.rho.rows() != ops.dim()) {
    throw Error(ErrorCode::InvalidArgument, "covariance_from_density: state dimension does not match operators");
  }
  const int n = ops.n_sites;
  Matrix c(n, n);
  for (int j = 1; j <= n; ++j) {
    const SparseMatrix cd = ops.c_dag(j);
    for (int k = 1; k <= n; ++k) {
      const SparseMatrix op = cd * ops.c(k);
      Complex tr = 0.0;
      for (int col = 0; col < op.outerSize(); ++col) {
        for (SparseMatrix::InnerIterator it(op, col); it; ++it) tr += it.value() * rho.rho(it.col(), it.row());
      }
      c(j - 1, k - 1) = tr;
    }
  }
  return {c, rho.time};
}

double validate_generator_fd(const QuadraticHamiltonian& h, const MonitorSpec& monitor, const DensityMatrix& rho,
                             const FermionOps& ops, double delta) {
  std::vector<JumpSpec> jumps;
  for (int site = 1; site <= h.n_sites() && monitor.gamma > 0.0; ++site) {
    jumps.push_back({JumpKind::Dephase, site, monitor.gamma});
  }
  if (monitor.gamma_s > 0.0) jumps.push_back({JumpKind::Pump, 1, monitor.gamma_s});
  if (monitor.gamma_d > 0.0) jumps.push_back({JumpKind::Loss, h.n_sites(), monitor.gamma_d});
  const Superoperator l = assemble_liouvillian(h, jumps, ops);

  StepControl tight{1e-14, 1e-12};
  std::array<Matrix, 5> samples;
  DensityMatrix state = rho;
  state.time = 0.0;
  samples[0] = covariance_from_density(state, ops).c;
  for (int step = 1; step < 5; ++step) {
    state = evolve(state, l, step * delta, tight);
    samples[step] = covariance_from_density(state, ops).c;
  }
  const Matrix fd =
      (-25.0 * samples[0] + 48.0 * samples[1] - 36.0 * samples[2] + 16.0 * samples[3] - 3.0 * samples[4]) /
      (12.0 * delta);
  const Matrix analytic = derive_generator(h, monitor).apply(samples[0]);
  return (fd - analytic).cwiseAbs().maxCoeff();
}

}  // namespace mfc
