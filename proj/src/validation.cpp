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

#include "mfc/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "mfc/report.hpp"

namespace mfc {

namespace {

struct Draw {
  LatticeSpec lattice;
  MonitorSpec monitor;
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  Draw draw(int n_sites) {
    Draw d;
    d.lattice = {n_sites, uniform(0.5, 1.5)};
    d.monitor = {uniform(0.1, 2.0), uniform(0.05, 1.0), uniform(0.05, 1.0)};
    return d;
  }

  DensityMatrix random_state(int n_sites) {
    const long dim = 1L << n_sites;
    Matrix g(dim, dim);
    for (long i = 0; i < dim; ++i) {
      for (long j = 0; j < dim; ++j) g(i, j) = Complex(uniform(-1, 1), uniform(-1, 1));
    }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace();
    return {rho, 0.0};
  }

 private:
  std::mt19937_64 engine_;
};

ValidationItem check(std::string name, double measured, double threshold) {
  return {std::move(name), measured, threshold, std::isfinite(measured) && measured < threshold};
}

Superoperator liouvillian(const Draw& d, const FermionOps& ops) {
  return assemble_liouvillian(build_hamiltonian(d.lattice), build_jump_set(d.lattice, d.monitor), ops);
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const ValidationItem& i) { return i.passed; });
}

std::pair<DensityMatrix, double> evolve_with_jump_count(const DensityMatrix& rho0, const QuadraticHamiltonian& h,
                                                        const std::vector<JumpSpec>& jumps, const FermionOps& ops,
                                                        double t_final, const StepControl& ctl) {
  const Superoperator l = assemble_liouvillian(h, jumps, ops);
  const long d = ops.dim();
  // Row functional w with w . vec(rho) = sum_k r_k tr(L_k^dag L_k rho).
  Matrix rate_op = Matrix::Zero(d, d);
  for (const JumpSpec& j : jumps) {
    const SparseMatrix lk = jump_operator(j, ops);
    rate_op += j.rate * Matrix(lk.adjoint() * lk);
  }
  const Matrix w = rate_op.transpose();
  const Eigen::Map<const Vector> w_vec(w.data(), w.size());

  Vector y(d * d + 1);
  y.head(d * d) = Eigen::Map<const Vector>(rho0.rho.data(), d * d);
  y[d * d] = 0.0;
  auto rhs = [&](double, const Vector& v) -> Vector {
    Vector out(v.size());
    out.head(d * d) = l.l * v.head(d * d);
    out[d * d] = w_vec.cwiseProduct(v.head(d * d)).sum();
    return out;
  };
  integrate(rhs, rho0.time, y, t_final, ctl);
  DensityMatrix rho{Eigen::Map<const Matrix>(y.data(), d, d), t_final};
  check_state(rho);
  return {rho, y[d * d].real()};
}

ValidationReport run_validation(const RunConfig& config) {
  const int n = config.lattice.n_sites;
  check_exact_size(n);
  config.lattice.validate();
  ValidationReport report;
  Sampler sampler(config.master_seed);
  const FermionOps ops = fermion_operators(n);
  const long dim = ops.dim();

  {
    double worst = 0.0;
    const SparseMatrix id = ops.identity();
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        SparseMatrix mixed = ops.c(i) * ops.c_dag(j) + ops.c_dag(j) * ops.c(i);
        if (i == j) mixed -= id;
        const SparseMatrix same = ops.c(i) * ops.c(j) + ops.c(j) * ops.c(i);
        worst = std::max({worst, Matrix(mixed).cwiseAbs().maxCoeff(), Matrix(same).cwiseAbs().maxCoeff()});
      }
    }
    report.items.push_back(check("canonical_anticommutation", worst, 1e-14));
  }

  {
    Draw d = sampler.draw(n);
    d.monitor.gamma_s = d.monitor.gamma_d = 0.0;
    const Superoperator l = liouvillian(d, ops);
    const Matrix mixed = Matrix::Identity(dim, dim) / static_cast<double>(dim);
    report.items.push_back(check("unitality_without_drive", l.apply(mixed).cwiseAbs().maxCoeff(), 1e-12));

    const DensityMatrix rho0 = sampler.random_state(n);
    const SparseMatrix number = ops.total_number();
    const double n0 = expectation(rho0, number);
    const DensityMatrix rho1 = evolve(rho0, l, 5.0, StepControl{1e-12, 1e-10});
    report.items.push_back(check("number_conservation_without_drive", std::abs(expectation(rho1, number) - n0), 1e-9));
  }

  {
    const Draw d = sampler.draw(n);
    const Superoperator l = liouvillian(d, ops);
    Vector trace_row = Vector::Zero(dim * dim);
    for (long i = 0; i < dim; ++i) trace_row[i + i * dim] = 1.0;
    const Vector left = l.l.transpose() * trace_row;
    report.items.push_back(check("trace_preservation", left.cwiseAbs().maxCoeff(), 1e-12));

    double herm = 0.0, trace = 0.0, neg = 0.0;
    evolve(sampler.random_state(n), l, 10.0, StepControl{1e-12, 1e-10}, [&](const DensityMatrix& rho) {
      const StateDiagnostics s = diagnose(rho);
      herm = std::max(herm, s.hermiticity);
      trace = std::max(trace, s.trace_error);
      neg = std::max(neg, -s.min_eigenvalue);
      return true;
    });
    report.items.push_back(check("trace_along_integration", trace, 1e-9));
    report.items.push_back(check("hermiticity_along_integration", herm, 1e-9));
    report.items.push_back(check("negativity_along_integration", neg, 1e-7));
  }

  {
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Draw d = sampler.draw(n);
      worst = std::max(worst, validate_generator_fd(build_hamiltonian(d.lattice), d.monitor,
                                                    sampler.random_state(n), ops));
    }
    report.items.push_back(check("generator_finite_difference", worst, 1e-6));
  }

  {
    double worst = 0.0;
    const StepControl tight{1e-13, 1e-11};
    for (int k = 0; k < 3; ++k) {
      const Draw d = sampler.draw(n);
      const QuadraticHamiltonian h = build_hamiltonian(d.lattice);
      const Superoperator l = liouvillian(d, ops);
      const CovarianceGenerator gen = derive_generator(h, d.monitor);
      DensityMatrix rho = sampler.random_state(n);
      CovarianceMatrix c = covariance_from_density(rho, ops);
      for (double t : {0.1, 1.0, 10.0}) {
        rho = evolve(rho, l, t, tight);
        c = evolve_covariance(c, gen, t, tight);
        worst = std::max(worst, (covariance_from_density(rho, ops).c - c.c).cwiseAbs().maxCoeff());
      }
    }
    report.items.push_back(check("oracle_equivalence", worst, 1e-7));
  }

  {
    const Draw d = sampler.draw(n);
    const QuadraticHamiltonian h = build_hamiltonian(d.lattice);
    const Superoperator l = liouvillian(d, ops);
    SteadyOptions linear;
    SteadyOptions kernel;
    kernel.method = SteadyMethod::NullSpace;
    const SteadyState a = steady_state(l, linear);
    const SteadyState b = steady_state(l, kernel);
    report.items.push_back(
        check("steady_methods_agreement", (a.state.rho - b.state.rho).cwiseAbs().maxCoeff(), 1e-8));
    const CovarianceSteady fast = steady_covariance(derive_generator(h, d.monitor));
    const Matrix exact_c = covariance_from_density(a.state, ops).c;
    report.items.push_back(check("steady_engine_agreement", (exact_c - fast.state.c).cwiseAbs().maxCoeff(), 1e-8));
    const TransportObservables obs = observables_from_density(a.state, ops, d.lattice.hopping);
    const double scale = std::max(std::abs(obs.bond_currents[0]), 1e-300);
    report.items.push_back(check("steady_current_uniformity", obs.uniformity_spread / scale, 1e-6));

    // Continuity on a random (non-stationary) two-point function.
    const CovarianceMatrix c = covariance_from_density(sampler.random_state(n), ops);
    report.items.push_back(check("continuity", continuity_check(c.c, derive_generator(h, d.monitor)), 1e-10));
  }

  {
    RunConfig traj = config;
    const TrajectoryComparison first = compare_trajectories(traj);
    double worst = 0.0;
    for (const auto& o : first.observables) {
      if (o.name == "n_1" || o.name == "J_1_2") worst = std::max(worst, std::abs(o.z_score()));
    }
    report.items.push_back(check("trajectory_agreement_zscore", worst, 3.0));
    const TrajectoryComparison second = compare_trajectories(traj);
    double diff = 0.0;
    for (size_t i = 0; i < first.observables.size(); ++i) {
      diff = std::max({diff, std::abs(first.observables[i].trajectory.mean - second.observables[i].trajectory.mean),
                       std::abs(first.observables[i].trajectory.std_error -
                                second.observables[i].trajectory.std_error)});
    }
    // Any difference at all fails.
    report.items.push_back(check("trajectory_determinism", diff, std::numeric_limits<double>::min()));
  }
  return report;
}

std::string format_validation_report(const ValidationReport& report) {
  std::ostringstream out;
  for (const auto& item : report.items) {
    out << (item.passed ? "PASS " : "FAIL ") << item.name << " measured=" << format_number(item.measured)
        << " threshold=" << format_number(item.threshold) << '\n';
  }
  out << "overall: " << (report.passed() ? "PASS" : "FAIL") << '\n';
  return out.str();
}

double ObservableComparison::z_score() const {
  const double delta = trajectory.mean - lindblad;
  if (trajectory.std_error == 0.0) return delta == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), delta);
  return delta / trajectory.std_error;
}

TrajectoryComparison compare_trajectories(const RunConfig& config) {
  validate(config);
  const int n = config.lattice.n_sites;
  const MonitorSpec monitor{config.gamma, config.gamma_s, config.gamma_d};
  const QuadraticHamiltonian h = build_hamiltonian(config.lattice);
  const std::vector<JumpSpec> jumps = build_jump_set(config.lattice, monitor);
  const FermionOps ops = fermion_operators(n);

  const DensityMatrix rho0 = DensityMatrix::occupation(initial_occupations(config));
  Vector psi0 = Vector::Zero(ops.dim());
  for (long i = 0; i < ops.dim(); ++i) {
    if (rho0.rho(i, i) == Complex(1.0)) psi0[i] = 1.0;
  }

  std::vector<std::string> names;
  std::vector<SparseMatrix> observables;
  for (int i = 1; i <= n; ++i) {
    names.push_back("n_" + std::to_string(i));
    observables.push_back(ops.number(i));
  }
  for (int i = 1; i < n; ++i) {
    names.push_back("J_" + std::to_string(i) + "_" + std::to_string(i + 1));
    observables.push_back(current_operator(ops, i, config.lattice.hopping));
  }

  TrajectoryRun run{psi0, make_trajectory_model(h, jumps, ops), config.t_final};
  const EnsembleResult ensemble = trajectory_average(observables, run, config.trajectories, config.master_seed);
  const auto [rho, expected_jumps] =
      evolve_with_jump_count(rho0, h, jumps, ops, config.t_final, StepControl{1e-12, 1e-10});

  TrajectoryComparison out;
  out.t_final = config.t_final;
  out.n_trajectories = config.trajectories;
  out.master_seed = config.master_seed;
  for (size_t k = 0; k < observables.size(); ++k) {
    out.observables.push_back({names[k], ensemble.observables[k], expectation(rho, observables[k])});
  }
  out.observables.push_back({"jump_count", ensemble.jump_count, expected_jumps});
  return out;
}

std::string format_trajectory_report(const TrajectoryComparison& c) {
  std::ostringstream out;
  out << "t_final: " << format_number(c.t_final) << '\n';
  out << "n_trajectories: " << c.n_trajectories << '\n';
  out << "master_seed: " << c.master_seed << '\n';
  out << "observable,trajectory_mean,trajectory_stderr,lindblad,z_score\n";
  for (const auto& o : c.observables) {
    out << o.name << ',' << format_number(o.trajectory.mean) << ',' << format_number(o.trajectory.std_error) << ','
        << format_number(o.lindblad) << ',' << format_number(o.z_score()) << '\n';
  }
  return out.str();
}

}  // namespace mfc
