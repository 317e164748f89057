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

#include "mfc/trajectories.hpp"

#include <cmath>
#include <random>

#include "mfc/parallel.hpp"

namespace mfc {

namespace {

constexpr double kNormTolerance = 1e-10;

class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0, 1].
  double next() { return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct NeumaierSum {
  double sum = 0.0;
  double compensation = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      compensation += (sum - t) + x;
    } else {
      compensation += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + compensation; }
};

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) {
  return mix64(master_seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

TrajectoryModel make_trajectory_model(const QuadraticHamiltonian& h, const std::vector<JumpSpec>& jumps,
                                      const FermionOps& ops) {
  check_exact_size(ops.n_sites);
  TrajectoryModel model;
  model.n_sites = ops.n_sites;
  SparseMatrix heff = many_body_hamiltonian(h, ops);
  for (const JumpSpec& jump : jumps) {
    if (jump.rate < 0.0 || !std::isfinite(jump.rate)) {
      throw Error(ErrorCode::InvalidArgument, "trajectory model: jump rates must be finite and non-negative");
    }
    if (jump.rate == 0.0) continue;
    SparseMatrix lk = jump_operator(jump, ops);
    heff -= Complex(0.0, 0.5 * jump.rate) * SparseMatrix(lk.adjoint() * lk);
    model.jump_ops.push_back(std::move(lk));
    model.rates.push_back(jump.rate);
  }
  model.drift = -kI * heff;
  model.drift.prune(Complex(0.0));
  model.drift.makeCompressed();
  return model;
}

TrajectoryState sample_trajectory(const Vector& psi0, const TrajectoryModel& model, double t_final,
                                  std::uint64_t seed, const StepControl& ctl) {
  const long dim = 1L << model.n_sites;
  if (psi0.size() != dim) throw Error(ErrorCode::InvalidArgument, "sample_trajectory: psi0 has the wrong dimension");
  if (std::abs(psi0.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "sample_trajectory: psi0 must be normalized");
  }
  if (t_final < 0.0) throw Error(ErrorCode::InvalidArgument, "sample_trajectory: t_final must be non-negative");

  TrajectoryState state{psi0, 0.0, seed, {}};
  UniformSource uniform(seed);
  auto rhs = [&](double, const Vector& v) -> Vector { return model.drift * v; };

  double threshold = uniform.next();
  Vector& psi = state.psi;
  double& t = state.time;
  Vector k1 = rhs(t, psi);
  double h = initial_step(psi, k1, t_final > 0.0 ? t_final : 1.0, ctl);
  Vector trial, k7, err;
  long steps = 0;

  while (t < t_final) {
    if (++steps > ctl.max_steps) throw Error(ErrorCode::Integration, "sample_trajectory: exceeded max_steps");
    h = std::min({h, ctl.max_step, t_final - t});
    dopri_step(rhs, t, psi, k1, h, trial, k7, err);
    const double enorm = error_norm(err, psi, trial, ctl);
    if (!std::isfinite(enorm)) throw Error(ErrorCode::Integration, "sample_trajectory: non-finite state");
    const double factor = enorm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0);
    if (enorm > 1.0) {
      h *= std::min(factor, 1.0);
      if (h < 1e-14 * std::max(1.0, t)) throw Error(ErrorCode::Integration, "sample_trajectory: step size underflow");
      continue;
    }

    const double norm_sq = trial.squaredNorm();
    if (norm_sq > threshold) {
      t = (t + h >= t_final) ? t_final : t + h;
      psi.swap(trial);
      k1.swap(k7);
      if (norm_sq < 1e-250) {
        throw Error(ErrorCode::Integration, "sample_trajectory: norm underflow without a threshold crossing");
      }
      h *= factor;
      continue;
    }

    // The threshold is crossed inside (t, t + h]; bisect with single steps
    // from the start of the interval.
    double lo = 0.0;
    double hi = h;
    Vector at_hi = trial;
    double f_hi = norm_sq - threshold;
    while (std::abs(f_hi) > kNormTolerance && hi - lo > 1e-15 * std::max(1.0, t)) {
      const double mid = 0.5 * (lo + hi);
      dopri_step(rhs, t, psi, k1, mid, trial, k7, err);
      const double f_mid = trial.squaredNorm() - threshold;
      if (f_mid > 0.0) {
        lo = mid;
      } else {
        hi = mid;
        at_hi = trial;
        f_hi = f_mid;
      }
    }
    t += hi;
    psi = at_hi;

    std::vector<double> weights(model.jump_ops.size());
    double total = 0.0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      weights[k] = model.rates[k] * (model.jump_ops[k] * psi).squaredNorm();
      total += weights[k];
    }
    if (!(total > 0.0)) {
      throw Error(ErrorCode::Integration, "sample_trajectory: threshold crossed with no active jump channel");
    }
    const double pick = uniform.next() * total;
    std::size_t channel = 0;
    double acc = weights[0];
    while (channel + 1 < weights.size() && acc < pick) acc += weights[++channel];
    psi = model.jump_ops[channel] * psi;
    psi.normalize();
    state.jump_log.push_back({t, static_cast<int>(channel)});
    threshold = uniform.next();
    k1 = rhs(t, psi);
  }
  psi.normalize();
  return state;
}

TrajectoryState sample_trajectory(const Vector& psi0, const QuadraticHamiltonian& h,
                                  const std::vector<JumpSpec>& jumps, const FermionOps& ops, double t_final,
                                  std::uint64_t seed, const StepControl& ctl) {
  return sample_trajectory(psi0, make_trajectory_model(h, jumps, ops), t_final, seed, ctl);
}

EnsembleEstimate summarize(const std::vector<double>& samples, std::uint64_t master_seed) {
  EnsembleEstimate out;
  out.n_trajectories = static_cast<long>(samples.size());
  out.master_seed = master_seed;
  if (samples.empty()) return out;
  NeumaierSum sum;
  for (double x : samples) sum.add(x);
  out.mean = sum.value() / static_cast<double>(samples.size());
  if (samples.size() > 1) {
    NeumaierSum sq;
    for (double x : samples) sq.add((x - out.mean) * (x - out.mean));
    const double variance = sq.value() / static_cast<double>(samples.size() - 1);
    out.std_error = std::sqrt(variance / static_cast<double>(samples.size()));
  }
  return out;
}

EnsembleResult trajectory_average(const std::vector<SparseMatrix>& observables, const TrajectoryRun& run, long M,
                                  std::uint64_t master_seed) {
  if (M < 2) throw Error(ErrorCode::InvalidArgument, "trajectory_average: need at least 2 trajectories");
  const long dim = 1L << run.model.n_sites;
  for (const auto& obs : observables) {
    if (obs.rows() != dim || obs.cols() != dim) {
      throw Error(ErrorCode::InvalidArgument, "trajectory_average: observable dimension does not match the model");
    }
  }
  const std::size_t n_obs = observables.size();
  std::vector<std::vector<double>> values(n_obs, std::vector<double>(static_cast<std::size_t>(M)));
  std::vector<double> jumps(static_cast<std::size_t>(M));
  parallel_for(static_cast<std::size_t>(M), [&](std::size_t m) {
    const TrajectoryState s = sample_trajectory(run.psi0, run.model, run.t_final, trajectory_seed(master_seed, m),
                                                run.control);
    for (std::size_t o = 0; o < n_obs; ++o) values[o][m] = s.psi.dot(observables[o] * s.psi).real();
    jumps[m] = static_cast<double>(s.jump_log.size());
  });
  EnsembleResult out;
  for (const auto& v : values) out.observables.push_back(summarize(v, master_seed));
  out.jump_count = summarize(jumps, master_seed);
  return out;
}

EnsembleEstimate trajectory_average(const SparseMatrix& observable, const TrajectoryRun& run, long M,
                                    std::uint64_t master_seed) {
  return trajectory_average(std::vector<SparseMatrix>{observable}, run, M, master_seed).observables.front();
}

}  // namespace mfc
