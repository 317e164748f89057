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

// Quantum-jump unraveling of the chain Lindbladian.
//
// Between jumps the unnormalized state follows
//   d psi/dt = -i (H - i/2 sum_k r_k L_k^dag L_k) psi
// and a jump fires when ||psi||^2 reaches a uniform threshold u. The crossing
// time is located by bisection to 1e-10 in squared norm; channel k is picked
// with probability proportional to r_k ||L_k psi||^2.
//
// Seeds: trajectory m of an ensemble uses
//   seed_m = mix64(master_seed + 0x9E3779B97F4A7C15 * (m + 1))
// with mix64 the splitmix64 finalizer, feeding std::mt19937_64. Uniforms are
// ((x >> 11) + 1) * 2^-53, so every draw is reproducible bit for bit.

#pragma once

#include <cstdint>
#include <vector>

#include "mfc/model.hpp"
#include "mfc/ode.hpp"

namespace mfc {

struct JumpEvent {
  double time;
  int channel;  // index into the jump list the model was built from
};

struct TrajectoryState {
  Vector psi;
  double time = 0.0;
  std::uint64_t seed = 0;
  std::vector<JumpEvent> jump_log;
};

/// Precomputed many-body operators for one Lindbladian.
struct TrajectoryModel {
  int n_sites = 0;
  SparseMatrix drift;  // -i H_eff
  std::vector<SparseMatrix> jump_ops;
  std::vector<double> rates;
};

TrajectoryModel make_trajectory_model(const QuadraticHamiltonian& h, const std::vector<JumpSpec>& jumps,
                                      const FermionOps& ops);

std::uint64_t mix64(std::uint64_t z);
std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index);

/// Default step control for trajectory drift integration.
inline StepControl default_trajectory_control() { return StepControl{1e-10, 1e-8, 0.5}; }

TrajectoryState sample_trajectory(const Vector& psi0, const TrajectoryModel& model, double t_final,
                                  std::uint64_t seed, const StepControl& ctl = default_trajectory_control());

TrajectoryState sample_trajectory(const Vector& psi0, const QuadraticHamiltonian& h,
                                  const std::vector<JumpSpec>& jumps, const FermionOps& ops, double t_final,
                                  std::uint64_t seed, const StepControl& ctl = default_trajectory_control());

struct EnsembleEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long n_trajectories = 0;
  std::uint64_t master_seed = 0;
};

struct TrajectoryRun {
  Vector psi0;
  TrajectoryModel model;
  double t_final = 0.0;
  StepControl control = default_trajectory_control();
};

struct EnsembleResult {
  std::vector<EnsembleEstimate> observables;
  EnsembleEstimate jump_count;
};

/// Averages <psi_m|O|psi_m> at t_final over M trajectories. Trajectories run
/// in parallel; the reduction is an ordered compensated sum, so the result
/// does not depend on the thread count.
EnsembleResult trajectory_average(const std::vector<SparseMatrix>& observables, const TrajectoryRun& run, long M,
                                  std::uint64_t master_seed);

EnsembleEstimate trajectory_average(const SparseMatrix& observable, const TrajectoryRun& run, long M,
                                    std::uint64_t master_seed);

/// Mean and standard error (sample std / sqrt(M)) with Neumaier summation.
EnsembleEstimate summarize(const std::vector<double>& samples, std::uint64_t master_seed);

}  // namespace mfc
