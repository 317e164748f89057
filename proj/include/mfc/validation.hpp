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

// Cross-engine checks run by `mfchain validate`, and the trajectory versus
// Lindblad comparison run by `mfchain trajectories`.

#pragma once

#include <string>
#include <vector>

#include "mfc/config.hpp"
#include "mfc/trajectories.hpp"

namespace mfc {

struct ValidationItem {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct ValidationReport {
  std::vector<ValidationItem> items;

  bool passed() const;
};

/// Runs every property at config.lattice.n_sites with draws seeded from
/// config.master_seed. Throws Error(SizeLimit) above the exact-engine cap.
ValidationReport run_validation(const RunConfig& config);

std::string format_validation_report(const ValidationReport& report);

struct ObservableComparison {
  std::string name;
  EnsembleEstimate trajectory;
  double lindblad = 0.0;

  double z_score() const;
};

struct TrajectoryComparison {
  std::vector<ObservableComparison> observables;  // n_1..n_N, J_12..J_{N-1,N}, jump count
  double t_final = 0.0;
  long n_trajectories = 0;
  std::uint64_t master_seed = 0;
};

/// Trajectory ensemble at config.gamma from the configured occupation state,
/// against the exact Lindblad evolution of the same initial state.
TrajectoryComparison compare_trajectories(const RunConfig& config);

std::string format_trajectory_report(const TrajectoryComparison& comparison);

/// Lindblad expectation of the jump count sum_k r_k int_0^T tr(L_k^dag L_k rho) dt
/// together with the final state.
std::pair<DensityMatrix, double> evolve_with_jump_count(const DensityMatrix& rho0, const QuadraticHamiltonian& h,
                                                        const std::vector<JumpSpec>& jumps, const FermionOps& ops,
                                                        double t_final, const StepControl& ctl);

}  // namespace mfc
