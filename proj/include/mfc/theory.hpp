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

// Closed-form predictions for a monitored free-fermion gas (e = hbar = 1):
//   D          = v_F^2 / (gamma d)
//   sigma      = nu D
//   <d12 d21>  = -(1/(pi nu)) / (D' k^2 - i eps),  D' = D/2
//   <d21 d12>  = -(1/(pi nu)) / (D' k^2 + i eps)

#pragma once

#include <vector>

#include "mfc/transport.hpp"
#include "mfc/types.hpp"

namespace mfc {

struct TheoryParams {
  double v_f = 1.0;
  double nu = 1.0;
  int dim = 1;
  double gamma = 1.0;
};

/// Throws Error(InvalidArgument) for gamma == 0 (infinite D, free gas) or
/// non-positive gamma, v_f or dim.
double modified_diffusion(const TheoryParams& p);

double drude_conductivity(const TheoryParams& p);

struct DiffusonPair {
  Complex value_12;
  Complex value_21;
};

/// Throws at the pole k^2 = eps = 0, for k^2 < 0 and for nu <= 0.
DiffusonPair diffuson(double k_sq, double eps, const TheoryParams& p);

struct ScalingComparison {
  ScalingFit fit;
  double theory_slope = -1.0;
  double slope_deviation = 0.0;
  std::vector<double> prefactors;  // D * gamma per point
  double prefactor_mean = 0.0;
  double prefactor_rel_spread = 0.0;  // (max - min) / mean
};

/// Fitted slope against the 1/gamma prediction plus the D*gamma constancy
/// diagnostic. No absolute prefactor is asserted.
ScalingComparison compare_scaling(const std::vector<DiffusionEstimate>& estimates);

}  // namespace mfc
