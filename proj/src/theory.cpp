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

#include "mfc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mfc {

double modified_diffusion(const TheoryParams& p) {
  if (p.gamma == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "modified_diffusion: gamma = 0 gives an infinite diffusion constant");
  }
  if (!(p.gamma > 0.0) || p.dim < 1 || !(p.v_f > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "modified_diffusion: need gamma > 0, v_f > 0 and dim >= 1");
  }
  return p.v_f * p.v_f / (p.gamma * p.dim);
}

double drude_conductivity(const TheoryParams& p) {
  if (p.nu < 0.0) throw Error(ErrorCode::InvalidArgument, "drude_conductivity: nu must be non-negative");
  return p.nu * modified_diffusion(p);
}

DiffusonPair diffuson(double k_sq, double eps, const TheoryParams& p) {
  if (k_sq < 0.0) throw Error(ErrorCode::InvalidArgument, "diffuson: k^2 must be non-negative");
  if (k_sq == 0.0 && eps == 0.0) throw Error(ErrorCode::InvalidArgument, "diffuson: pole at k^2 = 0, eps = 0");
  if (!(p.nu > 0.0)) throw Error(ErrorCode::InvalidArgument, "diffuson: nu must be positive");
  const double d_half = 0.5 * modified_diffusion(p);
  const double weight = -1.0 / (std::numbers::pi * p.nu);
  return DiffusonPair{weight / Complex(d_half * k_sq, -eps), weight / Complex(d_half * k_sq, eps)};
}

ScalingComparison compare_scaling(const std::vector<DiffusionEstimate>& estimates) {
  ScalingComparison out;
  out.fit = fit_scaling(estimates);
  out.slope_deviation = out.fit.slope - out.theory_slope;
  double sum = 0.0;
  for (const auto& e : estimates) {
    out.prefactors.push_back(e.d_value * e.gamma);
    sum += out.prefactors.back();
  }
  out.prefactor_mean = sum / static_cast<double>(out.prefactors.size());
  const auto [lo, hi] = std::minmax_element(out.prefactors.begin(), out.prefactors.end());
  out.prefactor_rel_spread = (*hi - *lo) / out.prefactor_mean;
  return out;
}

}  // namespace mfc
