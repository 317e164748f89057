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

// Adaptive Dormand-Prince 5(4) integrator for linear and affine generators
// acting on Eigen vectors (real or complex).

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "mfc/types.hpp"

namespace mfc {

struct StepControl {
  double atol = 1e-10;
  double rtol = 1e-8;
  double max_step = std::numeric_limits<double>::infinity();
  double initial_step = 0.0;  // 0 picks a step from the derivative scale
  long max_steps = 50'000'000;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evals = 0;
};

namespace ode_detail {

// Dormand-Prince tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat (fifth minus fourth order weights)
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace ode_detail

/// One Dormand-Prince step of size h from (t, y) with k1 = f(t, y) supplied.
/// Writes the fifth-order solution, its derivative (FSAL) and the embedded
/// error estimate.
template <class Vec, class Rhs>
void dopri_step(Rhs& f, double t, const Vec& y, const Vec& k1, double h, Vec& y_out, Vec& k7_out, Vec& err_out) {
  using namespace ode_detail;
  Vec tmp = y + h * a21 * k1;
  Vec k2 = f(t + c2 * h, tmp);
  tmp = y + h * (a31 * k1 + a32 * k2);
  Vec k3 = f(t + c3 * h, tmp);
  tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
  Vec k4 = f(t + c4 * h, tmp);
  tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
  Vec k5 = f(t + c5 * h, tmp);
  tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
  Vec k6 = f(t + h, tmp);
  y_out = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  k7_out = f(t + h, y_out);
  err_out = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7_out);
}

/// Scaled max-norm of the error estimate.
template <class Vec>
double error_norm(const Vec& err, const Vec& y0, const Vec& y1, const StepControl& ctl) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = ctl.atol + ctl.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    worst = std::max(worst, std::abs(err[i]) / scale);
  }
  return worst;
}

/// Proposes a first step from the derivative magnitude.
template <class Vec>
double initial_step(const Vec& y, const Vec& dy, double span, const StepControl& ctl) {
  if (ctl.initial_step > 0.0) return std::min(ctl.initial_step, span);
  const double ynorm = y.cwiseAbs().maxCoeff();
  const double dnorm = dy.size() ? dy.cwiseAbs().maxCoeff() : 0.0;
  double h = dnorm > 0.0 ? 0.01 * std::max(ynorm, ctl.atol / std::max(ctl.rtol, 1e-300)) / dnorm : span;
  h = std::min({h, span, ctl.max_step});
  return std::max(h, 1e-12 * std::max(1.0, span));
}

/// Integrates y' = f(t, y) from t0 to t1 in place. `observer(t, y)` runs
/// after every accepted step and may return false to stop early.
template <class Vec, class Rhs, class Observer>
IntegrationStats integrate(Rhs&& f, double t0, Vec& y, double t1, const StepControl& ctl, Observer&& observer) {
  IntegrationStats stats;
  const double span = t1 - t0;
  if (span < 0.0) throw Error(ErrorCode::InvalidArgument, "integrate: t_final precedes the start time");
  if (span == 0.0) return stats;

  double t = t0;
  Vec k1 = f(t, y);
  ++stats.rhs_evals;
  double h = initial_step(y, k1, span, ctl);
  Vec y_new, k7, err;
  while (t < t1) {
    if (stats.accepted + stats.rejected >= ctl.max_steps) {
      throw Error(ErrorCode::Integration, "integrate: exceeded max_steps=" + std::to_string(ctl.max_steps) +
                                              " at t=" + std::to_string(t));
    }
    h = std::min(h, ctl.max_step);
    // Snap onto t1 rather than leave a sliver of a step behind.
    const bool last = t + h >= t1 - 1e-12 * std::max(1.0, std::abs(t1));
    if (last) h = t1 - t;
    dopri_step(f, t, y, k1, h, y_new, k7, err);
    stats.rhs_evals += 6;
    const double enorm = error_norm(err, y, y_new, ctl);
    if (!std::isfinite(enorm)) {
      throw Error(ErrorCode::Integration, "integrate: non-finite state at t=" + std::to_string(t));
    }
    if (enorm <= 1.0) {
      t = last ? t1 : t + h;
      y.swap(y_new);
      k1.swap(k7);
      ++stats.accepted;
      if (!observer(t, y)) break;
    } else {
      ++stats.rejected;
    }
    const double factor = enorm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0);
    h *= enorm <= 1.0 ? factor : std::min(factor, 1.0);
    if (t < t1 && h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw Error(ErrorCode::Integration, "integrate: step size underflow at t=" + std::to_string(t));
    }
  }
  return stats;
}

template <class Vec, class Rhs>
IntegrationStats integrate(Rhs&& f, double t0, Vec& y, double t1, const StepControl& ctl) {
  return integrate(std::forward<Rhs>(f), t0, y, t1, ctl, [](double, const Vec&) { return true; });
}

}  // namespace mfc
