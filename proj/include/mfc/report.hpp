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

// Text outputs. All numbers are printed with %.17g so identical inputs give
// byte-identical files.
//
// Sweep CSV columns:
//   gamma,D,J12,n1,nN,n_sites,engine,residual,uniformity_spread,status
// plus rel_disagreement when both engines ran. Failed points carry nan in
// the numeric columns and `failed:<reason>` in status.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mfc/theory.hpp"
#include "mfc/transport.hpp"

namespace mfc {

struct CsvRow {
  DiffusionEstimate estimate;
  std::string status = "ok";
  std::optional<double> rel_disagreement;

  bool ok() const { return status == "ok"; }
};

std::vector<CsvRow> csv_rows(const std::vector<SweepPoint>& sweep, Engine engine, int n_sites);

/// Interleaves exact and covariance rows per gamma and fills rel_disagreement
/// = |D_exact - D_cov| / |D_cov| on both rows.
std::vector<CsvRow> merge_engine_rows(const std::vector<CsvRow>& exact, const std::vector<CsvRow>& covariance);

std::string format_csv(const std::vector<CsvRow>& rows);

/// Reads a sweep CSV; the header must start with the nine schema columns.
std::vector<CsvRow> parse_csv(const std::string& text);

/// `key: value` lines: slope, slope_stderr, intercept, r_squared, n_points,
/// then the theory comparison.
std::string format_fit_report(const ScalingComparison& comparison);

/// Log-log scatter of (gamma, D) with the fitted line.
std::string format_svg(const std::vector<DiffusionEstimate>& estimates, const ScalingFit& fit);

std::string format_steady_summary(const SteadyTransport& result);

std::string format_number(double value);

const char* error_code_name(ErrorCode code);

}  // namespace mfc
