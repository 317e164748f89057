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

// Run configuration and its text format.
//
// A config file is a list of `key = value` lines; `#` starts a comment and
// blank lines are ignored. The first key must be `schema_version = 1`.
// List values (gammas) are comma separated. Keys and values are documented
// in README.md; every key can also be set programmatically with set_key().

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mfc/covariance.hpp"
#include "mfc/liouville.hpp"
#include "mfc/model.hpp"
#include "mfc/transport.hpp"

namespace mfc {

inline constexpr int kSchemaVersion = 1;

enum class EngineChoice { Exact, Covariance, Trajectories, Both };

struct RunConfig {
  LatticeSpec lattice;
  double gamma = 1.0;
  std::vector<double> gammas = default_gamma_grid();
  double gamma_s = 0.01;
  double gamma_d = 0.01;
  EngineChoice engine = EngineChoice::Covariance;
  SteadyMethod solver = SteadyMethod::LinearSolve;
  CovarianceMode covariance_mode = CovarianceMode::Hermitian;
  double atol = 1e-12;
  double rtol = 1e-10;
  double t_final = 20.0;
  double uniformity_tolerance = 1e-6;
  long trajectories = 1000;
  std::uint64_t master_seed = 20240101;
  std::string initial_state;  // occupations from site 1, e.g. "1010"; empty = alternating
  std::string csv_path;
  std::string report_path;
  std::string svg_path;
};

/// Applies one `key = value` assignment. Throws Error(Config) naming the key.
void set_key(RunConfig& config, const std::string& key, const std::string& value);

/// Parses a whole config file body on top of `base`.
RunConfig parse_config(const std::string& text, const RunConfig& base = {});

RunConfig load_config_file(const std::string& path, const RunConfig& base = {});

/// Field-level validation; throws Error(Config) on the first invalid field.
void validate(const RunConfig& config);

TransportConfig transport_config(const RunConfig& config, Engine engine);

/// Occupation pattern for the trajectory initial state (validated).
std::vector<int> initial_occupations(const RunConfig& config);

const char* engine_choice_name(EngineChoice engine);
const char* solver_name(SteadyMethod method);

}  // namespace mfc
