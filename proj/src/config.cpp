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

#include "mfc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mfc {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

Error config_error(const std::string& key, const std::string& message) {
  return Error(ErrorCode::Config, key + ": " + message);
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw config_error(key, "expected a finite number, got '" + value + "'");
  }
  return out;
}

long long parse_integer(const std::string& key, const std::string& value) {
  long long out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) throw config_error(key, "expected an integer, got '" + value + "'");
  return out;
}

std::uint64_t parse_seed(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw config_error(key, "expected an unsigned 64-bit integer, got '" + value + "'");
  }
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(parse_double(key, item));
  }
  return out;
}

}  // namespace

const char* engine_choice_name(EngineChoice engine) {
  switch (engine) {
    case EngineChoice::Exact: return "exact";
    case EngineChoice::Covariance: return "covariance";
    case EngineChoice::Trajectories: return "trajectories";
    case EngineChoice::Both: return "both";
  }
  return "?";
}

const char* solver_name(SteadyMethod method) {
  switch (method) {
    case SteadyMethod::LinearSolve: return "linear-solve";
    case SteadyMethod::NullSpace: return "null-space";
    case SteadyMethod::TimeEvolve: return "time-evolve";
  }
  return "?";
}

void set_key(RunConfig& config, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "schema_version") {
    if (parse_integer(key, value) != kSchemaVersion) {
      throw config_error(key, "unsupported schema version '" + value + "' (expected " +
                                  std::to_string(kSchemaVersion) + ")");
    }
  } else if (key == "n_sites") {
    const long long n = parse_integer(key, value);
    if (n < -1000000 || n > 1000000) throw config_error(key, "out of range");
    config.lattice.n_sites = static_cast<int>(n);
  } else if (key == "hopping") {
    config.lattice.hopping = parse_double(key, value);
  } else if (key == "gamma") {
    config.gamma = parse_double(key, value);
  } else if (key == "gammas") {
    config.gammas = parse_list(key, value);
  } else if (key == "gamma_s") {
    config.gamma_s = parse_double(key, value);
  } else if (key == "gamma_d") {
    config.gamma_d = parse_double(key, value);
  } else if (key == "engine") {
    if (value == "exact") config.engine = EngineChoice::Exact;
    else if (value == "covariance") config.engine = EngineChoice::Covariance;
    else if (value == "trajectories") config.engine = EngineChoice::Trajectories;
    else if (value == "both") config.engine = EngineChoice::Both;
    else throw config_error(key, "expected exact|covariance|trajectories|both, got '" + value + "'");
  } else if (key == "solver") {
    if (value == "linear-solve") config.solver = SteadyMethod::LinearSolve;
    else if (value == "null-space") config.solver = SteadyMethod::NullSpace;
    else if (value == "time-evolve") config.solver = SteadyMethod::TimeEvolve;
    else throw config_error(key, "expected null-space|linear-solve|time-evolve, got '" + value + "'");
  } else if (key == "covariance_mode") {
    if (value == "hermitian") config.covariance_mode = CovarianceMode::Hermitian;
    else if (value == "full") config.covariance_mode = CovarianceMode::Full;
    else throw config_error(key, "expected hermitian|full, got '" + value + "'");
  } else if (key == "atol") {
    config.atol = parse_double(key, value);
  } else if (key == "rtol") {
    config.rtol = parse_double(key, value);
  } else if (key == "t_final") {
    config.t_final = parse_double(key, value);
  } else if (key == "uniformity_tolerance") {
    config.uniformity_tolerance = parse_double(key, value);
  } else if (key == "trajectories") {
    config.trajectories = static_cast<long>(parse_integer(key, value));
  } else if (key == "master_seed") {
    config.master_seed = parse_seed(key, value);
  } else if (key == "initial_state") {
    config.initial_state = value;
  } else if (key == "csv") {
    config.csv_path = value;
  } else if (key == "report") {
    config.report_path = value;
  } else if (key == "svg") {
    config.svg_path = value;
  } else {
    throw config_error(key, "unknown key");
  }
}

RunConfig parse_config(const std::string& text, const RunConfig& base) {
  RunConfig config = base;
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  bool saw_version = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!saw_version && key != "schema_version") {
      throw Error(ErrorCode::Config, "schema_version: must be the first key of a config file");
    }
    saw_version = true;
    try {
      set_key(config, key, line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!saw_version) throw Error(ErrorCode::Config, "schema_version: missing");
  return config;
}

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), base);
}

void validate(const RunConfig& config) {
  config.lattice.validate();
  MonitorSpec{config.gamma, config.gamma_s, config.gamma_d}.validate();
  if (!(config.atol > 0.0)) throw config_error("atol", "must be positive");
  if (!(config.rtol > 0.0)) throw config_error("rtol", "must be positive");
  if (!(config.t_final >= 0.0)) throw config_error("t_final", "must be non-negative");
  if (!(config.uniformity_tolerance > 0.0)) throw config_error("uniformity_tolerance", "must be positive");
  if (config.trajectories < 2) throw config_error("trajectories", "need at least 2 trajectories");
  std::set<double> seen;
  for (double g : config.gammas) {
    if (!(g > 0.0)) throw config_error("gammas", "every gamma must be positive, got " + std::to_string(g));
    if (!seen.insert(g).second) throw config_error("gammas", "duplicate gamma " + std::to_string(g));
  }
  if (config.engine == EngineChoice::Covariance && config.solver == SteadyMethod::NullSpace) {
    throw config_error("solver", "null-space is only available for the exact engine");
  }
  if (config.engine != EngineChoice::Covariance && config.lattice.n_sites > kMaxExactSites) {
    throw Error(ErrorCode::SizeLimit, "n_sites: exact engine size limit is " + std::to_string(kMaxExactSites) +
                                          ", got " + std::to_string(config.lattice.n_sites));
  }
  if (!config.initial_state.empty()) initial_occupations(config);
}

TransportConfig transport_config(const RunConfig& config, Engine engine) {
  TransportConfig out;
  out.lattice = config.lattice;
  out.gamma_s = config.gamma_s;
  out.gamma_d = config.gamma_d;
  out.engine = engine;
  out.method = config.solver;
  if (engine == Engine::Covariance && out.method == SteadyMethod::NullSpace) out.method = SteadyMethod::LinearSolve;
  out.mode = config.covariance_mode;
  out.uniformity_tolerance = config.uniformity_tolerance;
  out.step = StepControl{config.atol, config.rtol};
  return out;
}

std::vector<int> initial_occupations(const RunConfig& config) {
  const int n = config.lattice.n_sites;
  std::vector<int> occ(static_cast<size_t>(std::max(n, 0)));
  if (config.initial_state.empty()) {
    for (int i = 0; i < n; ++i) occ[i] = (i % 2 == 0) ? 1 : 0;
    return occ;
  }
  if (static_cast<int>(config.initial_state.size()) != n) {
    throw config_error("initial_state", "needs one 0/1 digit per site (" + std::to_string(n) + ")");
  }
  for (int i = 0; i < n; ++i) {
    const char ch = config.initial_state[i];
    if (ch != '0' && ch != '1') throw config_error("initial_state", "digits must be 0 or 1");
    occ[i] = ch - '0';
  }
  return occ;
}

}  // namespace mfc
