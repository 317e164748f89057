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

// mfchain command-line driver. Talks to the library only through mfc/mfc.h.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "mfc/mfc.h"

namespace {

enum ExitCode : int {
  kExitOk = 0,
  kExitOther = 1,
  kExitConfig = 2,
  kExitSolver = 3,
  kExitValidation = 4,
  kExitIo = 5,
};

int exit_code_for(mfc_status status) {
  switch (status) {
    case MFC_OK: return kExitOk;
    case MFC_ERR_INVALID_ARGUMENT:
    case MFC_ERR_CONFIG:
    case MFC_ERR_SIZE_LIMIT: return kExitConfig;
    case MFC_ERR_DEGENERATE:
    case MFC_ERR_UNDEFINED_DIFFUSION:
    case MFC_ERR_SOLVER:
    case MFC_ERR_INTEGRATION:
    case MFC_ERR_HERMITICITY:
    case MFC_ERR_INSUFFICIENT_POINTS:
    case MFC_ERR_NONUNIFORM_CURRENT: return kExitSolver;
    case MFC_ERR_VALIDATION: return kExitValidation;
    case MFC_ERR_IO: return kExitIo;
    default: return kExitOther;
  }
}

// Carries a library failure up to main().
struct Failure {
  mfc_status status;
  std::string message;
};

void check(mfc_status status) {
  if (status != MFC_OK) throw Failure{status, mfc_last_error()};
}

template <typename T, void (*Destroy)(T*)>
struct Deleter {
  void operator()(T* p) const { Destroy(p); }
};
using ConfigPtr = std::unique_ptr<mfc_config, Deleter<mfc_config, mfc_config_destroy>>;
using SweepPtr = std::unique_ptr<mfc_sweep_result, Deleter<mfc_sweep_result, mfc_sweep_destroy>>;
using FitPtr = std::unique_ptr<mfc_fit_result, Deleter<mfc_fit_result, mfc_fit_destroy>>;
using SteadyPtr = std::unique_ptr<mfc_steady_result, Deleter<mfc_steady_result, mfc_steady_destroy>>;
using ValidationPtr = std::unique_ptr<mfc_validation_result, Deleter<mfc_validation_result, mfc_validation_destroy>>;
using TrajectoryPtr = std::unique_ptr<mfc_trajectory_result, Deleter<mfc_trajectory_result, mfc_trajectory_destroy>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  mfc_string_free(s);
  return out;
}

template <typename H, typename F>
std::string text_of(const H* handle, F formatter) {
  char* s = nullptr;
  check(formatter(handle, &s));
  return take(s);
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{MFC_ERR_IO, "cannot open '" + path + "' for writing"};
  out << contents;
  if (!out) throw Failure{MFC_ERR_IO, "failed writing '" + path + "'"};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{MFC_ERR_IO, "cannot open '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path` when given, otherwise to stdout.
void emit(const std::string& path, const std::string& contents) {
  if (path.empty()) {
    std::cout << contents;
  } else {
    write_file(path, contents);
  }
}

// Flag values collected as strings and applied as config keys after the file.
struct Overrides {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::vector<std::string> engines;
};

void add_override(CLI::App* cmd, Overrides& o, const std::string& flag, const std::string& key,
                  const std::string& help) {
  cmd->add_option_function<std::string>(
      flag, [&o, key](const std::string& v) { o.values[key] = v; }, help);
}

void add_model_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "Config file (key = value, schema_version first)");
  add_override(cmd, o, "--n-sites", "n_sites", "Number of sites N");
  add_override(cmd, o, "--hopping", "hopping", "Hopping amplitude t");
  add_override(cmd, o, "--gamma-s", "gamma_s", "Source (pump) rate on site 1");
  add_override(cmd, o, "--gamma-d", "gamma_d", "Drain (loss) rate on site N");
  add_override(cmd, o, "--atol", "atol", "Absolute integration tolerance");
  add_override(cmd, o, "--rtol", "rtol", "Relative integration tolerance");
  add_override(cmd, o, "--seed", "master_seed", "Master seed for random draws");
}

void add_engine_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--engine", o.engines, "exact, covariance or trajectories; give exact and covariance to run both");
  add_override(cmd, o, "--solver", "solver", "linear-solve, null-space or time-evolve");
  add_override(cmd, o, "--covariance-mode", "covariance_mode", "hermitian or full");
  add_override(cmd, o, "--t-final", "t_final", "Relaxation horizon for time evolution");
  add_override(cmd, o, "--uniformity-tolerance", "uniformity_tolerance", "Allowed relative bond-current spread");
}

void add_output_flags(CLI::App* cmd, Overrides& o, bool svg) {
  add_override(cmd, o, "--csv", "csv", "CSV output path");
  add_override(cmd, o, "--report", "report", "Report output path");
  if (svg) add_override(cmd, o, "--svg", "svg", "SVG plot output path");
}

ConfigPtr build_config(const Overrides& o) {
  mfc_config* raw = nullptr;
  check(mfc_config_create(&raw));
  ConfigPtr cfg(raw);
  if (!o.config_path.empty()) check(mfc_config_load(cfg.get(), o.config_path.c_str()));
  if (!o.engines.empty()) {
    bool exact = false, cov = false, traj = false;
    for (const auto& e : o.engines) {
      if (e == "exact") {
        exact = true;
      } else if (e == "covariance") {
        cov = true;
      } else if (e == "trajectories") {
        traj = true;
      } else {
        throw Failure{MFC_ERR_CONFIG, "engine: unknown value '" + e + "'"};
      }
    }
    if (traj && (exact || cov)) throw Failure{MFC_ERR_CONFIG, "engine: trajectories cannot be combined"};
    const char* value = traj ? "trajectories" : (exact && cov) ? "both" : exact ? "exact" : "covariance";
    check(mfc_config_set(cfg.get(), "engine", value));
  }
  for (const auto& [key, value] : o.values) check(mfc_config_set(cfg.get(), key.c_str(), value.c_str()));
  check(mfc_config_validate(cfg.get()));
  return cfg;
}

std::string output_path(const mfc_config* cfg, const char* kind) { return mfc_config_output_path(cfg, kind); }

int run_steady(const Overrides& o) {
  ConfigPtr cfg = build_config(o);
  mfc_steady_result* raw = nullptr;
  check(mfc_steady_run(cfg.get(), &raw));
  SteadyPtr result(raw);
  const std::string summary = text_of(result.get(), mfc_steady_summary);
  const std::string csv = text_of(result.get(), mfc_steady_csv);
  std::cout << summary;
  const std::string csv_path = output_path(cfg.get(), "csv");
  if (csv_path.empty()) {
    std::cout << '\n' << csv;
  } else {
    write_file(csv_path, csv);
  }
  const std::string report_path = output_path(cfg.get(), "report");
  if (!report_path.empty()) write_file(report_path, summary);
  return kExitOk;
}

// Shared tail of `sweep` and `fit`.
int fit_and_report(const mfc_config* cfg, const mfc_sweep_result* sweep) {
  mfc_fit_result* raw = nullptr;
  check(mfc_fit_run(sweep, &raw));
  FitPtr fit(raw);
  const std::string report = text_of(fit.get(), mfc_fit_report);
  const std::string svg_path = output_path(cfg, "svg");
  const std::string svg = svg_path.empty() ? std::string() : text_of(fit.get(), mfc_fit_svg);
  emit(output_path(cfg, "report"), report);
  if (!svg_path.empty()) write_file(svg_path, svg);
  return kExitOk;
}

int run_sweep(const Overrides& o) {
  ConfigPtr cfg = build_config(o);
  mfc_sweep_result* raw = nullptr;
  check(mfc_sweep_run(cfg.get(), &raw));
  SweepPtr sweep(raw);
  const std::string csv = text_of(sweep.get(), mfc_sweep_csv);
  const std::string csv_path = output_path(cfg.get(), "csv");
  if (csv_path.empty()) {
    std::cout << csv << '\n';
  } else {
    write_file(csv_path, csv);
  }
  for (size_t i = 0; i < mfc_sweep_size(sweep.get()); ++i) {
    mfc_estimate e;
    int ok = 0;
    check(mfc_sweep_point(sweep.get(), i, &e, &ok));
    if (!ok) std::cerr << "mfchain: warning: point gamma=" << e.gamma << " failed, see CSV status column\n";
  }
  return fit_and_report(cfg.get(), sweep.get());
}

int run_fit(const Overrides& o, const std::string& input) {
  ConfigPtr cfg = build_config(o);
  const std::string text = read_file(input);
  mfc_sweep_result* raw = nullptr;
  check(mfc_sweep_from_csv(text.c_str(), &raw));
  SweepPtr sweep(raw);
  return fit_and_report(cfg.get(), sweep.get());
}

int run_validate(const Overrides& o) {
  ConfigPtr cfg = build_config(o);
  mfc_validation_result* raw = nullptr;
  check(mfc_validate_run(cfg.get(), &raw));
  ValidationPtr result(raw);
  emit(output_path(cfg.get(), "report"), text_of(result.get(), mfc_validation_report));
  return mfc_validation_passed(result.get()) ? kExitOk : kExitValidation;
}

int run_trajectories(const Overrides& o) {
  ConfigPtr cfg = build_config(o);
  mfc_trajectory_result* raw = nullptr;
  check(mfc_trajectories_run(cfg.get(), &raw));
  TrajectoryPtr result(raw);
  const std::string report = text_of(result.get(), mfc_trajectory_report);
  emit(output_path(cfg.get(), "report"), report);
  const std::string csv_path = output_path(cfg.get(), "csv");
  if (!csv_path.empty()) write_file(csv_path, report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state transport of a dephased, boundary-driven fermion chain.\n"
               "Thread count for sweeps and trajectory ensembles: MFC_THREADS."};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mfc_version()));

  Overrides o;
  std::string fit_input;

  auto* steady = app.add_subcommand("steady", "Steady state at a single gamma");
  add_model_flags(steady, o);
  add_engine_flags(steady, o);
  add_override(steady, o, "--gamma", "gamma", "Dephasing rate");
  add_output_flags(steady, o, false);

  auto* sweep = app.add_subcommand("sweep", "Gamma sweep, CSV and log-log fit");
  add_model_flags(sweep, o);
  add_engine_flags(sweep, o);
  add_override(sweep, o, "--gammas", "gammas", "Comma-separated gamma list");
  add_output_flags(sweep, o, true);

  auto* fit = app.add_subcommand("fit", "Fit an existing sweep CSV");
  fit->add_option("input", fit_input, "Sweep CSV")->required();
  fit->add_option("-c,--config", o.config_path, "Config file");
  add_override(fit, o, "--report", "report", "Report output path");
  add_override(fit, o, "--svg", "svg", "SVG plot output path");

  auto* validate = app.add_subcommand("validate", "Cross-engine and invariant checks");
  add_model_flags(validate, o);
  add_override(validate, o, "--gamma", "gamma", "Dephasing rate");
  add_override(validate, o, "--trajectories", "trajectories", "Trajectories for the sampling check");
  add_override(validate, o, "--report", "report", "Report output path");

  auto* traj = app.add_subcommand("trajectories", "Quantum-jump ensemble against Lindblad evolution");
  add_model_flags(traj, o);
  add_override(traj, o, "--gamma", "gamma", "Dephasing rate");
  add_override(traj, o, "--t-final", "t_final", "Final time");
  add_override(traj, o, "--trajectories", "trajectories", "Number of trajectories M");
  add_override(traj, o, "--initial-state", "initial_state", "Occupations from site 1, e.g. 1010");
  add_output_flags(traj, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*steady) return run_steady(o);
    if (*sweep) return run_sweep(o);
    if (*fit) return run_fit(o, fit_input);
    if (*validate) return run_validate(o);
    if (*traj) return run_trajectories(o);
  } catch (const Failure& f) {
    std::cerr << "mfchain: error [" << mfc_status_name(f.status) << "]: " << f.message << '\n';
    return exit_code_for(f.status);
  } catch (const std::exception& e) {
    std::cerr << "mfchain: error: " << e.what() << '\n';
    return kExitOther;
  }
  return kExitOther;
}
