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

#include "mfc/mfc.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "mfc/config.hpp"
#include "mfc/report.hpp"
#include "mfc/theory.hpp"
#include "mfc/validation.hpp"

struct mfc_config {
  mfc::RunConfig config;
};

struct mfc_steady_result {
  std::vector<mfc::SteadyTransport> results;
};

struct mfc_sweep_result {
  std::vector<mfc::CsvRow> rows;
};

struct mfc_fit_result {
  mfc::ScalingComparison comparison;
  std::vector<mfc::DiffusionEstimate> estimates;
};

struct mfc_validation_result {
  mfc::ValidationReport report;
};

struct mfc_trajectory_result {
  mfc::TrajectoryComparison comparison;
};

namespace {

thread_local std::string g_last_error;

mfc_status fail(mfc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename F>
mfc_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return MFC_OK;
  } catch (const mfc::Error& e) {
    return fail(static_cast<mfc_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MFC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MFC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MFC_ERR_INTERNAL, "unknown error");
  }
}

mfc_status null_argument(const char* what) {
  return fail(MFC_ERR_INVALID_ARGUMENT, std::string(what) + ": null argument");
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

mfc_estimate to_c(const mfc::DiffusionEstimate& e) {
  mfc_estimate out;
  out.gamma = e.gamma;
  out.d_value = e.d_value;
  out.j12 = e.j12;
  out.n1 = e.n1;
  out.n_last = e.nN;
  out.n_sites = e.n_sites;
  out.engine = e.engine == mfc::Engine::Exact ? MFC_ENGINE_EXACT : MFC_ENGINE_COVARIANCE;
  out.residual = e.residual;
  out.uniformity_spread = e.uniformity_spread;
  return out;
}

std::vector<mfc::Engine> steady_engines(const mfc::RunConfig& config, const char* command) {
  switch (config.engine) {
    case mfc::EngineChoice::Exact: return {mfc::Engine::Exact};
    case mfc::EngineChoice::Covariance: return {mfc::Engine::Covariance};
    case mfc::EngineChoice::Both: return {mfc::Engine::Exact, mfc::Engine::Covariance};
    case mfc::EngineChoice::Trajectories: break;
  }
  throw mfc::Error(mfc::ErrorCode::Config,
                   std::string(command) + ": engine 'trajectories' is only available through the trajectories command");
}

size_t copy_out(const mfc::RealVector& v, double* buf, size_t len) {
  const size_t n = static_cast<size_t>(v.size());
  if (buf) {
    for (size_t i = 0; i < n && i < len; ++i) buf[i] = v[static_cast<Eigen::Index>(i)];
  }
  return n;
}

// Fit on covariance rows when present, else on exact rows.
std::vector<mfc::DiffusionEstimate> fit_estimates(const std::vector<mfc::CsvRow>& rows) {
  bool has_cov = false;
  for (const auto& r : rows) {
    if (r.ok() && r.estimate.engine == mfc::Engine::Covariance) has_cov = true;
  }
  const mfc::Engine pick = has_cov ? mfc::Engine::Covariance : mfc::Engine::Exact;
  std::vector<mfc::DiffusionEstimate> out;
  for (const auto& r : rows) {
    if (r.ok() && r.estimate.engine == pick) out.push_back(r.estimate);
  }
  return out;
}

}  // namespace

extern "C" {

const char* mfc_version(void) { return MFC_VERSION_STRING; }

const char* mfc_last_error(void) { return g_last_error.c_str(); }

const char* mfc_status_name(mfc_status status) {
  switch (status) {
    case MFC_OK: return "ok";
    case MFC_ERR_INTERNAL: return "internal";
    default: break;
  }
  if (status >= MFC_ERR_INVALID_ARGUMENT && status <= MFC_ERR_VALIDATION) {
    return mfc::error_code_name(static_cast<mfc::ErrorCode>(status));
  }
  return "unknown";
}

void mfc_string_free(char* s) { std::free(s); }

mfc_status mfc_config_create(mfc_config** out) {
  if (!out) return null_argument("mfc_config_create");
  *out = nullptr;
  return guarded([&] { *out = new mfc_config(); });
}

void mfc_config_destroy(mfc_config* config) { delete config; }

mfc_status mfc_config_load(mfc_config* config, const char* path) {
  if (!config || !path) return null_argument("mfc_config_load");
  return guarded([&] { config->config = mfc::load_config_file(path, config->config); });
}

mfc_status mfc_config_parse(mfc_config* config, const char* text) {
  if (!config || !text) return null_argument("mfc_config_parse");
  return guarded([&] { config->config = mfc::parse_config(text, config->config); });
}

mfc_status mfc_config_set(mfc_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return null_argument("mfc_config_set");
  return guarded([&] { mfc::set_key(config->config, key, value); });
}

mfc_status mfc_config_validate(const mfc_config* config) {
  if (!config) return null_argument("mfc_config_validate");
  return guarded([&] { mfc::validate(config->config); });
}

const char* mfc_config_output_path(const mfc_config* config, const char* kind) {
  if (!config || !kind) return "";
  const std::string k = kind;
  if (k == "csv") return config->config.csv_path.c_str();
  if (k == "report") return config->config.report_path.c_str();
  if (k == "svg") return config->config.svg_path.c_str();
  return "";
}

mfc_status mfc_steady_run(const mfc_config* config, mfc_steady_result** out) {
  if (!config || !out) return null_argument("mfc_steady_run");
  *out = nullptr;
  return guarded([&] {
    mfc::validate(config->config);
    auto result = std::make_unique<mfc_steady_result>();
    for (mfc::Engine engine : steady_engines(config->config, "steady")) {
      result->results.push_back(
          mfc::steady_transport(mfc::transport_config(config->config, engine), config->config.gamma));
    }
    *out = result.release();
  });
}

void mfc_steady_destroy(mfc_steady_result* result) { delete result; }

size_t mfc_steady_count(const mfc_steady_result* result) { return result ? result->results.size() : 0; }

mfc_status mfc_steady_estimate(const mfc_steady_result* result, size_t index, mfc_estimate* out) {
  if (!result || !out) return null_argument("mfc_steady_estimate");
  if (index >= result->results.size()) return fail(MFC_ERR_INVALID_ARGUMENT, "mfc_steady_estimate: index out of range");
  *out = to_c(result->results[index].estimate);
  return MFC_OK;
}

size_t mfc_steady_densities(const mfc_steady_result* result, size_t index, double* buf, size_t len) {
  if (!result || index >= result->results.size()) return 0;
  return copy_out(result->results[index].observables.densities, buf, len);
}

size_t mfc_steady_currents(const mfc_steady_result* result, size_t index, double* buf, size_t len) {
  if (!result || index >= result->results.size()) return 0;
  return copy_out(result->results[index].observables.bond_currents, buf, len);
}

mfc_status mfc_steady_csv(const mfc_steady_result* result, char** out) {
  if (!result || !out) return null_argument("mfc_steady_csv");
  *out = nullptr;
  return guarded([&] {
    std::vector<mfc::CsvRow> rows;
    for (const auto& r : result->results) rows.push_back(mfc::CsvRow{r.estimate, "ok", std::nullopt});
    if (rows.size() == 2) rows = mfc::merge_engine_rows({rows[0]}, {rows[1]});
    *out = duplicate(mfc::format_csv(rows));
  });
}

mfc_status mfc_steady_summary(const mfc_steady_result* result, char** out) {
  if (!result || !out) return null_argument("mfc_steady_summary");
  *out = nullptr;
  return guarded([&] {
    std::string text;
    for (size_t i = 0; i < result->results.size(); ++i) {
      if (i) text += '\n';
      text += mfc::format_steady_summary(result->results[i]);
    }
    *out = duplicate(text);
  });
}

mfc_status mfc_sweep_run(const mfc_config* config, mfc_sweep_result** out) {
  if (!config || !out) return null_argument("mfc_sweep_run");
  *out = nullptr;
  return guarded([&] {
    const mfc::RunConfig& cfg = config->config;
    mfc::validate(cfg);
    if (cfg.gammas.size() < 4) {
      throw mfc::Error(mfc::ErrorCode::InsufficientPoints,
                       "sweep: the fit needs at least 4 gammas, got " + std::to_string(cfg.gammas.size()));
    }
    auto result = std::make_unique<mfc_sweep_result>();
    std::vector<std::vector<mfc::CsvRow>> per_engine;
    for (mfc::Engine engine : steady_engines(cfg, "sweep")) {
      auto sweep = mfc::gamma_sweep(mfc::transport_config(cfg, engine), cfg.gammas);
      per_engine.push_back(mfc::csv_rows(sweep, engine, cfg.lattice.n_sites));
    }
    result->rows = per_engine.size() == 2 ? mfc::merge_engine_rows(per_engine[0], per_engine[1]) : per_engine[0];
    *out = result.release();
  });
}

mfc_status mfc_sweep_from_csv(const char* csv_text, mfc_sweep_result** out) {
  if (!csv_text || !out) return null_argument("mfc_sweep_from_csv");
  *out = nullptr;
  return guarded([&] {
    auto result = std::make_unique<mfc_sweep_result>();
    result->rows = mfc::parse_csv(csv_text);
    *out = result.release();
  });
}

void mfc_sweep_destroy(mfc_sweep_result* result) { delete result; }

size_t mfc_sweep_size(const mfc_sweep_result* result) { return result ? result->rows.size() : 0; }

mfc_status mfc_sweep_point(const mfc_sweep_result* result, size_t index, mfc_estimate* out, int* ok) {
  if (!result || !out) return null_argument("mfc_sweep_point");
  if (index >= result->rows.size()) return fail(MFC_ERR_INVALID_ARGUMENT, "mfc_sweep_point: index out of range");
  *out = to_c(result->rows[index].estimate);
  if (ok) *ok = result->rows[index].ok() ? 1 : 0;
  return MFC_OK;
}

mfc_status mfc_sweep_csv(const mfc_sweep_result* result, char** out) {
  if (!result || !out) return null_argument("mfc_sweep_csv");
  *out = nullptr;
  return guarded([&] { *out = duplicate(mfc::format_csv(result->rows)); });
}

mfc_status mfc_fit_run(const mfc_sweep_result* sweep, mfc_fit_result** out) {
  if (!sweep || !out) return null_argument("mfc_fit_run");
  *out = nullptr;
  return guarded([&] {
    auto result = std::make_unique<mfc_fit_result>();
    result->estimates = fit_estimates(sweep->rows);
    result->comparison = mfc::compare_scaling(result->estimates);
    *out = result.release();
  });
}

void mfc_fit_destroy(mfc_fit_result* fit) { delete fit; }

mfc_status mfc_fit_values_get(const mfc_fit_result* fit, mfc_fit_values* out) {
  if (!fit || !out) return null_argument("mfc_fit_values_get");
  const auto& c = fit->comparison;
  out->slope = c.fit.slope;
  out->slope_stderr = c.fit.slope_stderr;
  out->intercept = c.fit.intercept;
  out->r_squared = c.fit.r_squared;
  out->n_points = c.fit.points.size();
  out->prefactor_mean = c.prefactor_mean;
  out->prefactor_rel_spread = c.prefactor_rel_spread;
  return MFC_OK;
}

mfc_status mfc_fit_report(const mfc_fit_result* fit, char** out) {
  if (!fit || !out) return null_argument("mfc_fit_report");
  *out = nullptr;
  return guarded([&] { *out = duplicate(mfc::format_fit_report(fit->comparison)); });
}

mfc_status mfc_fit_svg(const mfc_fit_result* fit, char** out) {
  if (!fit || !out) return null_argument("mfc_fit_svg");
  *out = nullptr;
  return guarded([&] { *out = duplicate(mfc::format_svg(fit->estimates, fit->comparison.fit)); });
}

mfc_status mfc_validate_run(const mfc_config* config, mfc_validation_result** out) {
  if (!config || !out) return null_argument("mfc_validate_run");
  *out = nullptr;
  return guarded([&] {
    mfc::validate(config->config);
    auto result = std::make_unique<mfc_validation_result>();
    result->report = mfc::run_validation(config->config);
    *out = result.release();
  });
}

void mfc_validation_destroy(mfc_validation_result* result) { delete result; }

int mfc_validation_passed(const mfc_validation_result* result) { return result && result->report.passed() ? 1 : 0; }

mfc_status mfc_validation_report(const mfc_validation_result* result, char** out) {
  if (!result || !out) return null_argument("mfc_validation_report");
  *out = nullptr;
  return guarded([&] { *out = duplicate(mfc::format_validation_report(result->report)); });
}

mfc_status mfc_trajectories_run(const mfc_config* config, mfc_trajectory_result** out) {
  if (!config || !out) return null_argument("mfc_trajectories_run");
  *out = nullptr;
  return guarded([&] {
    mfc::validate(config->config);
    auto result = std::make_unique<mfc_trajectory_result>();
    result->comparison = mfc::compare_trajectories(config->config);
    *out = result.release();
  });
}

void mfc_trajectory_destroy(mfc_trajectory_result* result) { delete result; }

size_t mfc_trajectory_count(const mfc_trajectory_result* result) {
  return result ? result->comparison.observables.size() : 0;
}

mfc_status mfc_trajectory_observable(const mfc_trajectory_result* result, size_t index,
                                     mfc_observable_estimate* out) {
  if (!result || !out) return null_argument("mfc_trajectory_observable");
  const auto& obs = result->comparison.observables;
  if (index >= obs.size()) return fail(MFC_ERR_INVALID_ARGUMENT, "mfc_trajectory_observable: index out of range");
  out->name = obs[index].name.c_str();
  out->mean = obs[index].trajectory.mean;
  out->std_error = obs[index].trajectory.std_error;
  out->lindblad = obs[index].lindblad;
  out->z_score = obs[index].z_score();
  return MFC_OK;
}

mfc_status mfc_trajectory_report(const mfc_trajectory_result* result, char** out) {
  if (!result || !out) return null_argument("mfc_trajectory_report");
  *out = nullptr;
  return guarded([&] { *out = duplicate(mfc::format_trajectory_report(result->comparison)); });
}

mfc_status mfc_modified_diffusion(double v_f, int dim, double gamma, double* out) {
  if (!out) return null_argument("mfc_modified_diffusion");
  return guarded([&] { *out = mfc::modified_diffusion(mfc::TheoryParams{v_f, 1.0, dim, gamma}); });
}

mfc_status mfc_drude_conductivity(double v_f, double nu, int dim, double gamma, double* out) {
  if (!out) return null_argument("mfc_drude_conductivity");
  return guarded([&] { *out = mfc::drude_conductivity(mfc::TheoryParams{v_f, nu, dim, gamma}); });
}

mfc_status mfc_diffuson(double k_sq, double eps, double v_f, double nu, int dim, double gamma, double out[4]) {
  if (!out) return null_argument("mfc_diffuson");
  return guarded([&] {
    const mfc::DiffusonPair d = mfc::diffuson(k_sq, eps, mfc::TheoryParams{v_f, nu, dim, gamma});
    out[0] = d.value_12.real();
    out[1] = d.value_12.imag();
    out[2] = d.value_21.real();
    out[3] = d.value_21.imag();
  });
}

}  // extern "C"
