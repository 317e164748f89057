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

#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "mfc/mfc.h"

// Defined in c_header_check.c, compiled as C.
extern "C" int mfc_c_smoke(void);

namespace {

struct Config {
  mfc_config* p = nullptr;
  Config() { REQUIRE(mfc_config_create(&p) == MFC_OK); }
  ~Config() { mfc_config_destroy(p); }
  void set(const char* k, const char* v) { REQUIRE(mfc_config_set(p, k, v) == MFC_OK); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  mfc_string_free(s);
  return out;
}

const double kPi = std::acos(-1.0);

}  // namespace

TEST_CASE("header compiles as C and links") { CHECK(mfc_c_smoke() == 0); }

TEST_CASE("status names and version") {
  CHECK(std::string(mfc_status_name(MFC_OK)) == "ok");
  CHECK(std::string(mfc_status_name(MFC_ERR_DEGENERATE)) == "degenerate");
  CHECK(std::string(mfc_status_name(MFC_ERR_INTERNAL)) == "internal");
  CHECK(std::string(mfc_version()).size() > 0);
}

TEST_CASE("null arguments are rejected") {
  CHECK(mfc_config_create(nullptr) == MFC_ERR_INVALID_ARGUMENT);
  CHECK(std::string(mfc_last_error()).find("null") != std::string::npos);
  CHECK(mfc_steady_run(nullptr, nullptr) == MFC_ERR_INVALID_ARGUMENT);
  CHECK(mfc_sweep_size(nullptr) == 0);
  mfc_config_destroy(nullptr);
  mfc_string_free(nullptr);
}

TEST_CASE("config errors map to status codes") {
  Config cfg;
  CHECK(mfc_config_set(cfg.p, "bogus", "1") == MFC_ERR_CONFIG);
  CHECK(std::string(mfc_last_error()).find("bogus") != std::string::npos);
  CHECK(mfc_config_parse(cfg.p, "n_sites = 4\n") == MFC_ERR_CONFIG);
  CHECK(mfc_config_load(cfg.p, "/nonexistent/mfc.conf") == MFC_ERR_IO);
  cfg.set("n_sites", "1");
  CHECK(mfc_config_validate(cfg.p) == MFC_ERR_CONFIG);
  cfg.set("n_sites", "13");
  cfg.set("engine", "exact");
  CHECK(mfc_config_validate(cfg.p) == MFC_ERR_SIZE_LIMIT);
}

TEST_CASE("config parse and output paths") {
  Config cfg;
  REQUIRE(mfc_config_parse(cfg.p, "schema_version = 1\ncsv = a.csv\nsvg = p.svg\n") == MFC_OK);
  CHECK(std::string(mfc_config_output_path(cfg.p, "csv")) == "a.csv");
  CHECK(std::string(mfc_config_output_path(cfg.p, "svg")) == "p.svg");
  CHECK(std::string(mfc_config_output_path(cfg.p, "report")).empty());
  CHECK(std::string(mfc_config_output_path(cfg.p, "other")).empty());
}

TEST_CASE("steady state through the C interface") {
  Config cfg;
  cfg.set("n_sites", "6");
  mfc_steady_result* r = nullptr;
  REQUIRE(mfc_steady_run(cfg.p, &r) == MFC_OK);
  REQUIRE(mfc_steady_count(r) == 1);
  mfc_estimate e;
  REQUIRE(mfc_steady_estimate(r, 0, &e) == MFC_OK);
  CHECK(e.d_value == doctest::Approx(12.0 / 5.01).epsilon(1e-12));
  CHECK(e.engine == MFC_ENGINE_COVARIANCE);
  CHECK(e.n_sites == 6);
  std::vector<double> n(6), j(5);
  CHECK(mfc_steady_densities(r, 0, n.data(), n.size()) == 6);
  CHECK(mfc_steady_currents(r, 0, j.data(), j.size()) == 5);
  CHECK(mfc_steady_currents(r, 0, nullptr, 0) == 5);
  CHECK(n[0] == e.n1);
  CHECK(j[0] == e.j12);
  CHECK(mfc_steady_estimate(r, 1, &e) == MFC_ERR_INVALID_ARGUMENT);
  char* csv = nullptr;
  REQUIRE(mfc_steady_csv(r, &csv) == MFC_OK);
  const std::string text = take(csv);
  CHECK(text.rfind("gamma,D,J12,n1,nN,n_sites,engine,residual,uniformity_spread", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  char* summary = nullptr;
  REQUIRE(mfc_steady_summary(r, &summary) == MFC_OK);
  CHECK(take(summary).find("bond_currents:") != std::string::npos);
  mfc_steady_destroy(r);
}

TEST_CASE("undriven steady state reports degeneracy") {
  Config cfg;
  cfg.set("gamma_s", "0");
  cfg.set("gamma_d", "0");
  mfc_steady_result* r = nullptr;
  CHECK(mfc_steady_run(cfg.p, &r) == MFC_ERR_DEGENERATE);
  CHECK(r == nullptr);
  CHECK(std::string(mfc_last_error()).find("drive") != std::string::npos);
}

TEST_CASE("both engines in one steady run") {
  Config cfg;
  cfg.set("n_sites", "4");
  cfg.set("engine", "both");
  mfc_steady_result* r = nullptr;
  REQUIRE(mfc_steady_run(cfg.p, &r) == MFC_OK);
  CHECK(mfc_steady_count(r) == 2);
  char* csv = nullptr;
  REQUIRE(mfc_steady_csv(r, &csv) == MFC_OK);
  CHECK(take(csv).find("rel_disagreement") != std::string::npos);
  mfc_steady_destroy(r);
}

TEST_CASE("sweep, csv reload and fit") {
  Config cfg;
  mfc_sweep_result* sweep = nullptr;
  REQUIRE(mfc_sweep_run(cfg.p, &sweep) == MFC_OK);
  REQUIRE(mfc_sweep_size(sweep) == 8);
  double previous = INFINITY;
  for (size_t i = 0; i < 8; ++i) {
    mfc_estimate e;
    int ok = 0;
    REQUIRE(mfc_sweep_point(sweep, i, &e, &ok) == MFC_OK);
    CHECK(ok == 1);
    CHECK(e.d_value < previous);
    previous = e.d_value;
  }
  char* csv = nullptr;
  REQUIRE(mfc_sweep_csv(sweep, &csv) == MFC_OK);
  const std::string text = take(csv);

  mfc_sweep_result* reloaded = nullptr;
  REQUIRE(mfc_sweep_from_csv(text.c_str(), &reloaded) == MFC_OK);
  char* again = nullptr;
  REQUIRE(mfc_sweep_csv(reloaded, &again) == MFC_OK);
  CHECK(take(again) == text);

  mfc_fit_result* a = nullptr;
  mfc_fit_result* b = nullptr;
  REQUIRE(mfc_fit_run(sweep, &a) == MFC_OK);
  REQUIRE(mfc_fit_run(reloaded, &b) == MFC_OK);
  mfc_fit_values va, vb;
  REQUIRE(mfc_fit_values_get(a, &va) == MFC_OK);
  REQUIRE(mfc_fit_values_get(b, &vb) == MFC_OK);
  CHECK(va.slope == vb.slope);
  CHECK(std::abs(va.slope + 1.0) < 0.05);
  CHECK(va.r_squared > 0.999);
  CHECK(va.n_points == 8);
  char* report = nullptr;
  REQUIRE(mfc_fit_report(a, &report) == MFC_OK);
  CHECK(take(report).rfind("slope: ", 0) == 0);
  char* svg = nullptr;
  REQUIRE(mfc_fit_svg(a, &svg) == MFC_OK);
  CHECK(take(svg).find("<svg") == 0);
  mfc_fit_destroy(a);
  mfc_fit_destroy(b);
  mfc_sweep_destroy(reloaded);
  mfc_sweep_destroy(sweep);
}

TEST_CASE("short gamma lists are refused before computing") {
  Config cfg;
  cfg.set("gammas", "1,2,3");
  mfc_sweep_result* sweep = nullptr;
  CHECK(mfc_sweep_run(cfg.p, &sweep) == MFC_ERR_INSUFFICIENT_POINTS);
  CHECK(sweep == nullptr);
}

TEST_CASE("malformed csv is an io error") {
  mfc_sweep_result* sweep = nullptr;
  CHECK(mfc_sweep_from_csv("not,a,sweep\n", &sweep) == MFC_ERR_IO);
}

TEST_CASE("trajectory engine is only reachable through the trajectories call") {
  Config cfg;
  cfg.set("engine", "trajectories");
  mfc_steady_result* r = nullptr;
  CHECK(mfc_steady_run(cfg.p, &r) == MFC_ERR_CONFIG);
}

TEST_CASE("validation and trajectories through the C interface") {
  Config cfg;
  cfg.set("n_sites", "3");
  cfg.set("trajectories", "200");
  mfc_validation_result* v = nullptr;
  REQUIRE(mfc_validate_run(cfg.p, &v) == MFC_OK);
  CHECK(mfc_validation_passed(v) == 1);
  char* text = nullptr;
  REQUIRE(mfc_validation_report(v, &text) == MFC_OK);
  CHECK(take(text).find("overall: PASS") != std::string::npos);
  mfc_validation_destroy(v);

  cfg.set("t_final", "2");
  mfc_trajectory_result* t = nullptr;
  REQUIRE(mfc_trajectories_run(cfg.p, &t) == MFC_OK);
  CHECK(mfc_trajectory_count(t) == 6);
  mfc_observable_estimate o;
  REQUIRE(mfc_trajectory_observable(t, 0, &o) == MFC_OK);
  CHECK(std::string(o.name) == "n_1");
  CHECK(o.std_error > 0.0);
  CHECK(mfc_trajectory_observable(t, 6, &o) == MFC_ERR_INVALID_ARGUMENT);
  mfc_trajectory_destroy(t);
}

TEST_CASE("closed-form predictions") {
  double d = 0.0;
  REQUIRE(mfc_modified_diffusion(2.0, 2, 1.0, &d) == MFC_OK);
  CHECK(std::abs(d - 2.0) < 1e-12);
  CHECK(mfc_modified_diffusion(1.0, 1, 0.0, &d) == MFC_ERR_INVALID_ARGUMENT);
  double sigma = 0.0;
  REQUIRE(mfc_drude_conductivity(1.0, 1.0, 1, 1.0, &sigma) == MFC_OK);
  CHECK(std::abs(sigma - 1.0) < 1e-12);
  double out[4];
  REQUIRE(mfc_diffuson(0.0, 1.0, 1.0, 1.0 / kPi, 1, 1.0, out) == MFC_OK);
  CHECK(std::abs(out[0]) < 1e-12);
  CHECK(std::abs(out[1] + 1.0) < 1e-12);
  CHECK(std::abs(out[2]) < 1e-12);
  CHECK(std::abs(out[3] - 1.0) < 1e-12);
  CHECK(mfc_diffuson(0.0, 0.0, 1.0, 1.0, 1, 1.0, out) == MFC_ERR_INVALID_ARGUMENT);
}
