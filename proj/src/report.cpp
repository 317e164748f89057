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

#include "mfc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mfc {

namespace {

constexpr const char* kSchemaColumns[] = {"gamma", "D",        "J12",      "n1",
                                          "nN",    "n_sites",  "engine",   "residual",
                                          "uniformity_spread"};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream in(line);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s, int line_no) {
  if (s == "nan") return kNaN;
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::Io, "csv line " + std::to_string(line_no) + ": cannot parse number '" + s + "'");
  }
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::Config: return "config";
    case ErrorCode::SizeLimit: return "size-limit";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::UndefinedDiffusion: return "undefined-diffusion";
    case ErrorCode::Solver: return "solver";
    case ErrorCode::Integration: return "integration";
    case ErrorCode::Hermiticity: return "hermiticity";
    case ErrorCode::InsufficientPoints: return "insufficient-points";
    case ErrorCode::NonUniformCurrent: return "non-uniform-current";
    case ErrorCode::Io: return "io";
    case ErrorCode::Validation: return "validation";
  }
  return "unknown";
}

std::vector<CsvRow> csv_rows(const std::vector<SweepPoint>& sweep, Engine engine, int n_sites) {
  std::vector<CsvRow> rows;
  for (const auto& p : sweep) {
    CsvRow row;
    if (p.ok()) {
      row.estimate = p.result->estimate;
    } else {
      row.estimate = DiffusionEstimate{p.gamma, kNaN, kNaN, kNaN, kNaN, n_sites, engine, kNaN, kNaN};
      row.status = std::string("failed:") + error_code_name(p.error_code);
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<CsvRow> merge_engine_rows(const std::vector<CsvRow>& exact, const std::vector<CsvRow>& covariance) {
  if (exact.size() != covariance.size()) {
    throw Error(ErrorCode::InvalidArgument, "merge_engine_rows: engines returned different point counts");
  }
  std::vector<CsvRow> out;
  for (size_t i = 0; i < exact.size(); ++i) {
    CsvRow a = exact[i];
    CsvRow b = covariance[i];
    double diff = kNaN;
    if (a.ok() && b.ok()) diff = std::abs(a.estimate.d_value - b.estimate.d_value) / std::abs(b.estimate.d_value);
    a.rel_disagreement = diff;
    b.rel_disagreement = diff;
    out.push_back(a);
    out.push_back(b);
  }
  return out;
}

std::string format_csv(const std::vector<CsvRow>& rows) {
  const bool with_diff = std::any_of(rows.begin(), rows.end(), [](const CsvRow& r) { return r.rel_disagreement; });
  std::ostringstream out;
  for (const char* col : kSchemaColumns) out << col << ',';
  out << "status";
  if (with_diff) out << ",rel_disagreement";
  out << '\n';
  for (const auto& r : rows) {
    const DiffusionEstimate& e = r.estimate;
    out << format_number(e.gamma) << ',' << format_number(e.d_value) << ',' << format_number(e.j12) << ','
        << format_number(e.n1) << ',' << format_number(e.nN) << ',' << e.n_sites << ',' << engine_name(e.engine)
        << ',' << format_number(e.residual) << ',' << format_number(e.uniformity_spread) << ',' << r.status;
    if (with_diff) out << ',' << format_number(r.rel_disagreement.value_or(kNaN));
    out << '\n';
  }
  return out.str();
}

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  // Leading `#` and blank lines are skipped so fixtures can carry a license header.
  bool got = false;
  while ((got = static_cast<bool>(std::getline(in, line)))) {
    ++line_no;
    if (!line.empty() && line[0] != '#') break;
  }
  if (!got) throw Error(ErrorCode::Io, "csv: empty input");
  const auto header = split(line, ',');
  constexpr size_t kSchema = std::size(kSchemaColumns);
  if (header.size() < kSchema) throw Error(ErrorCode::Io, "csv: header has too few columns");
  for (size_t i = 0; i < kSchema; ++i) {
    if (header[i] != kSchemaColumns[i]) {
      throw Error(ErrorCode::Io, "csv: expected column '" + std::string(kSchemaColumns[i]) + "' at position " +
                                     std::to_string(i + 1) + ", found '" + header[i] + "'");
    }
  }
  const auto find = [&](const char* name) -> long {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<long>(it - header.begin());
  };
  const long status_col = find("status");
  const long diff_col = find("rel_disagreement");

  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) {
      throw Error(ErrorCode::Io, "csv line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
    }
    CsvRow row;
    DiffusionEstimate& e = row.estimate;
    e.gamma = parse_number(cells[0], line_no);
    e.d_value = parse_number(cells[1], line_no);
    e.j12 = parse_number(cells[2], line_no);
    e.n1 = parse_number(cells[3], line_no);
    e.nN = parse_number(cells[4], line_no);
    e.n_sites = static_cast<int>(parse_number(cells[5], line_no));
    if (cells[6] == "exact") {
      e.engine = Engine::Exact;
    } else if (cells[6] == "covariance") {
      e.engine = Engine::Covariance;
    } else {
      throw Error(ErrorCode::Io, "csv line " + std::to_string(line_no) + ": unknown engine '" + cells[6] + "'");
    }
    e.residual = parse_number(cells[7], line_no);
    e.uniformity_spread = parse_number(cells[8], line_no);
    if (status_col >= 0) row.status = cells[status_col];
    if (diff_col >= 0) row.rel_disagreement = parse_number(cells[diff_col], line_no);
    rows.push_back(row);
  }
  return rows;
}

std::string format_fit_report(const ScalingComparison& c) {
  std::ostringstream out;
  out << "slope: " << format_number(c.fit.slope) << '\n';
  out << "slope_stderr: " << format_number(c.fit.slope_stderr) << '\n';
  out << "intercept: " << format_number(c.fit.intercept) << '\n';
  out << "r_squared: " << format_number(c.fit.r_squared) << '\n';
  out << "n_points: " << c.fit.points.size() << '\n';
  out << "theory_slope: " << format_number(c.theory_slope) << '\n';
  out << "slope_deviation: " << format_number(c.slope_deviation) << '\n';
  out << "prefactor_mean: " << format_number(c.prefactor_mean) << '\n';
  out << "prefactor_rel_spread: " << format_number(c.prefactor_rel_spread) << '\n';
  return out.str();
}

std::string format_svg(const std::vector<DiffusionEstimate>& estimates, const ScalingFit& fit) {
  constexpr double kWidth = 640, kHeight = 480, kLeft = 80, kRight = 30, kTop = 30, kBottom = 70;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& [x, y] : fit.points) {
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
  }
  // Axis limits snapped to decades.
  const double lx0 = std::floor(xmin / std::log(10.0)), lx1 = std::ceil(xmax / std::log(10.0));
  const double ly0 = std::floor(ymin / std::log(10.0)), ly1 = std::ceil(ymax / std::log(10.0));
  const double dx = std::max(lx1 - lx0, 1.0), dy = std::max(ly1 - ly0, 1.0);
  auto px = [&](double log10x) { return kLeft + (log10x - lx0) / dx * (kWidth - kLeft - kRight); };
  auto py = [&](double log10y) { return kHeight - kBottom - (log10y - ly0) / dy * (kHeight - kTop - kBottom); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<g stroke=\"black\" fill=\"none\">\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << kHeight - kBottom << "\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
      << "\"/>\n";
  out << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
  for (double d = lx0; d <= lx1 + 1e-9; d += 1.0) {
    const double x = px(d);
    out << "<line x1=\"" << x << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << x << "\" y2=\""
        << kHeight - kBottom + 6 << "\" stroke=\"black\"/>";
    out << "<text x=\"" << x << "\" y=\"" << kHeight - kBottom + 20 << "\" text-anchor=\"middle\">1e"
        << static_cast<int>(d) << "</text>\n";
  }
  for (double d = ly0; d <= ly1 + 1e-9; d += 1.0) {
    const double y = py(d);
    out << "<line x1=\"" << kLeft - 6 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y
        << "\" stroke=\"black\"/>";
    out << "<text x=\"" << kLeft - 10 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">1e" << static_cast<int>(d)
        << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 20
      << "\" text-anchor=\"middle\">&#947; (measurement strength)</text>\n";
  out << "<text x=\"20\" y=\"" << (kTop + kHeight - kBottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
      << (kTop + kHeight - kBottom) / 2 << ")\">D (diffusion coefficient)</text>\n";
  out << "</g>\n";

  const double ln10 = std::log(10.0);
  const double fx0 = xmin, fx1 = xmax;
  out << "<line x1=\"" << px(fx0 / ln10) << "\" y1=\"" << py((fit.intercept + fit.slope * fx0) / ln10) << "\" x2=\""
      << px(fx1 / ln10) << "\" y2=\"" << py((fit.intercept + fit.slope * fx1) / ln10)
      << "\" stroke=\"steelblue\" stroke-width=\"2\"/>\n";
  for (const auto& e : estimates) {
    if (!(e.gamma > 0.0) || !(e.d_value > 0.0)) continue;
    out << "<circle cx=\"" << px(std::log10(e.gamma)) << "\" cy=\"" << py(std::log10(e.d_value))
        << "\" r=\"4\" fill=\"firebrick\"/>\n";
  }
  out << "<text x=\"" << kWidth - kRight << "\" y=\"" << kTop + 12
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">slope "
      << format_number(std::round(fit.slope * 1e4) / 1e4) << "</text>\n";
  out << "</svg>\n";
  return out.str();
}

std::string format_steady_summary(const SteadyTransport& result) {
  const DiffusionEstimate& e = result.estimate;
  std::ostringstream out;
  out << "engine: " << engine_name(e.engine) << '\n';
  out << "n_sites: " << e.n_sites << '\n';
  out << "gamma: " << format_number(e.gamma) << '\n';
  out << "densities:";
  for (Eigen::Index i = 0; i < result.observables.densities.size(); ++i) {
    out << ' ' << format_number(result.observables.densities[i]);
  }
  out << "\nbond_currents:";
  for (Eigen::Index i = 0; i < result.observables.bond_currents.size(); ++i) {
    out << ' ' << format_number(result.observables.bond_currents[i]);
  }
  out << "\nuniformity_spread: " << format_number(e.uniformity_spread) << '\n';
  out << "D: " << format_number(e.d_value) << '\n';
  out << "residual: " << format_number(e.residual) << '\n';
  return out.str();
}

}  // namespace mfc
