// report.hpp
// CSV / JSON emitters for the command-line stages.

#pragma once

#include "vdc/duality_metrics.hpp"
#include "vdc/interferometer.hpp"
#include "vdc/pipeline.hpp"
#include "vdc/scenario.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace vdc {

enum class ReportFormat { csv, json };

inline ReportFormat parse_format(std::string_view s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "json") return ReportFormat::json;
  throw ValidationError("unknown format '" + std::string(s) + "' (expected csv or json)");
}

/// The exact column order of the experiment CSV.
inline constexpr std::array<std::string_view, 11> kReportColumns{
    "name",  "V_analytic", "D_analytic", "C_analytic", "V_est",   "D_est",
    "C_est", "residual_analytic", "residual_est", "fidelity", "seed"};

namespace detail {

/// 12 significant digits, locale independent.
inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline nlohmann::json real(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

inline nlohmann::json triple_json(const DualityTriple& t) {
  nlohmann::json j{{"V", real(t.visibility)},
                   {"D", real(t.distinguishability)},
                   {"C", real(t.concurrence)},
                   {"residual", real(t.residual)}};
  j["gamma"] = t.gamma ? nlohmann::json::array({t.gamma->real(), t.gamma->imag()}) : nlohmann::json(nullptr);
  return j;
}

inline void write_json(std::ostream& out, const nlohmann::json& j) { out << j.dump(2) << '\n'; }

}  // namespace detail

inline nlohmann::json to_json(const RunReport& r) {
  const SpherePoint sp = sphere_points(std::span<const RunReport>(&r, 1))[0];
  return {{"name", r.name},
          {"illustrative", r.illustrative},
          {"seed", r.seed},
          {"shots", r.shots},
          {"phase_points", r.phase_points},
          {"analytic", detail::triple_json(r.analytic)},
          {"estimated", detail::triple_json(r.estimated)},
          {"tomographic", detail::triple_json(r.tomographic)},
          {"residual_analytic", detail::real(r.residual_analytic())},
          {"residual_est", detail::real(r.residual_est())},
          {"sphere_point", {detail::real(sp.x), detail::real(sp.y), detail::real(sp.z)}},
          {"diagnostics",
           {{"fit_rmse", detail::real(r.diagnostics.fit_rmse)},
            {"fit_theta0", detail::real(r.diagnostics.fit_theta0)},
            {"counts_block_a", r.diagnostics.counts_block_a},
            {"counts_block_b", r.diagnostics.counts_block_b},
            {"mle_iterations", r.diagnostics.mle_iterations},
            {"mle_converged", r.diagnostics.mle_converged},
            {"mle_log_likelihood", detail::real(r.diagnostics.mle_log_likelihood)},
            {"fidelity", detail::real(r.diagnostics.fidelity)}}}};
}

/// Experiment report. CSV has a header plus one row per report.
inline void emit_report(std::span<const RunReport> reports, ReportFormat format, std::ostream& out) {
  if (reports.empty()) throw ValidationError("emit_report needs at least one report");
  if (format == ReportFormat::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const RunReport& r : reports) arr.push_back(to_json(r));
    detail::write_json(out, {{"reports", arr}});
    return;
  }
  for (std::size_t i = 0; i < kReportColumns.size(); ++i) out << (i ? "," : "") << kReportColumns[i];
  out << '\n';
  using detail::format_real;
  for (const RunReport& r : reports) {
    out << detail::csv_field(r.name) << ',' << format_real(r.analytic.visibility) << ','
        << format_real(r.analytic.distinguishability) << ',' << format_real(r.analytic.concurrence) << ','
        << format_real(r.estimated.visibility) << ',' << format_real(r.estimated.distinguishability) << ','
        << format_real(r.estimated.concurrence) << ',' << format_real(r.residual_analytic()) << ','
        << format_real(r.residual_est()) << ',' << format_real(r.diagnostics.fidelity) << ',' << r.seed
        << '\n';
  }
}

/// Closed-form triples only (no sampling).
inline void emit_analytic(std::span<const Scenario> scenarios, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Scenario& sc : scenarios) {
      arr.push_back({{"name", sc.name}, {"analytic", detail::triple_json(vdc_triple(sc.state()))}});
    }
    detail::write_json(out, {{"scenarios", arr}});
    return;
  }
  using detail::format_real;
  out << "name,V,D,C,gamma_re,gamma_im,residual\n";
  for (const Scenario& sc : scenarios) {
    const DualityTriple t = vdc_triple(sc.state());
    out << detail::csv_field(sc.name) << ',' << format_real(t.visibility) << ','
        << format_real(t.distinguishability) << ',' << format_real(t.concurrence) << ','
        << format_real(t.gamma->real()) << ',' << format_real(t.gamma->imag()) << ','
        << format_real(t.residual) << '\n';
  }
}

/// Exact and shot-noise fringe data per scenario, on the scenario's uniform
/// phase grid. The noisy column is the same scan the experiment pipeline uses.
inline void emit_fringes(std::span<const Scenario> scenarios, ReportFormat format, std::ostream& out) {
  using detail::format_real;
  nlohmann::json arr = nlohmann::json::array();
  if (format == ReportFormat::csv) out << "name,phi,p_exact,p_measured\n";
  for (const Scenario& sc : scenarios) {
    validate(sc);
    const TwoPathState s = sc.state();
    const auto grid = uniform_phase_grid(sc.phase_points);
    const FringeScan exact = fringe_scan(s, grid);
    const FringeScan noisy = sample_fringe_scan(s, grid, sc.shots, derive_seed(sc.seed, kFringeStream));
    if (format == ReportFormat::csv) {
      for (std::size_t k = 0; k < grid.size(); ++k) {
        out << detail::csv_field(sc.name) << ',' << format_real(grid[k].phi) << ','
            << format_real(exact.points[k].p) << ',' << format_real(noisy.points[k].p) << '\n';
      }
      continue;
    }
    nlohmann::json phi = nlohmann::json::array(), pe = nlohmann::json::array(), pm = nlohmann::json::array();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      phi.push_back(grid[k].phi);
      pe.push_back(exact.points[k].p);
      pm.push_back(noisy.points[k].p);
    }
    const FringeFit fit = extract_visibility(noisy);
    arr.push_back({{"name", sc.name},
                   {"shots_per_point", sc.shots},
                   {"phi", phi},
                   {"p_exact", pe},
                   {"p_measured", pm},
                   {"V_fit", fit.visibility_raw},
                   {"theta0_fit", fit.theta0}});
  }
  if (format == ReportFormat::json) detail::write_json(out, {{"fringes", arr}});
}

/// Unit-sphere coordinates: clamped estimates next to the analytic point.
inline void emit_sphere(std::span<const RunReport> reports, ReportFormat format, std::ostream& out) {
  const auto est = sphere_points(reports, SphereSource::estimated);
  const auto ana = sphere_points(reports, SphereSource::analytic);
  using detail::format_real;
  if (format == ReportFormat::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
      arr.push_back({{"name", reports[i].name},
                     {"estimated", {est[i].x, est[i].y, est[i].z}},
                     {"analytic", {ana[i].x, ana[i].y, ana[i].z}},
                     {"radius_est", est[i].radius()}});
    }
    detail::write_json(out, {{"points", arr}});
    return;
  }
  out << "name,x,y,z,x_analytic,y_analytic,z_analytic,radius_est\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    out << detail::csv_field(reports[i].name) << ',' << format_real(est[i].x) << ',' << format_real(est[i].y)
        << ',' << format_real(est[i].z) << ',' << format_real(ana[i].x) << ',' << format_real(ana[i].y) << ','
        << format_real(ana[i].z) << ',' << format_real(est[i].radius()) << '\n';
  }
}

/// Writes `text` to `path`, or to standard output for "" or "-".
inline void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text << std::flush;
    if (!std::cout) throw IoError("error writing to standard output");
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file '" + path + "'");
  f << text;
  f.close();
  if (!f) throw IoError("error writing output file '" + path + "'");
}

}  // namespace vdc
