// pipeline.hpp
// End-to-end simulated experiment for one scenario: analytic triple, noisy
// fringe scan -> V, arm blocking -> D, fifteen-setting tomography + MLE -> C.

#pragma once

#include "vdc/core_state.hpp"
#include "vdc/duality_metrics.hpp"
#include "vdc/interferometer.hpp"
#include "vdc/random.hpp"
#include "vdc/scenario.hpp"
#include "vdc/tomography.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace vdc {

// Sub-stream tags mixed into the scenario seed.
inline constexpr std::uint64_t kFringeStream = 1;
inline constexpr std::uint64_t kBlockingStream = 2;
inline constexpr std::uint64_t kTomographyStream = 3;

struct RunDiagnostics {
  double fit_rmse = 0.0;
  double fit_theta0 = 0.0;
  std::uint64_t counts_block_a = 0;  // detections with arm A blocked
  std::uint64_t counts_block_b = 0;  // detections with arm B blocked
  int mle_iterations = 0;
  bool mle_converged = false;
  double mle_log_likelihood = 0.0;
  /// Fidelity of the MLE state to the true state.
  double fidelity = 0.0;
};

struct RunReport {
  std::string name;
  bool illustrative = false;
  std::uint64_t seed = 0;
  std::uint64_t shots = 0;
  std::size_t phase_points = 0;
  DualityTriple analytic;
  /// Fringe V, blocking D, tomographic C. Not clamped.
  DualityTriple estimated;
  /// All three read off the MLE density matrix.
  DualityTriple tomographic;
  RunDiagnostics diagnostics;

  double residual_analytic() const { return analytic.residual; }
  double residual_est() const { return estimated.residual; }
};

inline RunReport run_pipeline(const Scenario& sc, const MleOptions& mle = {}) {
  try {
    validate(sc);
    const TwoPathState state = sc.state();

    RunReport rep;
    rep.name = sc.name;
    rep.illustrative = sc.illustrative;
    rep.seed = sc.seed;
    rep.shots = sc.shots;
    rep.phase_points = sc.phase_points;
    rep.analytic = vdc_triple(state);

    const auto grid = uniform_phase_grid(sc.phase_points);
    const FringeScan scan = sample_fringe_scan(state, grid, sc.shots, derive_seed(sc.seed, kFringeStream));
    const FringeFit fit = extract_visibility(scan);

    const std::uint64_t with_a_blocked =
        sample_block_arm(state, PathLabel::A, sc.shots, derive_seed(sc.seed, kBlockingStream, 0));
    const std::uint64_t with_b_blocked =
        sample_block_arm(state, PathLabel::B, sc.shots, derive_seed(sc.seed, kBlockingStream, 1));
    const double n = static_cast<double>(sc.shots);
    const double p_a_hat = static_cast<double>(with_b_blocked) / n;
    const double p_b_hat = static_cast<double>(with_a_blocked) / n;

    const DensityMatrix truth = to_density_matrix(state);
    const auto records = sample_tomography(truth, sc.shots, derive_seed(sc.seed, kTomographyStream));
    const TomographyResult tomo = mle_reconstruct(std::span<const CountRecord>(records), mle);
    rep.tomographic = estimate_vdc_from_rho(tomo.rho_hat);

    rep.estimated = make_triple(fit.visibility_raw, std::abs(p_a_hat - p_b_hat), rep.tomographic.concurrence);

    rep.diagnostics.fit_rmse = fit.rmse;
    rep.diagnostics.fit_theta0 = fit.theta0;
    rep.diagnostics.counts_block_a = with_a_blocked;
    rep.diagnostics.counts_block_b = with_b_blocked;
    rep.diagnostics.mle_iterations = tomo.iterations;
    rep.diagnostics.mle_converged = tomo.converged;
    rep.diagnostics.mle_log_likelihood = tomo.log_likelihood;
    rep.diagnostics.fidelity = fidelity(truth, tomo.rho_hat);
    return rep;
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    if (msg.rfind("scenario '", 0) == 0) throw;
    throw ValidationError("scenario '" + sc.name + "': " + msg);
  }
}

/// Runs every scenario, optionally on `jobs` worker threads. The output order
/// follows the input order and each report is identical to a sequential run.
inline std::vector<RunReport> run_all(std::span<const Scenario> scenarios, unsigned jobs = 1,
                                      const MleOptions& mle = {}) {
  std::vector<std::optional<RunReport>> slots(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      try {
        slots[i] = run_pipeline(scenarios[i], mle);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n_threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(scenarios.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  std::vector<RunReport> out;
  out.reserve(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

/// Where a sphere point comes from.
enum class SphereSource { estimated, analytic };

struct SpherePoint {
  double x = 0.0;  // V
  double y = 0.0;  // D
  double z = 0.0;  // C
  double radius() const { return std::sqrt(x * x + y * y + z * z); }
};

/// (V, D, C) per report. Estimated coordinates are clamped into [0, 1] so
/// every point lies in the first octant.
inline std::vector<SpherePoint> sphere_points(std::span<const RunReport> reports,
                                              SphereSource source = SphereSource::estimated) {
  std::vector<SpherePoint> out;
  out.reserve(reports.size());
  for (const RunReport& r : reports) {
    const DualityTriple& t = source == SphereSource::analytic ? r.analytic : r.estimated;
    out.push_back({std::clamp(t.visibility, 0.0, 1.0), std::clamp(t.distinguishability, 0.0, 1.0),
                   std::clamp(t.concurrence, 0.0, 1.0)});
  }
  return out;
}

}  // namespace vdc
