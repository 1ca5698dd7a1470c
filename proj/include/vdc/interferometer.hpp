// interferometer.hpp
// Ideal Mach-Zehnder interferometer acting on a TwoPathState.
//
// Arm A picks up the relative phase phi before a lossless 50/50 recombiner.
// The first output port sees (e^{i phi} c_a phi_a + c_b phi_b) / sqrt(2), the
// second (e^{i phi} c_a phi_a - c_b phi_b) / sqrt(2), so
//
//   p_first(phi) = 1/2 (1 + V cos(phi + theta0)),
//   theta0       = arg(c_a conj(c_b) conj(gamma)).
//
// Detectors are ideal (unit efficiency, no dark counts). Arm blocking is a
// which-way measurement: with one arm blocked the detector behind the
// recombiner sums both ports and counts the surviving path probability.

#pragma once

#include "vdc/core_state.hpp"
#include "vdc/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace vdc {

/// Relative propagation phase between the arms, in radians.
struct PhaseSetting {
  double phi = 0.0;

  /// phi folded into [0, 2 pi), for reporting.
  double reduced() const {
    const double r = std::fmod(phi, 2.0 * std::numbers::pi);
    return r < 0.0 ? r + 2.0 * std::numbers::pi : r;
  }
};

enum class OutputPort { first, second };

inline double detection_probability(const TwoPathState& s, PhaseSetting phase,
                                    OutputPort port = OutputPort::first) {
  if (!std::isfinite(phase.phi)) throw ValidationError("phase must be finite");
  const double sign = port == OutputPort::first ? 1.0 : -1.0;
  const ComplexVector field = std::polar(1.0, phase.phi) * s.c_a() * s.phi_a().amplitudes() +
                              sign * s.c_b() * s.phi_b().amplitudes();
  return std::clamp(0.5 * field.squaredNorm(), 0.0, 1.0);
}

/// n equally spaced phases offset + 2 pi k / n, k = 0..n-1.
inline std::vector<PhaseSetting> uniform_phase_grid(std::size_t n = 64, double offset = 0.0) {
  std::vector<PhaseSetting> grid(n);
  for (std::size_t k = 0; k < n; ++k) {
    grid[k].phi = offset + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  }
  return grid;
}

struct FringePoint {
  PhaseSetting phase;
  double p = 0.0;
};

struct FringeScan {
  std::vector<FringePoint> points;
  bool noisy = false;
  /// Shots per phase point; 0 for exact scans.
  std::uint64_t shots_per_point = 0;
};

inline constexpr std::size_t kMinFringePoints = 8;

/// Throws unless the scan has >= 8 strictly increasing phases with p in [0, 1].
inline void validate(const FringeScan& scan) {
  if (scan.points.size() < kMinFringePoints) {
    throw ValidationError("fringe scan needs at least " + std::to_string(kMinFringePoints) +
                          " points, got " + std::to_string(scan.points.size()));
  }
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const FringePoint& pt = scan.points[i];
    if (!std::isfinite(pt.phase.phi)) throw ValidationError("fringe scan has a non-finite phase");
    if (!(pt.p >= 0.0 && pt.p <= 1.0)) {
      throw ValidationError("fringe probability out of [0, 1] at point " + std::to_string(i));
    }
    if (i > 0 && !(pt.phase.phi > scan.points[i - 1].phase.phi)) {
      throw ValidationError("fringe phases must be strictly increasing (point " +
                            std::to_string(i) + ")");
    }
  }
}

namespace detail {
inline void validate_grid(std::span<const PhaseSetting> grid) {
  if (grid.size() < kMinFringePoints) {
    throw ValidationError("phase grid needs at least " + std::to_string(kMinFringePoints) +
                          " points, got " + std::to_string(grid.size()));
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i].phi > grid[i - 1].phi)) {
      throw ValidationError("phase grid must be strictly increasing");
    }
  }
}
}  // namespace detail

/// Exact first-port probabilities over `grid`.
inline FringeScan fringe_scan(const TwoPathState& s, std::span<const PhaseSetting> grid) {
  detail::validate_grid(grid);
  FringeScan scan;
  scan.points.reserve(grid.size());
  for (const PhaseSetting& ph : grid) scan.points.push_back({ph, detection_probability(s, ph)});
  return scan;
}

/// Shot-noise fringe scan: `shots` photons per phase point, each detected at
/// the first port with the exact probability. Point k draws from the
/// sub-stream derive_seed(seed, 0, k), so the result does not depend on
/// evaluation order.
inline FringeScan sample_fringe_scan(const TwoPathState& s, std::span<const PhaseSetting> grid,
                                     std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw ValidationError("noisy fringe scan needs shots >= 1");
  FringeScan scan = fringe_scan(s, grid);
  for (std::size_t k = 0; k < scan.points.size(); ++k) {
    Rng rng(derive_seed(seed, 0, k));
    const std::uint64_t hits = rng.binomial(shots, scan.points[k].p);
    scan.points[k].p = static_cast<double>(hits) / static_cast<double>(shots);
  }
  scan.noisy = true;
  scan.shots_per_point = shots;
  return scan;
}

/// Least-squares fit p(phi) = A + B cos(phi + theta).
struct FringeFit {
  /// B / A clamped to [0, 1].
  double visibility = 0.0;
  /// B / A before clamping; what the estimator actually saw.
  double visibility_raw = 0.0;
  double theta0 = 0.0;
  double mean = 0.0;       // A
  double amplitude = 0.0;  // B >= 0
  double rmse = 0.0;
};

/// Fits {1, cos phi, sin phi} by linear least squares. Requires >= 8 points
/// spanning at least 7/8 of a period; a scan with A ~ 0 has no defined
/// visibility and is rejected.
inline FringeFit extract_visibility(const FringeScan& scan) {
  validate(scan);
  const double span = scan.points.back().phase.phi - scan.points.front().phase.phi;
  if (span < 2.0 * std::numbers::pi * 7.0 / 8.0 - 1e-12) {
    throw ValidationError("fringe scan spans " + std::to_string(span) +
                          " rad, needs at least 7/8 of a period");
  }
  const auto n = static_cast<Eigen::Index>(scan.points.size());
  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double phi = scan.points[static_cast<std::size_t>(i)].phase.phi;
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(phi);
    design(i, 2) = std::sin(phi);
    y(i) = scan.points[static_cast<std::size_t>(i)].p;
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(y);

  FringeFit fit;
  fit.mean = coef(0);
  if (!(fit.mean > 1e-12)) throw ValidationError("fringe scan is degenerate (mean level ~ 0)");
  // B cos(phi + theta) = B cos(theta) cos(phi) - B sin(theta) sin(phi)
  fit.amplitude = std::hypot(coef(1), coef(2));
  fit.theta0 = std::atan2(-coef(2), coef(1));
  fit.visibility_raw = fit.amplitude / fit.mean;
  fit.visibility = std::clamp(fit.visibility_raw, 0.0, 1.0);
  fit.rmse = std::sqrt((design * coef - y).squaredNorm() / static_cast<double>(n));
  return fit;
}

/// Detection probability with arm `blocked` obstructed: the surviving path's
/// probability.
inline double block_arm(const TwoPathState& s, PathLabel blocked) {
  return std::norm(s.amplitude(other(blocked)));
}

/// Photons detected out of `shots` with arm `blocked` obstructed.
inline std::uint64_t sample_block_arm(const TwoPathState& s, PathLabel blocked,
                                      std::uint64_t shots, std::uint64_t seed) {
  Rng rng(seed);
  return rng.binomial(shots, block_arm(s, blocked));
}

/// Unitary acting on the internal state of one arm.
class ArmUnitary {
 public:
  ArmUnitary(ComplexMatrix matrix, PathLabel arm) : matrix_(std::move(matrix)), arm_(arm) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2) {
      throw ValidationError("arm unitary must be square with dimension >= 2");
    }
    const auto d = matrix_.rows();
    const double dev = (matrix_.adjoint() * matrix_ - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (!(dev <= 1e-10)) {
      throw ValidationError("arm matrix is not unitary (max deviation " + std::to_string(dev) + ")");
    }
  }

  /// Real rotation by `angle` in the plane of internal basis states 0 and 1.
  static ArmUnitary rotation(double angle, PathLabel arm, std::size_t dim = 2) {
    ComplexMatrix m = ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m(0, 0) = std::cos(angle);
    m(0, 1) = -std::sin(angle);
    m(1, 0) = std::sin(angle);
    m(1, 1) = std::cos(angle);
    return ArmUnitary(std::move(m), arm);
  }

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  PathLabel arm() const noexcept { return arm_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }

 private:
  ComplexMatrix matrix_;
  PathLabel arm_;
};

/// Rotates one arm's internal state; path amplitudes (and hence D) are untouched.
inline TwoPathState apply_arm_unitary(const TwoPathState& s, const ArmUnitary& u) {
  if (u.dim() != s.internal_dim()) {
    throw ValidationError("arm unitary dimension " + std::to_string(u.dim()) +
                          " does not match internal dimension " + std::to_string(s.internal_dim()));
  }
  const InternalState& target = s.internal(u.arm());
  ComplexVector rotated = u.matrix() * target.amplitudes();
  rotated.normalize();  // strips round-off only; u is unitary
  InternalState moved(std::move(rotated));
  return u.arm() == PathLabel::A ? TwoPathState(s.c_a(), s.c_b(), std::move(moved), s.phi_b())
                                 : TwoPathState(s.c_a(), s.c_b(), s.phi_a(), std::move(moved));
}

}  // namespace vdc
