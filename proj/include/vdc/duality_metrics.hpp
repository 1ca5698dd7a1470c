// duality_metrics.hpp
// Closed-form visibility, distinguishability and concurrence of a two-path
// state, and the identity V^2 + D^2 + C^2 = 1 that ties them together.

#pragma once

#include "vdc/core_state.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>

namespace vdc {

struct PathProbabilities {
  double p_a = 0.0;
  double p_b = 0.0;
};

/// (V, D, C) with the signed residual V^2 + D^2 + C^2 - 1.
struct DualityTriple {
  double visibility = 0.0;
  double distinguishability = 0.0;
  double concurrence = 0.0;
  /// Overlap the triple was computed from; empty for estimates read off a
  /// density matrix.
  std::optional<Complex> gamma;
  double residual = 0.0;

  double radius_squared() const {
    return visibility * visibility + distinguishability * distinguishability +
           concurrence * concurrence;
  }
};

/// Bundles three measures and fills in the residual.
inline DualityTriple make_triple(double v, double d, double c,
                                 std::optional<Complex> gamma = std::nullopt) {
  DualityTriple t{v, d, c, gamma, 0.0};
  t.residual = t.radius_squared() - 1.0;
  return t;
}

inline PathProbabilities path_probabilities(const TwoPathState& s) {
  return {std::norm(s.c_a()), std::norm(s.c_b())};
}

namespace detail {
/// 2 |c_a c_b|, divided by |c_a|^2 + |c_b|^2 so that V, D and C see the same
/// round-off in the normalization.
inline double path_coherence(const TwoPathState& s) {
  return 2.0 * std::abs(s.c_a()) * std::abs(s.c_b()) / (std::norm(s.c_a()) + std::norm(s.c_b()));
}
}  // namespace detail

/// V = 2 |c_a c_b gamma|.
inline double visibility(const TwoPathState& s) {
  return std::min(1.0, detail::path_coherence(s) * std::abs(overlap(s)));
}

/// D = sqrt(1 - 4 |c_a c_b|^2), evaluated as ||c_a|^2 - |c_b|^2| (equal for
/// normalized amplitudes). The square-root form loses half the digits near
/// balance: 1/sqrt(2) amplitudes give 2e-8 instead of 0.
inline double distinguishability(const TwoPathState& s) {
  const double pa = std::norm(s.c_a());
  const double pb = std::norm(s.c_b());
  return std::abs(pa - pb) / (pa + pb);
}

/// D = |p_a - p_b|, the which-way definition.
inline double distinguishability_from_paths(const TwoPathState& s) {
  const PathProbabilities p = path_probabilities(s);
  return std::abs(p.p_a - p.p_b);
}

/// C = 2 |c_a c_b| sqrt(1 - |gamma|^2).
inline double entanglement(const TwoPathState& s) {
  const double g = std::abs(overlap(s));
  return std::min(1.0, detail::path_coherence(s) * std::sqrt(std::max(0.0, 1.0 - g * g)));
}

inline DualityTriple vdc_triple(const TwoPathState& s) {
  return make_triple(visibility(s), distinguishability(s), entanglement(s), overlap(s));
}

}  // namespace vdc
