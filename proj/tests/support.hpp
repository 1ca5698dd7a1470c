// Random-state generators and brute-force oracles shared by the test files.
// The oracles use plain loops over std::complex and closed forms, never the
// library's Eigen-based code paths.

#pragma once

#include "vdc/core_state.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace vdc::test {

using cd = std::complex<double>;

inline ComplexVector random_unit(std::mt19937_64& gen, std::size_t d) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexVector v(static_cast<Eigen::Index>(d));
  for (auto& x : v) x = {n(gen), n(gen)};
  return v / v.norm();
}

/// Haar-ish pure two-path state: Gaussian amplitudes, Gaussian internal
/// vectors of dimension d.
inline TwoPathState random_state(std::mt19937_64& gen, std::size_t d = 2) {
  const ComplexVector c = random_unit(gen, 2);
  return TwoPathState(c(0), c(1), InternalState(random_unit(gen, d)), InternalState(random_unit(gen, d)));
}

inline TwoPathState make_state(cd c_a, cd c_b, std::vector<cd> a, std::vector<cd> b) {
  const auto vec = [](const std::vector<cd>& x) {
    ComplexVector v(static_cast<Eigen::Index>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) v(static_cast<Eigen::Index>(i)) = x[i];
    return v;
  };
  return TwoPathState(c_a, c_b, InternalState(vec(a)), InternalState(vec(b)));
}

// ---- oracles --------------------------------------------------------------

inline cd overlap_oracle(const TwoPathState& s) {
  cd acc = 0.0;
  for (std::size_t i = 0; i < s.internal_dim(); ++i) acc += std::conj(s.phi_a()[i]) * s.phi_b()[i];
  return acc;
}

/// Schmidt coefficients from the 2 x 2 Gram matrix G = M M^dagger:
/// lambda^2 = (1 +- sqrt(1 - 4 det G)) / 2.
inline std::array<double, 2> schmidt_oracle(const TwoPathState& s) {
  const double pa = std::norm(s.c_a());
  const double pb = std::norm(s.c_b());
  const double det = pa * pb * (1.0 - std::norm(overlap_oracle(s)));
  const double root = std::sqrt(std::max(0.0, 1.0 - 4.0 * det));
  return {std::sqrt((1.0 + root) / 2.0), std::sqrt(std::max(0.0, (1.0 - root) / 2.0))};
}

/// Pure two-qubit concurrence |<psi| Y(x)Y |psi*>| = 2 |psi_00 psi_11 - psi_01 psi_10|.
inline double pure_concurrence_oracle(const TwoPathState& s) {
  const cd p00 = s.c_a() * s.phi_a()[0];
  const cd p01 = s.c_a() * s.phi_a()[1];
  const cd p10 = s.c_b() * s.phi_b()[0];
  const cd p11 = s.c_b() * s.phi_b()[1];
  return 2.0 * std::abs(p00 * p11 - p01 * p10);
}

/// 2x2 Pauli matrices written out by hand.
inline std::array<std::array<cd, 4>, 4> pauli_table() {
  const cd i{0.0, 1.0};
  return {{{1.0, 0.0, 0.0, 1.0}, {0.0, 1.0, 1.0, 0.0}, {0.0, -i, i, 0.0}, {1.0, 0.0, 0.0, -1.0}}};
}

/// <psi| P_a (x) P_b |psi> by explicit summation over the 16 index pairs.
inline double pauli_expectation_oracle(const TwoPathState& s, int path_op, int internal_op) {
  const auto t = pauli_table();
  const auto& pa = t[static_cast<std::size_t>(path_op)];
  const auto& pb = t[static_cast<std::size_t>(internal_op)];
  cd psi[2][2];
  for (int j = 0; j < 2; ++j) {
    psi[0][j] = s.c_a() * s.phi_a()[static_cast<std::size_t>(j)];
    psi[1][j] = s.c_b() * s.phi_b()[static_cast<std::size_t>(j)];
  }
  cd acc = 0.0;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      for (int u = 0; u < 2; ++u)
        for (int v = 0; v < 2; ++v)
          acc += std::conj(psi[r][u]) * pa[static_cast<std::size_t>(2 * r + c)] *
                 pb[static_cast<std::size_t>(2 * u + v)] * psi[c][v];
  return acc.real();
}

/// Port-1 fringe 1/2 (1 + V cos(phi + theta0)) with theta0 = arg(c_a c_b* gamma*).
inline double fringe_oracle(const TwoPathState& s, double phi) {
  const cd g = overlap_oracle(s);
  const cd z = s.c_a() * std::conj(s.c_b()) * std::conj(g);
  return 0.5 * (1.0 + 2.0 * std::abs(z) * std::cos(phi + std::arg(z)));
}

}  // namespace vdc::test
