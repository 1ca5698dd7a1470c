// tomography.hpp
// Pauli-basis tomography of the path (x) polarization two-qubit state.
//
// A setting measures the commuting pair sigma_path (x) sigma_internal by
// projecting onto joint eigenspaces. Outcome index k = 2 * [s = -1] + [t = -1]
// for eigenvalues (s, t); identity factors always report +1.

#pragma once

#include "vdc/core_state.hpp"
#include "vdc/duality_metrics.hpp"
#include "vdc/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vdc {

enum class Pauli { I = 0, X = 1, Y = 2, Z = 3 };

constexpr char to_char(Pauli p) noexcept { return "IXYZ"[static_cast<int>(p)]; }

inline Eigen::Matrix2cd pauli_matrix(Pauli p) {
  using namespace std::complex_literals;
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1.0, 0.0, 0.0, 1.0; break;
    case Pauli::X: m << 0.0, 1.0, 1.0, 0.0; break;
    case Pauli::Y: m << 0.0, -1i, 1i, 0.0; break;
    case Pauli::Z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

inline Eigen::Matrix4cd kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

struct MeasurementSetting {
  Pauli path_op = Pauli::I;
  Pauli internal_op = Pauli::I;

  /// 4 * path + internal, in 0..15.
  constexpr int code() const noexcept {
    return 4 * static_cast<int>(path_op) + static_cast<int>(internal_op);
  }
  constexpr bool trivial() const noexcept { return code() == 0; }
  std::string label() const { return {to_char(path_op), to_char(internal_op)}; }
  friend constexpr bool operator==(MeasurementSetting, MeasurementSetting) = default;
};

inline constexpr std::size_t kTomographySettings = 15;

/// The fifteen non-trivial settings, ordered by code() (IX, IY, ..., ZZ).
inline std::array<MeasurementSetting, kTomographySettings> all_settings() {
  std::array<MeasurementSetting, kTomographySettings> out{};
  for (int c = 1; c < 16; ++c) {
    out[static_cast<std::size_t>(c - 1)] = {static_cast<Pauli>(c / 4), static_cast<Pauli>(c % 4)};
  }
  return out;
}

constexpr int outcome_index(int s, int t) noexcept { return 2 * (s < 0 ? 1 : 0) + (t < 0 ? 1 : 0); }
constexpr int outcome_path_sign(int k) noexcept { return k / 2 == 0 ? 1 : -1; }
constexpr int outcome_internal_sign(int k) noexcept { return k % 2 == 0 ? 1 : -1; }

namespace detail {
inline Eigen::Matrix2cd eigenprojector(Pauli p, int sign) {
  if (p == Pauli::I) {
    return sign > 0 ? Eigen::Matrix2cd(Eigen::Matrix2cd::Identity()) : Eigen::Matrix2cd(Eigen::Matrix2cd::Zero());
  }
  return 0.5 * (Eigen::Matrix2cd::Identity() + static_cast<double>(sign) * pauli_matrix(p));
}

inline void require_two_qubits(const DensityMatrix& rho, const char* what) {
  if (rho.internal_dim() != 2) {
    throw ValidationError(std::string(what) + " requires d = 2, got d = " +
                          std::to_string(rho.internal_dim()));
  }
}
}  // namespace detail

/// Projector onto outcome k of setting m.
inline Eigen::Matrix4cd outcome_projector(MeasurementSetting m, int k) {
  return kron(detail::eigenprojector(m.path_op, outcome_path_sign(k)),
              detail::eigenprojector(m.internal_op, outcome_internal_sign(k)));
}

/// Tr(rho sigma_path (x) sigma_internal).
inline double pauli_expectation(const DensityMatrix& rho, MeasurementSetting m) {
  detail::require_two_qubits(rho, "pauli_expectation");
  const Eigen::Matrix4cd op = kron(pauli_matrix(m.path_op), pauli_matrix(m.internal_op));
  return (rho.matrix() * op).trace().real();
}

/// Exact outcome distribution of setting m (clamped at zero).
inline std::array<double, 4> outcome_probabilities(const DensityMatrix& rho, MeasurementSetting m) {
  detail::require_two_qubits(rho, "outcome_probabilities");
  std::array<double, 4> p{};
  for (int k = 0; k < 4; ++k) {
    p[static_cast<std::size_t>(k)] =
        std::max(0.0, (rho.matrix() * outcome_projector(m, k)).trace().real());
  }
  return p;
}

struct CountRecord {
  MeasurementSetting setting;
  /// Indexed by outcome_index(s, t).
  std::array<std::uint64_t, 4> counts{};
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;

  std::uint64_t count(int s, int t) const {
    return counts[static_cast<std::size_t>(outcome_index(s, t))];
  }

  /// Sample mean of the eigenvalue product s * t.
  double empirical_expectation() const {
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) {
      acc += outcome_path_sign(k) * outcome_internal_sign(k) *
             static_cast<double>(counts[static_cast<std::size_t>(k)]);
    }
    return acc / static_cast<double>(shots);
  }
};

/// Multinomial draw of `shots` joint outcomes; deterministic in `seed`.
inline CountRecord sample_counts(const DensityMatrix& rho, MeasurementSetting m,
                                 std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw ValidationError("sample_counts needs shots >= 1");
  Rng rng(seed);
  CountRecord rec;
  rec.setting = m;
  rec.counts = rng.multinomial(shots, outcome_probabilities(rho, m));
  rec.shots = shots;
  rec.seed = seed;
  return rec;
}

/// Records for all fifteen settings; setting i uses derive_seed(seed, 0, i).
inline std::vector<CountRecord> sample_tomography(const DensityMatrix& rho, std::uint64_t shots,
                                                  std::uint64_t seed) {
  std::vector<CountRecord> out;
  out.reserve(kTomographySettings);
  std::uint64_t i = 0;
  for (const MeasurementSetting& m : all_settings()) {
    out.push_back(sample_counts(rho, m, shots, derive_seed(seed, 0, i++)));
  }
  return out;
}

/// Outcome frequencies for one setting, weighted by the number of shots
/// behind them. Exact (infinite-shot) data uses weight 1.
struct SettingFrequencies {
  MeasurementSetting setting;
  std::array<double, 4> frequencies{};
  double weight = 1.0;
};

inline SettingFrequencies frequencies(const CountRecord& rec) {
  if (rec.shots == 0) throw ValidationError("count record " + rec.setting.label() + " has no shots");
  std::uint64_t total = 0;
  for (auto c : rec.counts) total += c;
  if (total != rec.shots) {
    throw ValidationError("count record " + rec.setting.label() + " counts do not sum to shots");
  }
  SettingFrequencies f{rec.setting, {}, static_cast<double>(rec.shots)};
  for (std::size_t k = 0; k < 4; ++k) {
    f.frequencies[k] = static_cast<double>(rec.counts[k]) / static_cast<double>(rec.shots);
  }
  return f;
}

inline std::vector<SettingFrequencies> frequencies(std::span<const CountRecord> records) {
  std::vector<SettingFrequencies> out;
  out.reserve(records.size());
  for (const CountRecord& r : records) out.push_back(frequencies(r));
  return out;
}

/// Infinite-shot data: the exact outcome distribution of every setting.
inline std::vector<SettingFrequencies> exact_frequencies(const DensityMatrix& rho) {
  std::vector<SettingFrequencies> out;
  out.reserve(kTomographySettings);
  for (const MeasurementSetting& m : all_settings()) {
    out.push_back({m, outcome_probabilities(rho, m), 1.0});
  }
  return out;
}

enum class TomographyMethod { linear_inversion, mle };

constexpr const char* to_string(TomographyMethod m) noexcept {
  return m == TomographyMethod::mle ? "mle" : "linear_inversion";
}

struct TomographyResult {
  DensityMatrix rho_hat;
  TomographyMethod method = TomographyMethod::linear_inversion;
  int iterations = 0;
  double log_likelihood = 0.0;
  bool converged = false;
  /// Log-likelihood after each accepted iteration (MLE only).
  std::vector<double> log_likelihood_trace;
};

namespace detail {

/// Data sorted by setting code; throws if a setting is missing or repeated.
inline std::array<const SettingFrequencies*, kTomographySettings> index_settings(
    std::span<const SettingFrequencies> data) {
  std::array<const SettingFrequencies*, kTomographySettings> slot{};
  for (const SettingFrequencies& f : data) {
    if (f.setting.trivial()) continue;
    auto& s = slot[static_cast<std::size_t>(f.setting.code() - 1)];
    if (s != nullptr) throw ValidationError("duplicate tomography setting " + f.setting.label());
    if (!(f.weight > 0.0)) throw ValidationError("setting " + f.setting.label() + " has no weight");
    s = &f;
  }
  std::string missing;
  for (std::size_t i = 0; i < kTomographySettings; ++i) {
    if (slot[i] == nullptr) {
      if (!missing.empty()) missing += ", ";
      missing += all_settings()[i].label();
    }
  }
  if (!missing.empty()) throw ValidationError("missing tomography settings: " + missing);
  return slot;
}

inline double empirical_expectation(const SettingFrequencies& f) {
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    acc += outcome_path_sign(k) * outcome_internal_sign(k) * f.frequencies[static_cast<std::size_t>(k)];
  }
  return acc;
}

}  // namespace detail

/// rho = 1/4 sum_ij <sigma_i (x) sigma_j> sigma_i (x) sigma_j with <I (x) I> = 1.
/// Hermitian with unit trace; not necessarily positive.
inline TomographyResult linear_inversion(std::span<const SettingFrequencies> data) {
  const auto slot = detail::index_settings(data);
  Eigen::Matrix4cd rho = 0.25 * Eigen::Matrix4cd::Identity();
  for (const SettingFrequencies* f : slot) {
    const Eigen::Matrix4cd op = kron(pauli_matrix(f->setting.path_op), pauli_matrix(f->setting.internal_op));
    rho += 0.25 * detail::empirical_expectation(*f) * op;
  }
  return TomographyResult{DensityMatrix(rho), TomographyMethod::linear_inversion, 0, 0.0, true, {}};
}

inline TomographyResult linear_inversion(std::span<const CountRecord> records) {
  const auto data = frequencies(records);
  return linear_inversion(std::span<const SettingFrequencies>(data));
}

struct MleOptions {
  int max_iter = 2000;
  /// Stop once an accepted step gains less log-likelihood than this.
  double tol = 1e-10;
};

namespace detail {

struct LikelihoodModel {
  std::array<Eigen::Matrix4cd, 4 * kTomographySettings> projector;
  std::array<double, 4 * kTomographySettings> observed{};  // weight * frequency
  double total_weight = 0.0;

  explicit LikelihoodModel(std::span<const SettingFrequencies> data) {
    const auto slot = index_settings(data);
    for (std::size_t s = 0; s < kTomographySettings; ++s) {
      const SettingFrequencies& f = *slot[s];
      total_weight += f.weight;
      for (int k = 0; k < 4; ++k) {
        const std::size_t idx = 4 * s + static_cast<std::size_t>(k);
        projector[idx] = outcome_projector(f.setting, k);
        observed[idx] = f.weight * f.frequencies[static_cast<std::size_t>(k)];
      }
    }
  }

  static double probability(const Eigen::Matrix4cd& rho, const Eigen::Matrix4cd& proj) {
    return (rho.cwiseProduct(proj.transpose())).sum().real();
  }

  /// sum_k n_k log p_k; -inf if an observed outcome has zero probability.
  double log_likelihood(const Eigen::Matrix4cd& rho) const {
    double ll = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
      if (observed[i] <= 0.0) continue;
      const double p = probability(rho, projector[i]);
      if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
      ll += observed[i] * std::log(p);
    }
    return ll;
  }

  /// R = sum_k (n_k / p_k) Pi_k / total weight; equals I at a fixed point.
  Eigen::Matrix4cd r_operator(const Eigen::Matrix4cd& rho) const {
    Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
    for (std::size_t i = 0; i < observed.size(); ++i) {
      if (observed[i] <= 0.0) continue;
      const double p = probability(rho, projector[i]);
      if (p > 0.0) r += (observed[i] / p) * projector[i];
    }
    return r / total_weight;
  }
};

inline Eigen::Matrix4cd sandwich(const Eigen::Matrix4cd& m, const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd out = m * rho * m.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return out / out.trace().real();
}

/// Ascent steps between truncation attempts, and the budget of each attempt.
inline constexpr int kPolishInterval = 100;

/// One run of the accelerated / diluted R rho R ascent.
struct Ascent {
  Eigen::Matrix4cd rho;
  double ll = 0.0;
  int steps = 0;
  std::vector<double> trace;

  /// Steps until the gain drops below tol (returns true) or the budget is
  /// spent (returns false).
  bool run(const LikelihoodModel& model, int budget, double tol) {
    const Eigen::Matrix4cd identity = Eigen::Matrix4cd::Identity();
    while (steps < budget) {
      const Eigen::Matrix4cd r = model.r_operator(rho);
      Eigen::Matrix4cd candidate = sandwich(r, rho);
      double cand_ll = model.log_likelihood(candidate);
      if (cand_ll > ll) {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(r);
        const Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
        for (double t = 2.0; t <= 1048576.0; t *= 2.0) {
          const Eigen::Matrix4cd rt = es.eigenvectors() * ev.array().pow(t).matrix().asDiagonal() *
                                      es.eigenvectors().adjoint();
          const Eigen::Matrix4cd trial = sandwich(rt, rho);
          const double trial_ll = model.log_likelihood(trial);
          if (!(trial_ll > cand_ll)) break;
          candidate = trial;
          cand_ll = trial_ll;
        }
      } else {
        for (double eps = 1.0; !(cand_ll >= ll) && eps > 1e-12; eps *= 0.5) {
          candidate = sandwich(identity + eps * r, rho);
          cand_ll = model.log_likelihood(candidate);
        }
      }
      if (!(cand_ll >= ll)) return true;  // no ascent direction left
      const double gain = cand_ll - ll;
      rho = candidate;
      ll = cand_ll;
      ++steps;
      trace.push_back(ll);
      if (gain < tol) return true;
    }
    return false;
  }
};

}  // namespace detail

/// Maximum-likelihood state via the R rho R fixed-point iteration, started
/// from the maximally mixed state.
///
/// Each iteration evaluates the plain step rho -> R rho R / Tr. If it raises
/// the likelihood, the exponent is doubled (R^t rho R^t, t = 2, 4, ...) for as
/// long as the likelihood keeps rising. If the plain step does not raise the
/// likelihood it is retried with the diluted map (I + eps R) / (1 + eps),
/// halving eps until it does.
///
/// Near a rank-deficient optimum the likelihood is flat to second order in
/// the spurious eigenvalues and the iteration crawls. So every 100 steps, and
/// whenever it stalls, the rank-r truncations (r = 1, 2, 3) of the iterate
/// are each ascended in a short scratch run; the best end point is taken only
/// if it beats the current likelihood, and the ascent resumes from it.
/// Scratch steps count towards max_iter, but log_likelihood_trace only
/// records accepted states, so it is non-decreasing.
///
/// Non-convergence is reported in the result, never thrown.
inline TomographyResult mle_reconstruct(std::span<const SettingFrequencies> data,
                                        const MleOptions& opts = {}) {
  const detail::LikelihoodModel model(data);
  detail::Ascent main{0.25 * Eigen::Matrix4cd::Identity(), 0.0, 0, {}};
  main.ll = model.log_likelihood(main.rho);

  bool converged = false;
  while (main.steps < opts.max_iter) {
    converged = main.run(model, std::min(opts.max_iter, main.steps + detail::kPolishInterval), opts.tol);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(main.rho);
    std::optional<detail::Ascent> best;
    bool best_done = false;
    for (int rank = 1; rank < 4 && main.steps < opts.max_iter; ++rank) {
      Eigen::Vector4d ev = es.eigenvalues().cwiseMax(0.0);
      ev.head(4 - rank).setZero();
      if (!(ev.sum() > 0.0)) continue;
      detail::Ascent trial{es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint(), 0.0, 0, {}};
      trial.rho /= trial.rho.trace().real();
      trial.ll = model.log_likelihood(trial.rho);
      const bool done =
          trial.run(model, std::min(opts.max_iter - main.steps, detail::kPolishInterval), opts.tol);
      main.steps += trial.steps;
      if (trial.ll > (best ? best->ll : main.ll)) {
        best = std::move(trial);
        best_done = done;
      }
    }
    if (best) {
      main.rho = best->rho;
      main.ll = best->ll;
      main.trace.push_back(main.ll);
      ++main.steps;
      converged = best_done;
    }
    if (converged) break;
  }

  TomographyResult result{DensityMatrix(main.rho), TomographyMethod::mle, main.steps, main.ll, converged,
                          std::move(main.trace)};
  return result;
}

inline TomographyResult mle_reconstruct(std::span<const CountRecord> records,
                                        const MleOptions& opts = {}) {
  const auto data = frequencies(records);
  return mle_reconstruct(std::span<const SettingFrequencies>(data), opts);
}

/// (V, D, C) read off a two-qubit density matrix:
///   D = |Tr rho_AA - Tr rho_BB|, V = 2 |Tr rho_AB|, C = Wootters concurrence.
/// The residual is reported as computed; mixed states need not sit on the
/// unit sphere.
inline DualityTriple estimate_vdc_from_rho(const DensityMatrix& rho) {
  detail::require_two_qubits(rho, "estimate_vdc_from_rho");
  if (!rho.is_physical(kWoottersClampTolerance)) {
    throw ValidationError("estimate_vdc_from_rho needs a physical density matrix (min eigenvalue " +
                          std::to_string(rho.min_eigenvalue()) + ")");
  }
  const double p_a = rho.block(PathLabel::A, PathLabel::A).trace().real();
  const double p_b = rho.block(PathLabel::B, PathLabel::B).trace().real();
  const double v = 2.0 * std::abs(rho.block(PathLabel::A, PathLabel::B).trace());
  return make_triple(v, std::abs(p_a - p_b), wootters_concurrence(rho));
}

}  // namespace vdc
