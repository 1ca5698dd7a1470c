// random.hpp
// Seedable, portable random source used by every sampling routine.
//
// The engine is xoshiro256** (Blackman & Vigna, 2018) with its 256-bit state
// filled from the seed by four SplitMix64 steps, the seeding procedure its
// authors recommend. Standard-library distributions are
// implementation-defined, so uniforms and categorical draws are derived here
// directly from the raw 64-bit words:
//
//   uniform()   = (word >> 11) * 2^-53           in [0, 1)
//   bernoulli   = uniform() < p
//   categorical = first k with uniform() < cumsum(p)[k]
//
// The comparisons are evaluated on the 53-bit integer (word >> 11) against
// ceil(threshold * 2^53), which is exactly equivalent and avoids the
// floating-point conversion in hot loops.
//
// Sub-streams are derived with SplitMix64 so that independent tasks
// (phase points, arms, tomography settings) get decorrelated seeds that do
// not depend on execution order.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>

namespace vdc {

/// One SplitMix64 output step applied to `x`.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for sub-stream (`stream`, `index`) of `master`.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                    std::uint64_t index = 0) noexcept {
  return splitmix64(splitmix64(splitmix64(master) ^ stream) ^ index);
}

/// xoshiro256**; satisfies UniformRandomBitGenerator.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256StarStar(std::uint64_t seed) noexcept {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      word = splitmix64(x);
      x += 0x9E3779B97F4A7C15ULL;
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return (engine_() >> 11) < threshold(p); }

  /// Index drawn from `probs` (need not sum exactly to one; the last
  /// category with nonzero weight absorbs rounding slack).
  std::size_t categorical(std::span<const double> probs) {
    const std::size_t last = last_nonzero(probs);
    const double u = uniform();
    double acc = 0.0;
    for (std::size_t k = 0; k < last; ++k) {
      acc += probs[k];
      if (u < acc) return k;
    }
    return last;
  }

  /// Number of successes in `trials` Bernoulli(p) draws.
  std::uint64_t binomial(std::uint64_t trials, double p) {
    const std::uint64_t t = threshold(p);
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < trials; ++i) hits += (engine_() >> 11) < t ? 1 : 0;
    return hits;
  }

  template <std::size_t N>
  std::array<std::uint64_t, N> multinomial(std::uint64_t trials,
                                           const std::array<double, N>& probs) {
    std::array<std::uint64_t, N> cumulative{};
    double acc = 0.0;
    for (std::size_t k = 0; k < N; ++k) cumulative[k] = threshold(acc += probs[k]);
    const std::size_t last = last_nonzero(std::span<const double>(probs));
    std::array<std::uint64_t, N> counts{};
    for (std::uint64_t i = 0; i < trials; ++i) {
      const std::uint64_t u = engine_() >> 11;
      std::size_t k = 0;
      for (std::size_t j = 0; j < last; ++j) k += u >= cumulative[j] ? 1 : 0;
      ++counts[k];
    }
    return counts;
  }

 private:
  /// Smallest integer t with (k < t) <=> (k * 2^-53 < p) for 53-bit k.
  static std::uint64_t threshold(double p) {
    if (!(p > 0.0)) return 0;
    if (p >= 1.0) return std::uint64_t{1} << 53;
    return static_cast<std::uint64_t>(std::ceil(std::ldexp(p, 53)));
  }

  static std::size_t last_nonzero(std::span<const double> probs) {
    std::size_t last = probs.empty() ? 0 : probs.size() - 1;
    while (last > 0 && !(probs[last] > 0.0)) --last;
    return last;
  }

  Xoshiro256StarStar engine_;
};

}  // namespace vdc
