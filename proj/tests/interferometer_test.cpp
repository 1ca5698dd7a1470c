#include "vdc/interferometer.hpp"
#include "vdc/duality_metrics.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace vdc {
namespace {

using test::cd;
constexpr double kPi = std::numbers::pi;

TEST(Detection, WorkedExample) {
  const auto s = test::make_state(std::sqrt(0.7), std::sqrt(0.3), {1.0, 0.0}, {0.5, std::sqrt(0.75)});
  EXPECT_NEAR(detection_probability(s, {0.0}), test::fringe_oracle(s, 0.0), 1e-14);
  EXPECT_NEAR(detection_probability(s, {0.0}), 0.729128784747792, 1e-12);
  EXPECT_NEAR(detection_probability(s, {kPi}), 1.0 - 0.729128784747792, 1e-12);
}

TEST(Detection, PortsAreComplementaryAndMatchOracle) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> phase(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const auto s = test::random_state(gen, 2 + static_cast<std::size_t>(i % 2));
    const double phi = phase(gen);
    const double p1 = detection_probability(s, {phi}, OutputPort::first);
    const double p2 = detection_probability(s, {phi}, OutputPort::second);
    EXPECT_NEAR(p1 + p2, 1.0, 1e-12);
    EXPECT_NEAR(p1, test::fringe_oracle(s, phi), 1e-12);
  }
  EXPECT_THROW(detection_probability(test::random_state(gen), {std::nan("")}), ValidationError);
}

TEST(Fringe, MeanIsOneHalf) {
  std::mt19937_64 gen(4);
  for (int i = 0; i < 100; ++i) {
    const auto scan = fringe_scan(test::random_state(gen), uniform_phase_grid(64));
    double mean = 0.0;
    for (const auto& pt : scan.points) mean += pt.p;
    EXPECT_NEAR(mean / 64.0, 0.5, 1e-12);
  }
}

TEST(Fringe, ExactFitRecoversVisibility) {
  std::mt19937_64 gen(1234);
  for (int i = 0; i < 1000; ++i) {
    const auto s = test::random_state(gen);
    const FringeFit fit = extract_visibility(fringe_scan(s, uniform_phase_grid(64)));
    EXPECT_NEAR(fit.visibility, visibility(s), 1e-9);
    EXPECT_NEAR(fit.mean, 0.5, 1e-12);
    EXPECT_LT(fit.rmse, 1e-12);
    if (visibility(s) > 1e-3) {
      const cd z = s.c_a() * std::conj(s.c_b()) * std::conj(test::overlap_oracle(s));
      EXPECT_NEAR(std::remainder(fit.theta0 - std::arg(z), 2.0 * kPi), 0.0, 1e-8);
    }
  }
}

TEST(Fringe, PhaseOriginInvariance) {
  std::mt19937_64 gen(77);
  for (int i = 0; i < 50; ++i) {
    const auto s = test::random_state(gen);
    const double v0 = extract_visibility(fringe_scan(s, uniform_phase_grid(32, 0.0))).visibility;
    const double v1 = extract_visibility(fringe_scan(s, uniform_phase_grid(32, 1.234))).visibility;
    EXPECT_NEAR(v0, v1, 1e-12);
  }
}

TEST(Fringe, ShotNoiseWithinBound) {
  std::mt19937_64 gen(31);
  for (int i = 0; i < 20; ++i) {
    const auto s = test::random_state(gen);
    const FringeScan noisy = sample_fringe_scan(s, uniform_phase_grid(64), 100000, 1000 + i);
    EXPECT_TRUE(noisy.noisy);
    EXPECT_EQ(noisy.shots_per_point, 100000u);
    EXPECT_NEAR(extract_visibility(noisy).visibility_raw, visibility(s), 0.02);
  }
}

TEST(Fringe, SamplingIsDeterministic) {
  std::mt19937_64 gen(8);
  const auto s = test::random_state(gen);
  const auto a = sample_fringe_scan(s, uniform_phase_grid(16), 500, 9);
  const auto b = sample_fringe_scan(s, uniform_phase_grid(16), 500, 9);
  const auto c = sample_fringe_scan(s, uniform_phase_grid(16), 500, 10);
  bool differs = false;
  for (std::size_t k = 0; k < 16; ++k) {
    EXPECT_EQ(a.points[k].p, b.points[k].p);
    differs = differs || a.points[k].p != c.points[k].p;
  }
  EXPECT_TRUE(differs);
}

TEST(Fringe, RejectsBadScans) {
  std::mt19937_64 gen(8);
  const auto s = test::random_state(gen);
  EXPECT_THROW(extract_visibility(fringe_scan(s, uniform_phase_grid(4))), ValidationError);
  // 16 points over half a period.
  std::vector<PhaseSetting> half(16);
  for (std::size_t k = 0; k < 16; ++k) half[k].phi = kPi * static_cast<double>(k) / 16.0;
  EXPECT_THROW(extract_visibility(fringe_scan(s, half)), ValidationError);
  FringeScan zero = fringe_scan(s, uniform_phase_grid(16));
  for (auto& pt : zero.points) pt.p = 0.0;
  EXPECT_THROW(extract_visibility(zero), ValidationError);
  EXPECT_THROW(sample_fringe_scan(s, uniform_phase_grid(16), 0, 1), ValidationError);
}

TEST(Blocking, GivesPathProbabilities) {
  const auto s = test::make_state(std::sqrt(0.7), std::sqrt(0.3), {1.0, 0.0}, {0.5, std::sqrt(0.75)});
  EXPECT_NEAR(block_arm(s, PathLabel::B), 0.7, 1e-15);
  EXPECT_NEAR(block_arm(s, PathLabel::A), 0.3, 1e-15);
  const std::uint64_t n = 1000000;
  const double pa = static_cast<double>(sample_block_arm(s, PathLabel::B, n, 5)) / n;
  const double pb = static_cast<double>(sample_block_arm(s, PathLabel::A, n, 6)) / n;
  // 5 sigma, sigma = sqrt(p (1 - p) / n).
  EXPECT_NEAR(pa, 0.7, 5.0 * std::sqrt(0.21 / n));
  EXPECT_NEAR(pb, 0.3, 5.0 * std::sqrt(0.21 / n));
}

TEST(ArmUnitary, PreservesDistinguishability) {
  std::mt19937_64 gen(17);
  for (int i = 0; i < 200; ++i) {
    const auto s = test::random_state(gen);
    const double angle = std::uniform_real_distribution<double>(-kPi, kPi)(gen);
    const auto t = apply_arm_unitary(s, ArmUnitary::rotation(angle, i % 2 ? PathLabel::A : PathLabel::B));
    EXPECT_NEAR(distinguishability(t), distinguishability(s), 1e-12);
    EXPECT_LT(std::abs(vdc_triple(t).residual), 1e-10);
  }
}

TEST(ArmUnitary, RotationSetsOverlap) {
  // phi_a = phi_b = |0>; rotating arm B by pi/3 gives gamma' = cos(pi/3).
  const double h = 1.0 / std::sqrt(2.0);
  const auto s = test::make_state(h, h, {1.0, 0.0}, {1.0, 0.0});
  const auto t = apply_arm_unitary(s, ArmUnitary::rotation(kPi / 3.0, PathLabel::B));
  EXPECT_NEAR(std::abs(overlap(t)), 0.5, 1e-12);
  EXPECT_NEAR(visibility(t), 0.5, 1e-12);
  EXPECT_NEAR(entanglement(t), std::sqrt(0.75), 1e-12);
}

TEST(ArmUnitary, Validation) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 0) = 2.0;
  EXPECT_THROW(ArmUnitary(m, PathLabel::A), ValidationError);
  EXPECT_THROW(ArmUnitary(ComplexMatrix::Identity(2, 3), PathLabel::A), ValidationError);
  std::mt19937_64 gen(1);
  EXPECT_THROW(apply_arm_unitary(test::random_state(gen, 2), ArmUnitary::rotation(0.1, PathLabel::A, 3)),
               ValidationError);
}

}  // namespace
}  // namespace vdc
