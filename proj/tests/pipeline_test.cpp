#include "vdc/pipeline.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

namespace vdc {
namespace {

std::vector<Scenario> quick_defaults(std::uint64_t shots = 20000) {
  auto list = default_scenarios();
  for (auto& sc : list) sc.shots = shots;
  return list;
}

TEST(Pipeline, AnalyticAndEstimatedAgree) {
  for (const auto& sc : quick_defaults()) {
    const RunReport r = run_pipeline(sc);
    EXPECT_EQ(r.name, sc.name);
    EXPECT_LT(std::abs(r.residual_analytic()), 1e-12);
    EXPECT_NEAR(r.estimated.visibility, r.analytic.visibility, 0.05) << sc.name;
    EXPECT_NEAR(r.estimated.distinguishability, r.analytic.distinguishability, 0.05) << sc.name;
    EXPECT_NEAR(r.estimated.concurrence, r.analytic.concurrence, 0.05) << sc.name;
    EXPECT_GE(r.diagnostics.fidelity, 0.98);
    EXPECT_GE(r.estimated.visibility, 0.0);
    EXPECT_LE(r.estimated.visibility, 1.05);
    EXPECT_LE(r.estimated.concurrence, 1.0);
    EXPECT_EQ(r.diagnostics.counts_block_a + r.diagnostics.counts_block_b > 0, true);
  }
}

TEST(Pipeline, Deterministic) {
  const Scenario sc = quick_defaults()[2];
  const RunReport a = run_pipeline(sc);
  const RunReport b = run_pipeline(sc);
  EXPECT_EQ(a.estimated.visibility, b.estimated.visibility);
  EXPECT_EQ(a.estimated.distinguishability, b.estimated.distinguishability);
  EXPECT_EQ(a.estimated.concurrence, b.estimated.concurrence);
  Scenario other = sc;
  other.seed = 43;
  EXPECT_NE(run_pipeline(other).estimated.visibility, a.estimated.visibility);
}

TEST(Pipeline, ParallelMatchesSequential) {
  const auto list = quick_defaults(5000);
  const auto seq = run_all(list, 1);
  const auto par = run_all(list, 4);
  ASSERT_EQ(seq.size(), par.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EXPECT_EQ(seq[i].name, par[i].name);
    EXPECT_EQ(seq[i].estimated.visibility, par[i].estimated.visibility);
    EXPECT_EQ(seq[i].estimated.concurrence, par[i].estimated.concurrence);
    EXPECT_EQ(seq[i].diagnostics.fidelity, par[i].diagnostics.fidelity);
  }
}

TEST(Pipeline, ErrorsNameTheScenario) {
  auto list = quick_defaults(5000);
  list[3].shots = 10;
  try {
    run_all(list, 2);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find(list[3].name), std::string::npos) << e.what();
  }
}

TEST(Sphere, AnalyticPointsOnUnitSphere) {
  const auto reports = run_all(quick_defaults(2000));
  for (const auto& p : sphere_points(reports, SphereSource::analytic)) EXPECT_NEAR(p.radius(), 1.0, 1e-12);
  for (const auto& p : sphere_points(reports)) {
    EXPECT_GE(p.x, 0.0);
    EXPECT_LE(p.x, 1.0);
    EXPECT_GE(p.z, 0.0);
    EXPECT_LE(p.z, 1.0);
  }
}

TEST(Pipeline, SeededExamples) {
  const auto list = default_scenarios();
  const RunReport bell = run_pipeline(list[0]);
  EXPECT_LE(std::abs(bell.residual_est()), 0.05);
  const RunReport separable = run_pipeline(list[4]);
  EXPECT_LE(separable.estimated.concurrence, 0.05);
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

TEST(Scaling, RadiusErrorShrinksWithShots) {
  // Per default scenario, median over five seeds of |r - 1|, r the radius of
  // the estimated triple.
  const auto list = default_scenarios();
  for (std::size_t i = 0; i < list.size(); ++i) {
    std::vector<double> low, high;
    for (std::uint64_t k = 0; k < 5; ++k) {
      Scenario sc = list[i];
      sc.seed = derive_seed(900, i, k);
      sc.shots = 10000;
      low.push_back(std::abs(std::sqrt(run_pipeline(sc).estimated.radius_squared()) - 1.0));
      sc.shots = 400000;
      high.push_back(std::abs(std::sqrt(run_pipeline(sc).estimated.radius_squared()) - 1.0));
    }
    EXPECT_LE(median(high), median(low)) << list[i].name;
  }
}

}  // namespace
}  // namespace vdc
