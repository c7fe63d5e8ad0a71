#include "bbem/diagnostics.hpp"
#include "bbem/suites.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

using namespace bbem;

TEST(Suites, Names) {
  const std::vector<std::string> expected{"kernels", "jumps", "nullspaces", "green", "solvers", "mixed", "semilinear"};
  EXPECT_EQ(suite_names(), expected);
}

TEST(Suites, RejectsBadArguments) {
  EXPECT_THROW(verify_suite("nope"), UsageError);
  SuiteOptions o;
  o.max_level = 1;
  EXPECT_THROW(verify_suite("kernels", o), UsageError);
}

TEST(Suites, KernelsReportIsReproducible) {
  const SuiteReport a = verify_suite("kernels");
  const SuiteReport b = verify_suite("kernels");
  EXPECT_TRUE(a.passed());
  EXPECT_EQ(a.to_json(false), b.to_json(false));
  const auto j = nlohmann::json::parse(a.to_json(false));
  EXPECT_EQ(j["seed"].get<std::uint64_t>(), kDefaultSuiteSeed);
  EXPECT_FALSE(j.contains("wall_time_s"));
}

TEST(Diagnostics, RandomDensityIsSeeded) {
  const SurfaceMesh m = build_icosphere(1);
  const BoundaryField a = smooth_random_density(m, 1);
  EXPECT_EQ(a.values(), smooth_random_density(m, 1).values());
  EXPECT_NE(a.values(), smooth_random_density(m, 2).values());
  EXPECT_GT(a.norm(), 0.0);
}

TEST(Diagnostics, JumpsOfZeroDensityVanish) {
  const SurfaceMesh m = build_icosphere(1);
  const BoundaryField zero(m);
  const std::vector<int> panels{0, 7, 33};
  const auto v = one_sided_limit(m, zero, {1.0, 0.0}, LayerQuantity::SingleLayerVelocity, true, panels, 1e-2);
  ASSERT_EQ(v.size(), panels.size());
  for (const Vec3& x : v) EXPECT_EQ(x.norm(), 0.0);
}

TEST(Diagnostics, SingleLayerTractionJumpOnSubsample) {
  const SurfaceMesh m = build_icosphere(2);
  const BoundaryField g = smooth_random_density(m, 4);
  std::vector<int> panels;
  for (int p = 0; p < m.num_panels(); p += 10) panels.push_back(p);
  const JumpErrors e = measure_jumps(m, g, {1.0, 0.0}, panels);
  EXPECT_GT(e.offset, 0.0);
  EXPECT_LT(e.single_layer_trace, 0.05);
  EXPECT_LT(e.double_layer_jump, 0.05);
  EXPECT_LT(e.traction_jump, 0.1);
}
