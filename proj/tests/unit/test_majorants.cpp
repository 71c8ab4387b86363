#include "ellab/majorants.hpp"
#include "ellab/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ellab;

TEST(Majorants, Validation) {
  const auto grid = log_grid(1e-6, 10.0, 200);
  EXPECT_TRUE(validate_majorant(Majorant::identity(), grid));
  EXPECT_TRUE(validate_majorant(Majorant::sqrt(), grid));
  EXPECT_FALSE(validate_majorant(Majorant::power(2.0), grid));
  const Majorant table = Majorant::table({0.0, 0.5, 1.0, 2.0}, {0.0, 0.8, 1.2, 1.6});
  EXPECT_TRUE(validate_majorant(table, grid));
  EXPECT_NEAR(table(0.25), 0.4, 1e-15);
  EXPECT_NEAR(table(4.0), 3.2, 1e-15);
  const Majorant convex = Majorant::table({0.0, 1.0, 2.0}, {0.0, 0.1, 1.0});
  EXPECT_FALSE(validate_majorant(convex, grid));
}

TEST(Majorants, PhiExamples) {
  EXPECT_NEAR(phi({1.0, 0.0}, 0.5), 0.5, 1e-15);
  EXPECT_NEAR(phi({2.3, -1.7}, 1.0), 1.0, 1e-15);
  EXPECT_NEAR(phi({1.0, 1.0}, 1.0 / std::numbers::e), 2.0 / std::numbers::e, 1e-15);
  EXPECT_NEAR(2.0 / std::numbers::e, 0.735759, 1e-6);
  EXPECT_THROW(phi({1.0, 0.0}, 0.0), Error);
  EXPECT_NEAR(phi_radius({1.0, 0.0}, 0.25), 0.75, 1e-15);
}

TEST(Majorants, PhiMonotoneExamples) {
  const auto grid = open_unit_grid(10000);
  EXPECT_TRUE(check_phi_monotone({1.0, 0.0}, Majorant::identity(), grid));
  EXPECT_TRUE(check_phi_monotone({2.0, 1.0}, Majorant::sqrt(), grid));
  // beta > alpha: r -> phi(1-r) increases near r = 0 when beta > alpha
  EXPECT_FALSE(check_phi_monotone({1.0, 2.0}, Majorant::identity(), grid));
  EXPECT_THROW(check_phi_monotone({1.0, 0.0}, Majorant::power(2.0), grid), Error);
}

TEST(Majorants, RandomWeightsWithBetaAtMostAlpha) {
  Rng rng(99);
  const auto grid = open_unit_grid(1000);
  int failures = 0;
  for (int k = 0; k < 10000; ++k) {
    const double alpha = 3.0 * (1.0 - rng.uniform());
    const double beta = rng.uniform(-3.0, alpha);
    const double gamma = 1.0 - rng.uniform();
    if (!check_phi_monotone({alpha, beta}, Majorant::power(gamma), grid)) ++failures;
  }
  EXPECT_EQ(failures, 0);
}
