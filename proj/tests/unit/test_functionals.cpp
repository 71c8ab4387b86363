#include "ellab/functionals.hpp"
#include "ellab/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ellab;

namespace {

std::vector<double> closed_grid(int count) {
  std::vector<double> g;
  for (int k = 0; k <= count; ++k) g.push_back(static_cast<double>(k) / count);
  return g;
}

}  // namespace

TEST(HardyNorm, Examples) {
  EXPECT_NEAR(hardy_norm(constant_field(3, -2.5), 2.0, closed_grid(10)).value, 2.5, 1e-12);
  const NormReport x1 = hardy_norm(coordinate_field(2, 0), 2.0, closed_grid(20));
  EXPECT_NEAR(x1.value, 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(x1.argmax.norm(), 1.0, 1e-15);
  EXPECT_NEAR(x1.resolution, 0.05, 1e-15);
  const NormReport sh = hardy_norm(radial_oracle(3, 1.0), 2.0, closed_grid(20));
  EXPECT_NEAR(sh.value, std::sinh(1.0), 1e-12);
  EXPECT_NEAR(hardy_norm(coordinate_field(2, 1), INFINITY, closed_grid(4)).value, 1.0, 1e-12);
}

TEST(HardyNorm, MeansIncreaseForSubharmonicPowers) {
  const ScalarField u = radial_oracle(2, 2.0, 1.0, 1.0);
  const SphereRule rule = SphereRule::for_dimension(2);
  double prev = 0.0;
  for (double r : closed_grid(20)) {
    const double m = r == 0.0 ? u(Point::Zero(2)) : surface_mean(u, r, rule, 3.0);
    EXPECT_GE(m, prev - 1e-14);
    prev = m;
  }
}

TEST(BlochNorm, ConstantAndLinear) {
  const BlochWeight w{1.0, 0.0};
  EXPECT_NEAR(bloch_norm(constant_field(2, 3.0), INFINITY, Majorant::identity(), w).value, 3.0, 1e-9);
  const NormReport lin = bloch_norm(coordinate_field(2, 0), INFINITY, Majorant::identity(), w);
  EXPECT_NEAR(lin.value, 1.0, 1e-8);
  EXPECT_LT(lin.argmax.norm(), 1e-6);
  EXPECT_NEAR(bloch_norm(coordinate_field(3, 0), 2.0, Majorant::identity(), w).value, 1.0, 1e-8);
}

TEST(BlochNorm, LogKernelAgainstDenseScan) {
  // (1 - |z|) / |1 - z| on a dense polar grid with d >= 1e-3
  double dense = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double r = 0.999 * i / 2000.0;
    for (int j = 0; j < 720; ++j) {
      const double t = 2.0 * std::numbers::pi * j / 720.0;
      dense = std::max(dense, (1.0 - r) / std::hypot(1.0 - r * std::cos(t), r * std::sin(t)));
    }
  }
  const NormReport rep = bloch_norm(log_kernel_field(), INFINITY, Majorant::identity(), BlochWeight{1.0, 0.0});
  EXPECT_NEAR(rep.value, dense, 1e-6);
  EXPECT_GT(rep.samples, 0u);
}

TEST(OscillationMean, Examples) {
  EXPECT_EQ(oscillation_mean(constant_field(2, 1.0), make_point({0.1, 0.1}), 0.3), 0.0);
  EXPECT_NEAR(oscillation_mean(norm_sq_field(2), Point::Zero(2), 0.6), 0.36 / 2.0, 1e-10);
  const double r = 0.3;
  const double quad = oscillation_mean(coordinate_field(2, 0), make_point({0.2, -0.4}), r);
  EXPECT_NEAR(quad, 4.0 * r / (3.0 * std::numbers::pi), 1e-5);
  // Monte-Carlo mean of |y1| over the disk of radius r
  Rng rng(17);
  double mc = 0.0;
  const int m = 200000;
  for (int i = 0; i < m; ++i) mc += std::abs(rng.in_ball(2, r)[0]);
  EXPECT_NEAR(quad, mc / m, 5e-4);
}

TEST(OscillationMean, BallMustStayInside) {
  try {
    oscillation_mean(coordinate_field(2, 0), make_point({0.5, 0.0}), 0.6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
}

TEST(OscillationMean, BoundedByTwiceSup) {
  const ScalarField u = radial_oracle(3, 1.0, 1.0, 1.0);
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const Point x = rng.in_ball(3, 0.5);
    const double r = rng.uniform(0.01, 1.0 - x.norm());
    EXPECT_LE(oscillation_mean(u, x, r), 2.0 + 1e-12);
    EXPECT_GE(oscillation_mean(u, x, r), 0.0);
  }
}

TEST(LipschitzConstant, Examples) {
  Rng rng(4);
  const auto pairs = sample_pairs(2, 2000, rng);
  EXPECT_EQ(lipschitz_constant(constant_field(2, 1.0), Majorant::identity(), pairs).value, 0.0);
  const NormReport lin = lipschitz_constant(coordinate_field(2, 0), Majorant::identity(), pairs);
  EXPECT_LE(lin.value, 1.0 + 1e-12);
  EXPECT_GT(lin.value, 0.99);
  const NormReport sq = lipschitz_constant(sqrt_distance_field(2), Majorant::sqrt(), pairs);
  EXPECT_FALSE(sq.infinite);
  EXPECT_GT(sq.value, 0.5);
  EXPECT_LE(sq.value, 1.0 + 1e-12);  // |sqrt a - sqrt b| <= sqrt|a - b|
}

TEST(DirichletEnergy, Examples) {
  EXPECT_NEAR(dirichlet_energy(coordinate_field(2, 0), 1.0, 0.0, 1.0).value, 0.0, 1e-12);
  const DirichletResult q = dirichlet_energy(norm_sq_field(2), 1.0, 0.0, 1.0);
  EXPECT_FALSE(q.divergent);
  EXPECT_NEAR(q.value, 4.0 * std::numbers::pi, 1e-8);
  // Hessian of x1 x2 has Frobenius norm^2 = 2 and int_D (1 - |x|^2) = pi/2
  const Polynomial xy = Polynomial::monomial(2, {1, 1});
  EXPECT_NEAR(dirichlet_energy(xy.field(), 1.0, 0.0, 1.0).value, std::numbers::pi, 1e-8);
}

TEST(DirichletEnergy, QuadraticScaling) {
  const ScalarField u = radial_oracle(2, 1.0, 1.0, 1.0);
  const double e1 = dirichlet_energy(u, 1.0, 0.0, 1.0).value;
  const double e3 = dirichlet_energy(product(u, 3.0), 1.0, 0.0, 1.0).value;
  EXPECT_NEAR(e3, 9.0 * e1, 1e-10 * e3);
}

TEST(DirichletEnergy, FlagsDivergence) {
  // (1 - |x|)^{1/2} has Hessian ~ d^{-3/2}; with mu = 1 the integrand ~ d^{alpha - 3}
  const DirichletResult r = dirichlet_energy(sqrt_distance_field(2), 1.0, 0.0, 1.0);
  EXPECT_TRUE(r.divergent);
  EXPECT_TRUE(std::isinf(r.value));
  EXPECT_FALSE(dirichlet_energy(sqrt_distance_field(2), 3.0, 0.0, 1.0).divergent);
}

TEST(GrowthProfile, Normalizers) {
  std::vector<double> grid;
  for (int k = 1; k <= 8; ++k) grid.push_back(1.0 - std::pow(10.0, -k));
  grid.insert(grid.begin(), 0.5);
  const auto mk = radial_growth_profile(log_kernel_field(), make_point({1.0, 0.0}), grid, GrowthNormalizer::Makarov);
  EXPECT_FALSE(mk[0].defined);
  EXPECT_FALSE(mk[1].defined);  // r = 0.9: log log L < 0
  EXPECT_TRUE(mk.back().defined);
  const auto kb = radial_growth_profile(log_kernel_field(), make_point({1.0, 0.0}), grid, GrowthNormalizer::Korenblum);
  for (const auto& e : kb) {
    if (!e.defined || e.r < 0.99) continue;
    EXPECT_LT(e.ratio, 4.0) << "r=" << e.r;
  }
  const auto bounded = radial_growth_profile(coordinate_field(2, 1), make_point({0.0, 1.0}), grid, GrowthNormalizer::Korenblum);
  EXPECT_LT(bounded.back().ratio, bounded[3].ratio);
}
