#include "ellab/quadrature.hpp"
#include "ellab/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ellab;

namespace {

void expect_orthonormal(const AngularBasis& basis, const SphereRule& fine) {
  const int K = basis.mode_count();
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(K, K);
  for (std::size_t i = 0; i < fine.size(); ++i) {
    const Eigen::VectorXd y = basis.evaluate(fine.node(i));
    gram += fine.weight(i) * y * y.transpose();
  }
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(K, K)).cwiseAbs().maxCoeff(), 1e-12);
}

}  // namespace

TEST(AngularBasis, CircleModesAreOrthonormal) {
  const AngularBasis b = AngularBasis::circle(32);
  EXPECT_EQ(b.mode_count(), 31);
  expect_orthonormal(b, SphereRule::circle(256));
}

TEST(AngularBasis, SphereHarmonicsAreOrthonormal) {
  const AngularBasis b = AngularBasis::sphere(16, 32);
  EXPECT_EQ(b.max_degree(), 15);
  EXPECT_EQ(b.mode_count(), 256);
  expect_orthonormal(b, SphereRule::product(40, 80));
}

TEST(AngularBasis, AnalysisInvertsSynthesis) {
  for (const AngularBasis& b : {AngularBasis::circle(24), AngularBasis::sphere(10, 20)}) {
    const Eigen::MatrixXd prod = b.synthesis() * b.analysis();
    EXPECT_LT((prod - Eigen::MatrixXd::Identity(b.mode_count(), b.mode_count())).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(NormalizedLegendre, LowDegreeClosedForms) {
  for (double x : {-0.9, -0.2, 0.0, 0.35, 0.8}) {
    const auto p = normalized_legendre(2, x);
    const double s2 = 1.0 - x * x;
    EXPECT_NEAR(p[0], 1.0, 1e-15);
    EXPECT_NEAR(p[1], std::sqrt(3.0) * x, 1e-14);
    EXPECT_NEAR(p[2], std::sqrt(3.0 * s2), 1e-14);
    EXPECT_NEAR(p[3], std::sqrt(5.0) * 0.5 * (3.0 * x * x - 1.0), 1e-14);
    EXPECT_NEAR(p[4], std::sqrt(15.0) * x * std::sqrt(s2), 1e-14);
    EXPECT_NEAR(p[5], std::sqrt(15.0 / 4.0) * s2, 1e-14);
  }
}

TEST(RealHarmonic, MatchesBasisEntries) {
  const AngularBasis b = AngularBasis::sphere(6, 12);
  const Point z = make_point({0.3, -0.5, 0.2}).normalized();
  const Eigen::VectorXd all = b.evaluate(z);
  // basis order per degree l: m = 0, then (cos m, sin m) for m = 1..l
  int k = 0;
  for (int l = 0; l <= b.max_degree(); ++l) {
    EXPECT_NEAR(all[k++], real_harmonic(3, l, 0, z), 1e-14);
    for (int m = 1; m <= l; ++m) {
      EXPECT_NEAR(all[k++], real_harmonic(3, l, m, z), 1e-14);
      EXPECT_NEAR(all[k++], real_harmonic(3, l, -m, z), 1e-14);
    }
  }
}

// v = (s^m - s^{m+2}) / (4m + 2n) solves Lap(v Y) = -s^m Y with v(1) = 0.
TEST(RadialGreenOperator, ReproducesClosedFormPotentials) {
  for (int n : {2, 3}) {
    const RadialGreenOperator op(n, 64);
    for (int m : {0, 1, 2, 5, 12}) {
      const auto& s = op.nodes();
      Eigen::VectorXd src(op.size()), expect(op.size());
      for (int i = 0; i < op.size(); ++i) {
        src[i] = std::pow(s[i], m);
        expect[i] = (std::pow(s[i], m) - std::pow(s[i], m + 2)) / (4.0 * m + 2.0 * n);
      }
      const Eigen::VectorXd got = op.matrix(m) * src;
      EXPECT_LT((got - expect).cwiseAbs().maxCoeff(), 1e-13) << "n=" << n << " m=" << m;
    }
  }
}

TEST(RadialGreenOperator, InterpolationIsExactOnPolynomials) {
  const RadialGreenOperator op(2, 16);
  Eigen::VectorXd vals(op.size());
  for (int i = 0; i < op.size(); ++i) vals[i] = std::pow(op.nodes()[i], 7) - 2.0 * op.nodes()[i];
  for (double s : {0.0, 0.13, 0.5, 0.999, 1.0}) {
    EXPECT_NEAR(op.interpolation_row(s).dot(vals), std::pow(s, 7) - 2.0 * s, 1e-13);
  }
}
