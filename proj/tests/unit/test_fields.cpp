#include "ellab/fields.hpp"
#include "ellab/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace ellab;

TEST(Fields, GradientExamples) {
  const Point x = make_point({0.3, -0.2, 0.5});
  EXPECT_NEAR((gradient(coordinate_field(3, 0), x) - unit_vector(3, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((gradient(norm_sq_field(3), x) - 2.0 * x).norm(), 0.0, 1e-15);
}

TEST(Fields, FiniteDifferenceMatchesSeriesDerivative) {
  const RadialSeries s = yukawa_radial(3, 1.0);
  const ScalarField analytic = s.field();
  const ScalarField values_only(3, [s](const Point& x) { return s.value(x.squaredNorm()); });
  const Point x = make_point({0.3, 0.0, 0.0});
  // d/ds sinh(s)/s = (s cosh s - sinh s)/s^2
  const double expect = (0.3 * std::cosh(0.3) - std::sinh(0.3)) / 0.09;
  EXPECT_NEAR(analytic.gradient(x)[0], expect, 1e-14);
  EXPECT_NEAR(values_only.gradient(x)[0], expect, 1e-6);
}

TEST(Fields, HessianFrobeniusExamples) {
  const Point x = make_point({0.1, 0.7});
  EXPECT_NEAR(hessian_frobenius_sq(norm_sq_field(2), x), 8.0, 1e-14);
  EXPECT_NEAR(hessian_frobenius_sq(coordinate_field(2, 0), x), 0.0, 1e-15);
  const ScalarField xy = Polynomial::monomial(2, {1, 1}).field();
  EXPECT_NEAR(hessian_frobenius_sq(xy, x), 2.0, 1e-14);
}

TEST(Fields, LaplacianExamples) {
  const Point x = make_point({0.1, 0.2, 0.3});
  EXPECT_NEAR(laplacian(norm_sq_field(3), x), 6.0, 1e-14);
  EXPECT_NEAR(laplacian(coordinate_field(3, 1), x), 0.0, 1e-15);
  const ScalarField i0 = yukawa_radial(2, 1.0).field();
  const Point p = make_point({0.4, 0.0});
  EXPECT_NEAR(laplacian(i0, p), i0(p), 1e-12);
  const ScalarField fd(2, [&](const Point& y) { return i0(y); });
  EXPECT_NEAR(laplacian(fd, p), i0(p), 1e-6);
}

TEST(Fields, YukawaSeriesMatchesClosedForms) {
  for (double lambda : {0.25, 1.0, 4.0}) {
    const double a = std::sqrt(lambda);
    const RadialSeries s3 = yukawa_radial(3, lambda);
    const RadialSeries s2 = yukawa_radial(2, lambda);
    for (double r : {0.05, 0.5, 1.0}) {
      EXPECT_NEAR(s3.value(r * r), std::sinh(a * r) / (a * r), 1e-14);
      EXPECT_NEAR(s2.value(r * r), std::cyl_bessel_i(0.0, a * r), 1e-14);
    }
  }
  EXPECT_NEAR(bessel_i0(0.5), 1.063483, 5e-7);
  EXPECT_NEAR(bessel_i0(3.0), std::cyl_bessel_i(0.0, 3.0), 1e-13);
}

TEST(Fields, AnalyticDerivativesAgreeWithCentralDifferences) {
  Rng rng(3);
  std::vector<ScalarField> catalog = {
      norm_sq_field(2), norm_sq_field(3), yukawa_radial(2, 1.0).field(), yukawa_radial(3, 0.5).field(),
      plane_wave_field(2, 1.0), plane_wave_field(3, 0.5), sinh_coordinate_field(2, 0.7, 1), log_kernel_field(),
      Polynomial(3, {{1.0, {1, 1, 0}}, {-2.0, {0, 2, 1}}, {0.5, {3, 0, 0}}}).field()};
  for (const auto& f : catalog) {
    for (int k = 0; k < 200; ++k) {
      const Point x = rng.in_ball(f.dimension(), 0.9);
      const Vector ga = f.gradient(x);
      const Vector gf = f.fd_gradient(x);
      EXPECT_LE((ga - gf).norm(), 1e-5 * std::max(1.0, ga.norm())) << f.name();
      const Matrix ha = f.hessian(x);
      const Matrix hf = f.fd_hessian(x);
      EXPECT_LE((ha - hf).norm(), 1e-5 * std::max(1.0, ha.norm())) << f.name();
    }
  }
}

TEST(Fields, StepShrinksNearSupportBoundary) {
  const ScalarField f = log_kernel_field();
  const Point x = make_point({-0.99999, 0.0});
  const Vector g = f.fd_gradient(x);
  EXPECT_NEAR(g[0], f.gradient(x)[0], 1e-6);
  EXPECT_THROW(f.fd_gradient(make_point({1.0, 0.0})), Error);
}

TEST(Fields, OperatorNorm) {
  EXPECT_NEAR(operator_norm(Matrix::Identity(2, 2)), 1.0, 1e-15);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = -4;
  EXPECT_NEAR(operator_norm(d), 4.0, 1e-14);
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    Matrix a(3, 3);
    for (int i = 0; i < 9; ++i) a.data()[i] = rng.uniform(-1, 1);
    // power iteration on A^T A as an independent route
    Vector v = make_point({1.0, 0.3, -0.2});
    for (int it = 0; it < 2000; ++it) v = (a.transpose() * (a * v)).normalized();
    const double power = (a * v).norm();
    EXPECT_NEAR(operator_norm(a), power, 1e-10);
    EXPECT_LE(operator_norm(a), a.norm() + 1e-15);
  }
}

TEST(Fields, HeinzResidualExamples) {
  const ScalarField u = yukawa_radial(3, 0.5).field();
  HeinzData data;
  data.a2 = constant_field(3, 0.5);
  data.b2 = 1.0;
  const Point x = make_point({0.2, 0.4, -0.1});
  EXPECT_NEAR(heinz_residual(u, data, x), 0.0, 1e-13);
  HeinzData only_a3;
  only_a3.a3 = constant_field(2, 0.1);
  EXPECT_NEAR(heinz_residual(coordinate_field(2, 0), only_a3, make_point({0.3, 0.3})), 0.1, 1e-15);
  HeinzData four;
  four.a3 = constant_field(2, 4.0);
  EXPECT_NEAR(heinz_residual(norm_sq_field(2), four, make_point({0.3, 0.3})), 0.0, 1e-14);
}

TEST(Fields, FactorizeElliptic) {
  const Point x = make_point({0.2, -0.1});
  EXPECT_NEAR(factorize_elliptic(constant_field(2, 1.0), norm_sq_field(2), x), -x.squaredNorm(), 1e-15);
  EXPECT_NEAR(factorize_elliptic(plane_wave_field(2, 1.0), constant_field(2, 0.0), x), 1.0, 1e-14);
  const ScalarField p_fd(2, [](const Point& y) { return std::exp(y[0]); });
  EXPECT_NEAR(factorize_elliptic(p_fd, constant_field(2, 0.0), x), 1.0, 1e-6);
  EXPECT_NEAR(factorize_elliptic(constant_field(2, 1.0), constant_field(2, -0.7), x), 0.7, 1e-15);
  EXPECT_THROW(factorize_elliptic(coordinate_field(2, 0), constant_field(2, 1.0), make_point({0.0, 0.5})), Error);
  const ScalarField q = Polynomial(2, {{0.3, {1, 0}}, {1.0, {0, 0}}}).field();
  EXPECT_NEAR(factorization_defect(plane_wave_field(2, 0.5), q, norm_sq_field(2), x), 0.0, 1e-5);
}

TEST(Fields, PowerInequalityDraws) {
  Rng rng(2024);
  int violations = 0;
  for (int k = 0; k < 10000; ++k) {
    const double a = rng.uniform(0.0, 10.0);
    const double b = rng.uniform(0.0, 10.0);
    const double iota = 4.0 * (1.0 - rng.uniform());  // (0, 4]
    const double lhs = std::pow(a + b, iota);
    const double rhs = std::pow(2.0, std::max(iota - 1.0, 0.0)) * (std::pow(a, iota) + std::pow(b, iota));
    if (lhs > rhs * (1.0 + 1e-12)) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(Fields, PolynomialCatalogSizes) {
  EXPECT_EQ(Polynomial::monomials_up_to(2, 6).size(), 28u);
  EXPECT_EQ(Polynomial::monomials_up_to(3, 6).size(), 84u);
  const Polynomial p = Polynomial::monomial(2, {3, 2});
  EXPECT_EQ(p.laplacian().to_string(), "6*x1*x2^2 + 2*x1^3");
}
