#include "ellab/solver.hpp"
#include "ellab/verifier.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace ellab;

namespace {

constexpr double kPi = std::numbers::pi;

// Composite Simpson on [a, b]; reference integrals for the growth kernel.
template <class F>
double simpson(F&& f, double a, double b, int panels = 20000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

const Table& table_named(const Verdict& v, const std::string& name) {
  for (const Table& t : v.tables)
    if (t.name == name) return t;
  throw std::runtime_error("missing table " + name);
}

}  // namespace

TEST(Verdict, SettleFollowsTolerance) {
  Verdict v;
  v.tolerance = 1e-8;
  v.max_violation = 5e-9;
  v.settle();
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.status, VerdictStatus::Pass);
  v.max_violation = 2e-8;
  v.settle(VerdictStatus::Unstable);
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.status, VerdictStatus::Unstable);
  v.max_violation = std::nan("");
  v.settle();
  EXPECT_FALSE(v.pass);
}

TEST(Verdict, GuardMapsErrors) {
  const Verdict h = run_guarded("x", [] () -> Verdict { fail(ErrorKind::Hypothesis, "gate"); });
  EXPECT_EQ(h.status, VerdictStatus::HypothesisError);
  EXPECT_FALSE(h.pass);
  EXPECT_EQ(h.theorem, "x");
  const Verdict e = run_guarded("y", [] () -> Verdict { fail(ErrorKind::Evaluation, "nan"); });
  EXPECT_EQ(e.status, VerdictStatus::Error);
  EXPECT_EQ(to_string(VerdictStatus::HypothesisError), "hypothesis-error");
}

TEST(Verdict, RefinementGrowth) {
  EXPECT_DOUBLE_EQ(refinement_growth(0.0, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(refinement_growth(0.0, 1.0)));
  EXPECT_NEAR(refinement_growth(2.0, 2.2), 0.1, 1e-15);
  EXPECT_NEAR(refinement_growth(2.0, 1.8), 0.1, 1e-15);
}

TEST(GrowthKernel, ClosedForms) {
  const BlochWeight w{1.0, 0.0};
  EXPECT_NEAR(growth_kernel_integral(3, w, 0.0, 1.0), 1.0 / 6.0, 1e-14);
  EXPECT_NEAR(growth_kernel_integral(2, w, 0.0, 1.0), 0.25, 1e-12);
  for (int n : {2, 3}) {
    for (double r : {0.5, 0.95}) {
      for (double p : {1.0, 2.0}) {
        const BlochWeight wb{2.0, 1.0};
        auto f = [&](double t) {
          const double d = 1.0 - t * r;
          const double ph = d * d * (1.0 - std::log(d));
          const double num = n == 2 ? (t > 0.0 ? t * std::log(1.0 / t) : 0.0) : t * (1.0 - t) / (n - 2);
          return num / std::pow(ph, p);
        };
        EXPECT_NEAR(growth_kernel_integral(n, wb, r, p), simpson(f, 0.0, 1.0), 1e-8) << n << " " << r << " " << p;
      }
    }
  }
}

TEST(VerifyGrowth, SinhExample) {
  const ScalarField u = yukawa_radial(3, 1.0).field();
  const Verdict v = verify_growth(u, 2.0, Majorant::identity(), {1.0, 0.0}, {0.0, 0.25, 0.5, 0.9});
  EXPECT_TRUE(v.pass) << v.max_violation;
  const Table& t = table_named(v, "thm-1.4");
  ASSERT_EQ(t.columns, (std::vector<std::string>{"r", "M_nu", "rhs_bound", "slack"}));
  EXPECT_NEAR(t.rows[2][1], std::sinh(0.5) / 0.5, 1e-12);
  EXPECT_NEAR(t.rows[2][1], 1.042190, 1e-6);
  EXPECT_GE(t.rows[2][3], 0.0);
  // r = 0 reads |u(0)| on both sides
  EXPECT_NEAR(t.rows[0][1], 1.0, 1e-15);
  EXPECT_NEAR(t.rows[0][2], 1.0, 1e-15);
}

TEST(VerifyGrowth, ConstantAndGate) {
  const Verdict c = verify_growth(constant_field(2, -1.5), 3.0, Majorant::sqrt(), {1.0, 1.0}, growth_radius_grid());
  EXPECT_TRUE(c.pass);
  for (const auto& row : c.tables[0].rows) EXPECT_NEAR(row[1], 1.5, 1e-12);
  // u = 1 - |x|^2 has u Lap u < 0
  const ScalarField bad(2, [](const Point& x) { return 1.0 - x.squaredNorm(); }, "1-|x|^2");
  const Verdict h = run_guarded("thm-1.4", [&] {
    return verify_growth(bad, 2.0, Majorant::identity(), {1.0, 0.0}, growth_radius_grid());
  });
  EXPECT_EQ(h.status, VerdictStatus::HypothesisError);
  EXPECT_NE(h.message.find("u Lap u"), std::string::npos);
}

TEST(VerifyHeinz, HarmonicAndCorollary) {
  const Verdict h = verify_heinz_growth(coordinate_field(3, 0), HeinzData{}, 2.0, Majorant::identity(), {1.0, 0.0},
                                        growth_radius_grid(), false);
  EXPECT_TRUE(h.pass);
  EXPECT_EQ(h.theorem, "thm-1.5");
  HeinzData lam;
  lam.a2 = constant_field(3, 0.3);
  lam.b2 = 1.0;
  const Verdict c = verify_heinz_growth(radial_oracle(3, 0.3), lam, 2.0, Majorant::identity(), {1.0, 0.0},
                                        growth_radius_grid(), true);
  EXPECT_TRUE(c.pass) << c.max_violation;
  EXPECT_EQ(c.theorem, "cor-1.5");
  EXPECT_EQ(c.tables.size(), 2u);
  for (const auto& row : table_named(c, "cor-1.5").rows) EXPECT_LE(row[1], row[2] + 1e-8);
}

TEST(VerifyHeinz, Gates) {
  HeinzData big;
  big.a2 = constant_field(3, 3.0);  // 2n/nu = 3 for n = 3, nu = 2
  big.b2 = 1.0;
  const Verdict v = run_guarded("thm-1.5", [&] {
    return verify_heinz_growth(radial_oracle(3, 3.0), big, 2.0, Majorant::identity(), {1.0, 0.0},
                               growth_radius_grid(), false);
  });
  EXPECT_EQ(v.status, VerdictStatus::HypothesisError);
  HeinzData lam;
  lam.a2 = constant_field(3, 0.5);  // above nu/(2n) = 1/3
  lam.b2 = 1.0;
  const Verdict c = run_guarded("cor-1.5", [&] {
    return verify_heinz_growth(radial_oracle(3, 0.5), lam, 2.0, Majorant::identity(), {1.0, 0.0},
                               growth_radius_grid(), true);
  });
  EXPECT_EQ(c.status, VerdictStatus::HypothesisError);
  // Heinz inequality itself fails: |Lap u| = 1 > a2 |u| near the centre
  HeinzData weak;
  weak.a2 = constant_field(2, 0.1);
  const Verdict d = run_guarded("thm-1.5", [&] {
    return verify_heinz_growth(norm_sq_field(2), weak, 2.0, Majorant::identity(), {1.0, 0.0},
                               growth_radius_grid(), false);
  });
  EXPECT_EQ(d.status, VerdictStatus::HypothesisError);
}

TEST(GradientPowerLaplacian, MatchesFiniteDifferences) {
  const ScalarField u = radial_oracle(3, 1.0);
  const Point x = make_point({0.2, -0.3, 0.4});
  for (double nu : {2.0, 3.0, 4.5}) {
    auto t = [&](const Point& y) { return std::pow(u.gradient(y).norm(), nu); };
    const double h = 1e-3;
    double lap = 0.0;
    for (int k = 0; k < 3; ++k) {
      const Point e = h * unit_vector(3, k);
      lap += (t(Point(x + e)) - 2.0 * t(x) + t(Point(x - e))) / (h * h);
    }
    EXPECT_NEAR(gradient_power_laplacian(u, nu, x), lap, 1e-5 * (1.0 + std::abs(lap)));
  }
  // |grad x1x2|^2 = |x|^2 has Laplacian 4
  EXPECT_NEAR(gradient_power_laplacian(Polynomial::monomial(2, {1, 1}).field(), 2.0, make_point({0.3, 0.1})), 4.0,
              1e-6);
}

TEST(VerifyDirichlet, ShellSequence) {
  const Verdict z = verify_dirichlet_finiteness(coordinate_field(3, 0), 1.0, 1.0, 2.0);
  EXPECT_TRUE(z.pass);
  EXPECT_DOUBLE_EQ(z.constant("integral"), 0.0);
  // n = 2, mu = 1, alpha = 1: beta nu = 1, Lap |grad x1x2|^2 = 4,
  // so the integral over B(0, b) is 8 pi (b^2/2 - b^3/3).
  const Verdict v = verify_dirichlet_finiteness(Polynomial::monomial(2, {1, 1}).field(), 1.0, 1.0, 2.0);
  EXPECT_TRUE(v.pass);
  EXPECT_NEAR(v.constant("beta"), 0.5, 1e-15);
  for (const auto& row : v.tables[0].rows) {
    const double b = 1.0 - row[0];
    EXPECT_NEAR(row[1], 8.0 * kPi * (b * b / 2.0 - b * b * b / 3.0), 1e-10);
  }
  const Verdict y = verify_dirichlet_finiteness(radial_oracle(3, 1.0), 1.0, 1.0, 2.0);
  EXPECT_TRUE(y.pass);
  EXPECT_NEAR(y.constant("beta"), 1.0, 1e-15);
  const Verdict gate = run_guarded("thm-1.6", [] {
    return verify_dirichlet_finiteness(coordinate_field(2, 0), 1.0, 1.5, 2.0);
  });
  EXPECT_EQ(gate.status, VerdictStatus::HypothesisError);
}

TEST(VerifyMajorant, Examples) {
  const double a2 = majorant_alpha(2, 2.0, 1.0);
  EXPECT_NEAR(a2, 1.0, 1e-15);
  const Verdict lin = verify_harmonic_majorant(coordinate_field(2, 0), 2.0, a2, 1.0, {0.5, 0.9});
  EXPECT_TRUE(lin.pass);
  EXPECT_NEAR(lin.constant("max_domination_ratio"), 1.0, 1e-10);
  const Verdict xy = verify_harmonic_majorant(Polynomial::monomial(2, {1, 1}).field(), 2.0, a2, 1.0, {0.5, 0.7, 0.9});
  EXPECT_TRUE(xy.pass);
  // G_r(x) = r^2 for |grad u(rx)|^2 = r^2 |x|^2
  EXPECT_NEAR(xy.tables[0].rows[1][1], 0.49, 1e-12);
  const double a3 = majorant_alpha(3, 2.0, 1.5);
  const Verdict y = verify_harmonic_majorant(radial_oracle(3, 0.5), 2.0, a3, 1.5, {0.5, 0.9});
  EXPECT_TRUE(y.pass);
  const Verdict gate = run_guarded("thm-1.7", [] {
    return verify_harmonic_majorant(coordinate_field(2, 0), 2.0, 0.5, 1.0, {0.5});
  });
  EXPECT_EQ(gate.status, VerdictStatus::HypothesisError);
}

TEST(VerifySubharmonic, Examples) {
  const Verdict lin = verify_subharmonicity(SubharmonicTarget::GradientPower, coordinate_field(3, 0), 2.0);
  EXPECT_TRUE(lin.pass);
  EXPECT_EQ(lin.theorem, "lem-cw5");
  const Verdict y = verify_subharmonicity(SubharmonicTarget::AbsolutePower, radial_oracle(3, 1.0), 3.0);
  EXPECT_TRUE(y.pass) << y.max_violation;
  EXPECT_EQ(y.samples, 1000u);
  const Verdict h = verify_subharmonicity(SubharmonicTarget::HessianPower, Polynomial::monomial(2, {1, 1}).field(), 2.0);
  EXPECT_TRUE(h.pass);
  // |x1| is excluded near its zero set and checked by sub-mean values there
  const Verdict z = verify_subharmonicity(SubharmonicTarget::AbsolutePower, coordinate_field(3, 0), 1.0);
  EXPECT_TRUE(z.pass) << z.max_violation;
  EXPECT_GT(z.constant("excluded_samples"), 0.0);
}

TEST(VerifySubharmonic, GatesAndDetection) {
  SubharmonicOptions o;
  o.lambda = 2.0;
  const Verdict wrong_lambda =
      run_guarded("lem-cw4", [&] { return verify_subharmonicity(SubharmonicTarget::HessianPower, radial_oracle(2, 1.0), 1.0, o); });
  EXPECT_EQ(wrong_lambda.status, VerdictStatus::HypothesisError);
  // u Lap u > 0 and |u| subharmonic
  const ScalarField up(2, [](const Point& x) { return 1.0 + x.squaredNorm(); }, "1+|x|^2");
  EXPECT_TRUE(verify_subharmonicity(SubharmonicTarget::AbsolutePower, up, 1.0).pass);
  // sum u_k (Lap u)_k < 0 for u = x1 - x1^3
  const ScalarField cubic = Polynomial(2, {{1.0, {1, 0}}, {-1.0, {3, 0}}}).field();
  const Verdict g = run_guarded("lem-cw5", [&] {
    return verify_subharmonicity(SubharmonicTarget::GradientPower, cubic, 2.0);
  });
  EXPECT_EQ(g.status, VerdictStatus::HypothesisError);
}

TEST(VerifyMeanValue, CatalogAndCorruption) {
  auto cat = polynomial_catalog(2, 6);
  const auto c3 = polynomial_catalog(3, 6);
  cat.insert(cat.end(), c3.begin(), c3.end());
  EXPECT_EQ(cat.size(), 28u + 84u);
  const Verdict v = verify_mean_value(cat, {0.25, 0.5, 0.9});
  EXPECT_TRUE(v.pass) << v.max_violation;
  EXPECT_EQ(v.samples, 336u);
  // a wrong Laplacian for |x|^2 in n = 3 shifts the right side by r^2/6 * 1
  std::vector<MeanValueCase> bad{{norm_sq_field(3), constant_field(3, 7.0)}};
  const Verdict b = verify_mean_value(bad, {0.5});
  EXPECT_FALSE(b.pass);
  EXPECT_NEAR(b.max_violation, 0.25 / 6.0, 1e-12);
}

TEST(VerifyScalar, PowerAndMonotone) {
  const Verdict p = verify_power_inequality(10000, 7);
  EXPECT_TRUE(p.pass);
  EXPECT_EQ(p.constant("violations"), 0.0);
  const Verdict m = verify_majorant_monotonicity(10000, 7);
  EXPECT_TRUE(m.pass);
  EXPECT_EQ(m.samples, 10000u);
}

TEST(VerifyConstants, GradientBound) {
  const Verdict c = verify_gradient_bound(constant_field(2, 2.0), 1.0, 2.0);
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.constant("C"), 0.0);
  const Verdict x = verify_gradient_bound(coordinate_field(2, 0), 1.0, 2.0);
  EXPECT_TRUE(x.pass);
  EXPECT_TRUE(std::isfinite(x.constant("C")));
  EXPECT_GT(x.constant("C"), 0.0);
  // sup is reached on the zero set: 1 / (2 int_{B} z1^2 dz) = 2/pi in the plane
  EXPECT_NEAR(x.constant("C"), 2.0 / kPi, 2e-2);
  const Verdict y = verify_gradient_bound(radial_oracle(3, 1.0), 1.0, 2.0);
  EXPECT_TRUE(y.pass);
}

TEST(VerifyConstants, BlochOscillation) {
  const Verdict x = verify_bloch_oscillation(coordinate_field(2, 0), Majorant::identity(), 1.0);
  EXPECT_TRUE(x.pass);
  EXPECT_NEAR(x.constant("A"), 1.0, 1e-9);
  // mean of |y1| over the unit disk is 4/(3 pi); the origin sample uses r = 0.999
  EXPECT_NEAR(x.constant("B"), 0.999 * 4.0 / (3.0 * kPi), 2e-3);
  const Verdict c = verify_bloch_oscillation(constant_field(3, 1.0), Majorant::identity(), 1.0);
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.constant("A"), 0.0);
  EXPECT_EQ(c.constant("B"), 0.0);
  const Verdict gate = run_guarded("thm-1.2", [] {
    return verify_bloch_oscillation(coordinate_field(2, 0), Majorant::identity(), 2.0);
  });
  EXPECT_EQ(gate.status, VerdictStatus::HypothesisError);
}

TEST(VerifyConstants, MeanBound) {
  const Verdict c = verify_mean_bound(constant_field(3, -2.0), 2.0);
  EXPECT_TRUE(c.pass);
  EXPECT_NEAR(c.constant("C_mean"), 1.0 / unit_ball_volume(3), 1e-12);
  EXPECT_EQ(c.constant("C_gradient"), 0.0);
  const Verdict y = verify_mean_bound(radial_oracle(2, 1.0), 2.0);
  EXPECT_TRUE(y.pass);
  EXPECT_GT(y.constant("C_gradient"), 0.0);
}

TEST(VerifyConstants, MetricEquivalence) {
  const VectorField id({coordinate_field(2, 0), coordinate_field(2, 1)});
  MetricOptions o;
  o.sources = 8;
  const Verdict v = verify_metric_equivalence(id, {0.0, 0.0}, o);
  EXPECT_TRUE(v.pass) << v.max_violation;
  EXPECT_NEAR(v.constant("k_lipschitz"), 1.0, 0.1);
  EXPECT_LE(v.constant("weak_uniform"), 0.5 + 0.05);
  const VectorField c({constant_field(2, 1.0), constant_field(2, 0.0)});
  const Verdict cv = verify_metric_equivalence(c, {0.0, 0.0}, o);
  EXPECT_TRUE(cv.pass);
  EXPECT_EQ(cv.constant("k_lipschitz"), 0.0);
  const Verdict gate = run_guarded("thm-1.3", [&] { return verify_metric_equivalence(id, {1.0, 0.0}, o); });
  EXPECT_EQ(gate.status, VerdictStatus::HypothesisError);
}

TEST(TestFamilies, Members) {
  const TestFunction y = radial_yukawa_member(3, 1.0);
  EXPECT_NEAR(y.u(make_point({1.0, 0.0, 0.0})), std::sinh(1.0), 1e-12);
  for (int n : {2, 3})
    for (const TestFunction& h : harmonic_family(n)) {
      const Point x = n == 2 ? make_point({0.3, -0.2}) : make_point({0.3, -0.2, 0.5});
      EXPECT_NEAR(h.u.laplacian(x), 0.0, 1e-12) << h.name;
    }
}
