#include "ellab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ellab {

double poisson_kernel(int n, double r, const Point& w, const Point& zeta) {
  const double w2 = w.squaredNorm();
  if (r <= 0.0 || r > 1.0 || std::sqrt(w2) >= r) {
    fail(ErrorKind::Domain, "poisson_kernel requires |w| < r <= 1");
  }
  const double dist = (w - r * zeta).norm();
  return (r * r - w2) / std::pow(dist, n);
}

double green_ball(int n, double r, const Point& w, const Point& y) {
  if (n < 2) fail(ErrorKind::Configuration, "green_ball: n must be at least 2");
  if (w.norm() >= r || y.norm() >= 1.0) fail(ErrorKind::Domain, "green_ball requires |w| < r and |y| < 1");
  const double near = (w - r * y).norm();
  if (near < 1e-15) fail(ErrorKind::Singularity, "green_ball evaluated at w = r y");
  const double image_sq = r * r + w.squaredNorm() * y.squaredNorm() - 2.0 * r * w.dot(y);
  if (n == 2) return std::log(std::sqrt(image_sq) / near) / (2.0 * std::numbers::pi);
  const double e = 2.0 - n;
  return (std::pow(near, e) - std::pow(image_sq, 0.5 * e)) / (n * (n - 2.0) * unit_ball_volume(n));
}

double radial_green(int n, double s, double r) {
  if (!(s >= 0.0) || !(s <= r) || r > 1.0) fail(ErrorKind::Domain, "radial_green requires 0 <= s <= r <= 1");
  if (s == 0.0) return std::numeric_limits<double>::infinity();
  if (n == 2) return 0.5 * std::log(r / s);
  return (std::pow(s, 2.0 - n) - std::pow(r, 2.0 - n)) / (n * (n - 2.0));
}

double surface_mean(const ScalarField& f, double r, const SphereRule& rule, double nu) {
  return surface_mean(f, Point::Zero(rule.dimension()), r, rule, nu);
}

double surface_mean(const ScalarField& f, const Point& center, double r, const SphereRule& rule,
                    double nu) {
  if (!(nu > 0.0)) fail(ErrorKind::Configuration, "surface_mean: nu must be positive");
  if (std::isinf(nu)) {
    double m = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) m = std::max(m, std::abs(f(Point(center + r * rule.node(i)))));
    return m;
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    sum += rule.weight(i) * std::pow(std::abs(f(Point(center + r * rule.node(i)))), nu);
  }
  return std::pow(sum, 1.0 / nu);
}

double ball_integral(const ScalarField& f, const BallRule& rule, VolumeMeasure measure) {
  return rule.integrate([&](const Point& x) { return f(x); }, measure);
}

BallRule green_ball_rule(int n, const QuadratureOrders& orders) {
  return BallRule::for_dimension(n, orders, n == 2);
}

MeanValueSides mean_value_sides(const ScalarField& g, const ScalarField& laplacian, double r,
                                const BallRule& rule) {
  const int n = rule.dimension();
  if (!(r > 0.0) || r > 1.0) fail(ErrorKind::Domain, "mean-value identity needs 0 < r <= 1");
  MeanValueSides out;
  out.lhs = rule.sphere().integrate([&](const Point& z) { return g(Point(r * z)); });
  // int_{B_r} h(x) G_n(x, r) dV_N(x) = r^n int_B h(r y) G_n(r y, r) dV_N(y)
  double vol = 0.0;
  const auto& radii = rule.radial_nodes();
  const auto& rw = rule.radial_weights();
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double s = r * radii[i];
    const double shell = rule.sphere().integrate([&](const Point& z) { return laplacian(Point(s * z)); });
    vol += rw[i] * radial_green(n, s, r) * shell;
  }
  out.rhs = g(Point::Zero(n)) + std::pow(r, n) * vol;
  return out;
}

MeanValueSides mean_value_sides(const ScalarField& g, double r, const BallRule& rule) {
  const ScalarField lap(g.dimension(), [&g](const Point& x) { return g.laplacian(x); }, "laplacian");
  return mean_value_sides(g, lap, r, rule);
}

double mean_value_identity_residual(const ScalarField& g, double r, const QuadratureOrders& orders) {
  return mean_value_sides(g, r, green_ball_rule(g.dimension(), orders)).residual();
}

double green_potential_direct(const ScalarField& source, const Point& w,
                              const DirectGreenOptions& options) {
  const int n = source.dimension();
  if (n != 2 && n != 3) fail(ErrorKind::Configuration, "green_potential_direct ships n in {2,3}");
  const double wn = w.norm();
  if (wn >= 1.0) fail(ErrorKind::Domain, "green_potential_direct: w outside the unit ball");
  const SphereRule dirs = n == 2 ? SphereRule::circle(options.directions)
                                 : SphereRule::product(options.polar, options.azimuth);
  const GaussRule gl = gauss_legendre(options.radial_nodes, 0.0, 1.0);
  const double w2 = wn * wn;
  // dx = rho^{n-1} d rho dS(theta) and |S^{n-1}| = n V(B^n)
  const double surface = n * unit_ball_volume(n);
  double total = 0.0;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    const Point& th = dirs.node(k);
    const double b = w.dot(th);
    const double rho_max = -b + std::sqrt(b * b + 1.0 - w2);
    double ray = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double t = gl.nodes[i];
      // rho = rho_max t^3 in the plane flattens the t log t endpoint behaviour
      const double rho = n == 2 ? rho_max * t * t * t : rho_max * t;
      const double jac = n == 2 ? 3.0 * rho_max * t * t : rho_max;
      const Point x = w + rho * th;
      const double image_sq = 1.0 + w2 * x.squaredNorm() - 2.0 * w.dot(x);
      double kern_times_measure;
      if (n == 2) {
        kern_times_measure = rho * (0.5 * std::log(image_sq) - std::log(rho)) / (2.0 * std::numbers::pi);
      } else {
        kern_times_measure = (rho - rho * rho / std::sqrt(image_sq)) / (3.0 * unit_ball_volume(3));
      }
      ray += gl.weights[i] * jac * kern_times_measure * source(x);
    }
    total += dirs.weight(k) * ray;
  }
  return surface * total;
}

}  // namespace ellab
