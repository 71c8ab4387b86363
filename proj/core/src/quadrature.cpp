#include "ellab/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace ellab {

GaussRule gauss_legendre(int count) {
  if (count < 1) fail(ErrorKind::Configuration, "gauss_legendre: count must be positive");
  GaussRule rule;
  rule.nodes.assign(count, 0.0);
  rule.weights.assign(count, 0.0);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= count; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = count * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[count - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[count - 1 - i] = w;
  }
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  return rule;
}

GaussRule gauss_legendre(int count, double a, double b) {
  GaussRule rule = gauss_legendre(count);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (int i = 0; i < count; ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

SphereRule SphereRule::circle(int count) {
  if (count < 3) fail(ErrorKind::Configuration, "circle rule needs at least 3 nodes");
  SphereRule rule;
  rule.dim_ = 2;
  rule.degree_ = count - 1;
  rule.polar_ = 1;
  rule.azimuth_ = count;
  rule.polar_cos_ = {0.0};
  rule.polar_w_ = {1.0};
  rule.nodes_.reserve(count);
  rule.weights_.assign(count, 1.0 / count);
  for (int j = 0; j < count; ++j) {
    const double t = 2.0 * std::numbers::pi * j / count;
    rule.nodes_.push_back(make_point({std::cos(t), std::sin(t)}));
  }
  return rule;
}

SphereRule SphereRule::product(int polar, int azimuth) {
  if (polar < 1 || azimuth < 3) fail(ErrorKind::Configuration, "product sphere rule: bad orders");
  SphereRule rule;
  rule.dim_ = 3;
  rule.degree_ = std::min(2 * polar - 1, azimuth - 1);
  rule.polar_ = polar;
  rule.azimuth_ = azimuth;
  const GaussRule gl = gauss_legendre(polar);
  rule.polar_cos_ = gl.nodes;
  rule.polar_w_.resize(polar);
  rule.nodes_.reserve(static_cast<std::size_t>(polar) * azimuth);
  rule.weights_.reserve(static_cast<std::size_t>(polar) * azimuth);
  for (int k = 0; k < polar; ++k) {
    const double c = gl.nodes[k];
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    rule.polar_w_[k] = 0.5 * gl.weights[k];
    for (int j = 0; j < azimuth; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / azimuth;
      rule.nodes_.push_back(make_point({s * std::cos(phi), s * std::sin(phi), c}));
      rule.weights_.push_back(0.5 * gl.weights[k] / azimuth);
    }
  }
  // remove the rounding drift of the Gauss-Legendre weights so the rule is exactly normalized
  long double total = 0.0L;
  for (double w : rule.weights_) total += w;
  for (double& w : rule.weights_) w = static_cast<double>(w / total);
  return rule;
}

SphereRule SphereRule::for_dimension(int dim, const QuadratureOrders& orders) {
  switch (dim) {
    case 2:
      return circle(orders.circle_nodes);
    case 3:
      return product(orders.sphere_polar, orders.sphere_azimuth);
    default:
      fail(ErrorKind::Configuration,
           "sphere quadrature is shipped for n in {2,3}, got n=" + std::to_string(dim));
  }
}

BallRule::BallRule(int dim, int radial_nodes, SphereRule sphere, bool graded)
    : dim_(dim), sphere_(std::move(sphere)) {
  if (sphere_.dimension() != dim) fail(ErrorKind::Configuration, "BallRule: sphere rule dimension mismatch");
  const GaussRule gl = gauss_legendre(radial_nodes, 0.0, 1.0);
  radii_.resize(radial_nodes);
  radial_w_.resize(radial_nodes);
  for (int i = 0; i < radial_nodes; ++i) {
    const double t = gl.nodes[i];
    const double s = graded ? t * t : t;
    const double jac = graded ? 2.0 * t : 1.0;
    radii_[i] = s;
    radial_w_[i] = gl.weights[i] * jac * dim * std::pow(s, dim - 1);
  }
}

BallRule BallRule::for_dimension(int dim, const QuadratureOrders& orders, bool graded) {
  return BallRule(dim, orders.radial_nodes, SphereRule::for_dimension(dim, orders), graded);
}

}  // namespace ellab
