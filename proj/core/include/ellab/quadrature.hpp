#pragma once

#include "ellab/error.hpp"
#include "ellab/types.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace ellab {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int count);

/// Gauss-Legendre mapped to [a, b].
GaussRule gauss_legendre(int count, double a, double b);

/// Quadrature orders shared by the sphere and ball rules; configurable from a run config.
struct QuadratureOrders {
  int circle_nodes = 512;
  int sphere_polar = 48;
  int sphere_azimuth = 96;
  int radial_nodes = 64;
};

/// Rule for the normalized surface measure on the unit sphere S^{n-1}, n in {2, 3}.
/// Weights are positive and sum to 1.
class SphereRule {
 public:
  /// Trapezoid rule with `count` equispaced angles (n = 2).
  static SphereRule circle(int count);
  /// Gauss-Legendre in cos(theta) times uniform azimuth (n = 3).
  static SphereRule product(int polar, int azimuth);
  static SphereRule for_dimension(int dim, const QuadratureOrders& orders = {});

  int dimension() const { return dim_; }
  std::size_t size() const { return weights_.size(); }
  const Point& node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  /// Highest total polynomial degree integrated exactly.
  int exactness_degree() const { return degree_; }

  /// Tensor structure: n = 2 has polar_count() == 1.
  int polar_count() const { return polar_; }
  int azimuth_count() const { return azimuth_; }
  /// Node index for (polar k, azimuth j); only meaningful for product rules.
  std::size_t index(int k, int j) const { return static_cast<std::size_t>(k) * azimuth_ + j; }
  /// cos(theta_k) and the normalized polar weight (sums to 1 over k).
  const std::vector<double>& polar_cosines() const { return polar_cos_; }
  const std::vector<double>& polar_weights() const { return polar_w_; }

  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(nodes_[i]);
    return sum;
  }

 private:
  int dim_ = 2;
  int degree_ = 0;
  int polar_ = 1;
  int azimuth_ = 0;
  std::vector<Point> nodes_;
  std::vector<double> weights_;
  std::vector<double> polar_cos_;
  std::vector<double> polar_w_;
};

enum class VolumeMeasure { Normalized, Lebesgue };

/// Radial Gauss-Legendre on [0, 1] composed with a SphereRule.
///
/// Radial weights already carry the n s^{n-1} Jacobian, so under the normalized
/// measure the constant 1 integrates to 1. No node sits at s = 0, which keeps
/// integrable point singularities of radial Green kernels away from the rule.
/// `graded` maps s = t^2 before applying Gauss-Legendre; use it for
/// logarithmic kernels where plain Gauss-Legendre converges only algebraically.
class BallRule {
 public:
  BallRule(int dim, int radial_nodes, SphereRule sphere, bool graded = false);
  static BallRule for_dimension(int dim, const QuadratureOrders& orders = {}, bool graded = false);

  int dimension() const { return dim_; }
  const SphereRule& sphere() const { return sphere_; }
  const std::vector<double>& radial_nodes() const { return radii_; }
  const std::vector<double>& radial_weights() const { return radial_w_; }
  std::size_t size() const { return radii_.size() * sphere_.size(); }

  /// Integral of f over B(center, radius).
  template <class F>
  double integrate(F&& f, const Point& center, double radius,
                   VolumeMeasure measure = VolumeMeasure::Normalized) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < radii_.size(); ++i) {
      const double s = radius * radii_[i];
      double shell = 0.0;
      for (std::size_t j = 0; j < sphere_.size(); ++j) {
        shell += sphere_.weight(j) * f(Point(center + s * sphere_.node(j)));
      }
      sum += radial_w_[i] * shell;
    }
    if (measure == VolumeMeasure::Lebesgue) sum *= unit_ball_volume(dim_) * std::pow(radius, dim_);
    return sum;
  }

  template <class F>
  double integrate(F&& f, VolumeMeasure measure = VolumeMeasure::Normalized) const {
    return integrate(std::forward<F>(f), Point::Zero(dim_), 1.0, measure);
  }

 private:
  int dim_;
  SphereRule sphere_;
  std::vector<double> radii_;
  std::vector<double> radial_w_;
};

}  // namespace ellab
