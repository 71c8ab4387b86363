#pragma once

#include "ellab/types.hpp"

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace ellab {

/// Real orthonormal angular basis on S^{n-1} (normalized measure) with a
/// matching node set: Fourier modes on the circle, real spherical harmonics on
/// the 2-sphere. Each basis function carries its harmonic degree.
class AngularBasis {
 public:
  /// `count` equispaced angles; modes 1, sqrt2 cos(m t), sqrt2 sin(m t) for m < count/2.
  static AngularBasis circle(int count);
  /// Gauss-Legendre in cos(theta) times `azimuth` uniform angles; harmonics of
  /// degree l <= min(polar - 1, azimuth/2 - 1).
  static AngularBasis sphere(int polar, int azimuth);

  int dimension() const { return dim_; }
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int mode_count() const { return static_cast<int>(degree_.size()); }
  int max_degree() const { return max_degree_; }
  const Point& node(int a) const { return nodes_[a]; }
  int degree(int k) const { return degree_[k]; }

  /// Coefficients from nodal values (row vectors in, row vectors out).
  const Eigen::MatrixXd& analysis() const { return analysis_; }    // nodes x modes
  const Eigen::MatrixXd& synthesis() const { return synthesis_; }  // modes x nodes

  /// Basis values at an arbitrary unit vector.
  Eigen::VectorXd evaluate(const Point& direction) const;

 private:
  int dim_ = 2;
  int max_degree_ = 0;
  std::vector<Point> nodes_;
  std::vector<int> degree_;
  std::vector<int> order_;  // azimuthal order m, signed: negative for sine modes
  Eigen::MatrixXd analysis_, synthesis_;
};

/// Fully normalized associated Legendre values Pbar_lm(x) for 0 <= m <= l <= lmax,
/// with mean of (Pbar_lm cos m phi)^2 over the sphere equal to 1.
/// Stored at index l (l + 1) / 2 + m.
std::vector<double> normalized_legendre(int lmax, double x);

/// One basis function by (degree, order): order > 0 is the cosine mode, order < 0
/// the sine mode, with the same normalization as AngularBasis.
double real_harmonic(int dim, int degree, int order, const Point& direction);

/// Product-integration matrices for the Green operator of the unit ball acting
/// on one angular degree: (W c)(s_i) = int_0^1 k_deg(s_i, t) c(t) t^{n-1} dt
/// where c is the polynomial interpolating values at the radial Gauss nodes.
/// k_0 = log(1/max) and k_m = [(min/max)^m - (st)^m] / (2m) in the plane;
/// k_l = [min^l / max^{l+1} - (st)^l] / (2l + 1) in space. Matrices are built
/// lazily and cached per degree.
class RadialGreenOperator {
 public:
  RadialGreenOperator(int dim, int radial_nodes);

  int dimension() const { return dim_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const Eigen::MatrixXd& matrix(int degree) const;

  /// Lagrange basis values at s for the radial nodes (barycentric form).
  Eigen::VectorXd interpolation_row(double s) const;

  double kernel(int degree, double s, double t) const;

 private:
  Eigen::MatrixXd build(int degree) const;

  int dim_;
  std::vector<double> nodes_;
  std::vector<double> bary_;
  mutable std::mutex mutex_;
  mutable std::map<int, std::unique_ptr<Eigen::MatrixXd>> cache_;
};

}  // namespace ellab
