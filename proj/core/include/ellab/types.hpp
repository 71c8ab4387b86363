#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>

namespace ellab {

/// Largest supported ambient dimension. Points live on the stack.
inline constexpr int kMaxDim = 8;

using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Vector = Point;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;

inline Point make_point(std::initializer_list<double> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) p[i++] = c;
  return p;
}

inline Point zero_point(int dim) { return Point::Zero(dim); }

inline Point unit_vector(int dim, int axis) {
  Point p = Point::Zero(dim);
  p[axis] = 1.0;
  return p;
}

/// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace ellab
