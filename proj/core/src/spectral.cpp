#include "ellab/spectral.hpp"
#include "ellab/error.hpp"
#include "ellab/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace ellab {

AngularBasis AngularBasis::circle(int count) {
  if (count < 4) fail(ErrorKind::Configuration, "angular basis needs at least 4 circle nodes");
  AngularBasis b;
  b.dim_ = 2;
  const int mmax = (count - 1) / 2;
  b.max_degree_ = mmax;
  b.degree_.push_back(0);
  b.order_.push_back(0);
  for (int m = 1; m <= mmax; ++m) {
    b.degree_.push_back(m);
    b.order_.push_back(m);
    b.degree_.push_back(m);
    b.order_.push_back(-m);
  }
  for (int a = 0; a < count; ++a) {
    const double t = 2.0 * std::numbers::pi * a / count;
    b.nodes_.push_back(make_point({std::cos(t), std::sin(t)}));
  }
  const int K = b.mode_count();
  b.synthesis_.resize(K, count);
  for (int a = 0; a < count; ++a) b.synthesis_.col(a) = b.evaluate(b.nodes_[a]);
  b.analysis_ = b.synthesis_.transpose() / count;
  return b;
}

std::vector<double> normalized_legendre(int lmax, double x) {
  std::vector<double> p(static_cast<std::size_t>((lmax + 1) * (lmax + 2) / 2), 0.0);
  auto idx = [](int l, int m) { return static_cast<std::size_t>(l * (l + 1) / 2 + m); };
  const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
  p[idx(0, 0)] = 1.0;
  for (int m = 1; m <= lmax; ++m) {
    const double f = m == 1 ? std::sqrt(3.0) : std::sqrt((2.0 * m + 1.0) / (2.0 * m));
    p[idx(m, m)] = f * s * p[idx(m - 1, m - 1)];
  }
  for (int m = 0; m < lmax; ++m) {
    p[idx(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * p[idx(m, m)];
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((2.0 * l - 1.0) * (2.0 * l + 1.0) / ((l - m) * static_cast<double>(l + m)));
      const double b = std::sqrt((2.0 * l + 1.0) * (l + m - 1.0) * (l - m - 1.0) /
                                 ((l - m) * static_cast<double>(l + m) * (2.0 * l - 3.0)));
      p[idx(l, m)] = a * x * p[idx(l - 1, m)] - b * p[idx(l - 2, m)];
    }
  }
  return p;
}

AngularBasis AngularBasis::sphere(int polar, int azimuth) {
  if (polar < 2 || azimuth < 4) fail(ErrorKind::Configuration, "angular basis: sphere grid too small");
  AngularBasis b;
  b.dim_ = 3;
  const int lmax = std::min(polar - 1, azimuth / 2 - 1);
  b.max_degree_ = lmax;
  for (int l = 0; l <= lmax; ++l) {
    b.degree_.push_back(l);
    b.order_.push_back(0);
    for (int m = 1; m <= l; ++m) {
      b.degree_.push_back(l);
      b.order_.push_back(m);
      b.degree_.push_back(l);
      b.order_.push_back(-m);
    }
  }
  const SphereRule rule = SphereRule::product(polar, azimuth);
  for (std::size_t a = 0; a < rule.size(); ++a) b.nodes_.push_back(rule.node(a));
  const int K = b.mode_count();
  const int A = b.node_count();
  b.synthesis_.resize(K, A);
  b.analysis_.resize(A, K);
  for (int a = 0; a < A; ++a) {
    b.synthesis_.col(a) = b.evaluate(b.nodes_[a]);
    b.analysis_.row(a) = rule.weight(a) * b.synthesis_.col(a).transpose();
  }
  return b;
}

Eigen::VectorXd AngularBasis::evaluate(const Point& direction) const {
  Eigen::VectorXd out(mode_count());
  if (dim_ == 2) {
    const double t = std::atan2(direction[1], direction[0]);
    for (int k = 0; k < mode_count(); ++k) {
      const int m = order_[k];
      out[k] = m == 0 ? 1.0 : (m > 0 ? std::sqrt(2.0) * std::cos(m * t) : std::sqrt(2.0) * std::sin(-m * t));
    }
    return out;
  }
  const double z = std::clamp(direction[2] / std::max(direction.norm(), 1e-300), -1.0, 1.0);
  const double phi = std::atan2(direction[1], direction[0]);
  const std::vector<double> p = normalized_legendre(max_degree_, z);
  for (int k = 0; k < mode_count(); ++k) {
    const int l = degree_[k];
    const int m = std::abs(order_[k]);
    const double plm = p[static_cast<std::size_t>(l * (l + 1) / 2 + m)];
    out[k] = order_[k] == 0 ? plm : (order_[k] > 0 ? plm * std::cos(m * phi) : plm * std::sin(m * phi));
  }
  return out;
}

double real_harmonic(int dim, int degree, int order, const Point& direction) {
  if (std::abs(order) > degree || degree < 0) fail(ErrorKind::Configuration, "harmonic order exceeds degree");
  const double phi = std::atan2(direction[1], direction[0]);
  const int m = std::abs(order);
  const double trig = order == 0 ? 1.0 : (order > 0 ? std::cos(m * phi) : std::sin(m * phi));
  if (dim == 2) {
    if (degree != m) fail(ErrorKind::Configuration, "circle harmonics have |order| == degree");
    return order == 0 ? 1.0 : std::sqrt(2.0) * trig;
  }
  if (dim != 3) fail(ErrorKind::Configuration, "harmonics ship n in {2,3}");
  const double z = std::clamp(direction[2] / std::max(direction.norm(), 1e-300), -1.0, 1.0);
  const std::vector<double> p = normalized_legendre(degree, z);
  return p[static_cast<std::size_t>(degree * (degree + 1) / 2 + m)] * trig;
}

// ---------------------------------------------------------------------------

RadialGreenOperator::RadialGreenOperator(int dim, int radial_nodes) : dim_(dim) {
  if (dim != 2 && dim != 3) fail(ErrorKind::Configuration, "radial Green operator ships n in {2,3}");
  if (radial_nodes < 4) fail(ErrorKind::Configuration, "radial Green operator needs at least 4 nodes");
  const GaussRule ref = gauss_legendre(radial_nodes);
  nodes_.resize(radial_nodes);
  bary_.resize(radial_nodes);
  for (int j = 0; j < radial_nodes; ++j) {
    nodes_[j] = 0.5 * (ref.nodes[j] + 1.0);
    // barycentric weights of Gauss-Legendre points
    bary_[j] = (j % 2 == 0 ? 1.0 : -1.0) * std::sqrt((1.0 - ref.nodes[j] * ref.nodes[j]) * ref.weights[j]);
  }
}

double RadialGreenOperator::kernel(int degree, double s, double t) const {
  const double lo = std::min(s, t);
  const double hi = std::max(s, t);
  if (dim_ == 2) {
    if (degree == 0) return std::log(1.0 / hi);
    return (std::pow(lo / hi, degree) - std::pow(s * t, degree)) / (2.0 * degree);
  }
  return (std::pow(lo, degree) / std::pow(hi, degree + 1) - std::pow(s * t, degree)) / (2.0 * degree + 1.0);
}

Eigen::VectorXd RadialGreenOperator::interpolation_row(double s) const {
  const int N = size();
  Eigen::VectorXd row(N);
  double denom = 0.0;
  for (int j = 0; j < N; ++j) {
    const double diff = s - nodes_[j];
    if (diff == 0.0) {
      row.setZero();
      row[j] = 1.0;
      return row;
    }
    row[j] = bary_[j] / diff;
    denom += row[j];
  }
  return row / denom;
}

Eigen::MatrixXd RadialGreenOperator::build(int degree) const {
  const int N = size();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(N, N);
  const GaussRule panel = gauss_legendre(48);
  auto accumulate = [&](int i, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    for (std::size_t q = 0; q < panel.nodes.size(); ++q) {
      const double t = mid + half * panel.nodes[q];
      const double w = half * panel.weights[q] * kernel(degree, nodes_[i], t) * std::pow(t, dim_ - 1);
      W.row(i) += w * interpolation_row(t).transpose();
    }
  };
  for (int i = 0; i < N; ++i) {
    const double s = nodes_[i];
    // below s the kernel is a polynomial in t; above s it carries negative powers, so grade geometrically
    accumulate(i, 0.0, s);
    double a = s;
    while (a < 1.0) {
      const double b = std::min(1.0, 2.0 * a);
      accumulate(i, a, b);
      a = b;
    }
  }
  return W;
}

const Eigen::MatrixXd& RadialGreenOperator::matrix(int degree) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = cache_.find(degree);
  if (it == cache_.end()) it = cache_.emplace(degree, std::make_unique<Eigen::MatrixXd>(build(degree))).first;
  return *it->second;
}

}  // namespace ellab
