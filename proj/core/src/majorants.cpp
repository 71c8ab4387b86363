#include "ellab/majorants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ellab {

Majorant Majorant::power(double gamma) {
  if (!(gamma > 0.0)) fail(ErrorKind::Configuration, "power majorant needs gamma > 0");
  Majorant m;
  m.kind_ = Kind::Power;
  m.gamma_ = gamma;
  return m;
}

Majorant Majorant::table(std::vector<double> t, std::vector<double> values) {
  if (t.size() < 2 || t.size() != values.size()) fail(ErrorKind::Configuration, "majorant table needs >= 2 matching points");
  if (t.front() != 0.0) fail(ErrorKind::Configuration, "majorant table must start at t = 0");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) fail(ErrorKind::Configuration, "majorant table abscissae must increase");
  }
  Majorant m;
  m.kind_ = Kind::Table;
  m.t_ = std::move(t);
  m.v_ = std::move(values);
  return m;
}

double Majorant::operator()(double t) const {
  if (t < 0.0) fail(ErrorKind::Domain, "majorant evaluated at negative t");
  if (kind_ == Kind::Power) return std::pow(t, gamma_);
  if (t >= t_.back()) return v_.back() * t / t_.back();
  const auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double a = (t - t_[i]) / (t_[i + 1] - t_[i]);
  return (1.0 - a) * v_[i] + a * v_[i + 1];
}

std::string Majorant::name() const {
  std::ostringstream os;
  if (kind_ == Kind::Power) {
    os << "t^" << gamma_;
  } else {
    os << "table(" << t_.size() << " points)";
  }
  return os.str();
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * i / std::max(1, count - 1));
  return g;
}

namespace {
constexpr double kRelTol = 1e-12;

bool nonincreasing(double prev, double next) { return next <= prev + kRelTol * std::abs(prev); }
}  // namespace

bool validate_majorant(const Majorant& omega, const std::vector<double>& grid) {
  if (std::abs(omega(0.0)) > 0.0) return false;
  double prev_v = 0.0;
  double prev_ratio = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    if (!(t > 0.0)) continue;
    const double v = omega(t);
    if (!(v >= 0.0) || !std::isfinite(v)) return false;
    if (v < prev_v - kRelTol * std::abs(prev_v)) return false;
    const double ratio = v / t;
    if (std::isfinite(prev_ratio) && !nonincreasing(prev_ratio, ratio)) return false;
    prev_v = v;
    prev_ratio = ratio;
  }
  return true;
}

double phi(const BlochWeight& w, double d) {
  if (!(d > 0.0) || d > 1.0) fail(ErrorKind::Domain, "Bloch weight needs boundary distance in (0, 1]");
  if (!(w.alpha > 0.0)) fail(ErrorKind::Configuration, "Bloch weight needs alpha > 0");
  return std::pow(d, w.alpha) * std::pow(1.0 - std::log(d), w.beta);
}

double phi_radius(const BlochWeight& w, double r) { return phi(w, 1.0 - r); }

bool check_phi_monotone(const BlochWeight& w, const Majorant& omega, const std::vector<double>& grid) {
  if (!validate_majorant(omega, log_grid(1e-6, 1.0, 200))) fail(ErrorKind::Configuration, "check_phi_monotone: invalid majorant");
  double prev_phi = std::numeric_limits<double>::infinity();
  double prev_ratio = std::numeric_limits<double>::infinity();
  for (double r : grid) {
    const double p = phi_radius(w, r);
    const double ratio = p / omega(p);
    if (std::isfinite(prev_phi)) {
      if (!nonincreasing(prev_phi, p) || !nonincreasing(prev_ratio, ratio)) return false;
    }
    prev_phi = p;
    prev_ratio = ratio;
  }
  return true;
}

std::vector<double> open_unit_grid(int count) {
  std::vector<double> g(count);
  for (int i = 0; i < count; ++i) g[i] = (i + 1.0) / (count + 1.0);
  return g;
}

}  // namespace ellab
