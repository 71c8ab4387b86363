#pragma once

#include "ellab/error.hpp"

#include <string>
#include <vector>

namespace ellab {

/// omega(t) on [0, inf): either t^gamma or a table with linear interpolation.
/// Past the last table abscissa omega(t)/t is held constant.
class Majorant {
 public:
  static Majorant power(double gamma);
  static Majorant identity() { return power(1.0); }
  static Majorant sqrt() { return power(0.5); }
  /// Abscissae must be strictly increasing and start at 0.
  static Majorant table(std::vector<double> t, std::vector<double> values);

  double operator()(double t) const;
  bool is_power() const { return kind_ == Kind::Power; }
  double gamma() const { return gamma_; }
  std::string name() const;

 private:
  enum class Kind { Power, Table };
  Kind kind_ = Kind::Power;
  double gamma_ = 1.0;
  std::vector<double> t_, v_;
};

/// Grid of `count` log-spaced abscissae in [lo, hi].
std::vector<double> log_grid(double lo, double hi, int count);

/// omega(0) = 0, omega nondecreasing and omega(t)/t nonincreasing on the grid,
/// each up to a relative tolerance of 1e-12. Negative values make it invalid.
bool validate_majorant(const Majorant& omega, const std::vector<double>& grid);

/// phi(x) = d^alpha (1 - log d)^beta as a function of the boundary distance d.
struct BlochWeight {
  double alpha = 1.0;
  double beta = 0.0;
};

double phi(const BlochWeight& w, double d);
/// phi at boundary distance 1 - r.
double phi_radius(const BlochWeight& w, double r);

/// r -> phi(1 - r) and r -> phi/omega(phi) both nonincreasing on `grid` (values in (0, 1)).
bool check_phi_monotone(const BlochWeight& w, const Majorant& omega, const std::vector<double>& grid);

/// `count` equispaced radii strictly inside (0, 1).
std::vector<double> open_unit_grid(int count);

}  // namespace ellab
