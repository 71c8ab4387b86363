#pragma once

#include "ellab/error.hpp"
#include "ellab/types.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace ellab {

using ValueFn = std::function<double(const Point&)>;
using GradientFn = std::function<Vector(const Point&)>;
using HessianFn = std::function<Matrix(const Point&)>;

/// Finite-difference controls. The step is relative: h = rel_step * max(1, |x|).
struct DiffOptions {
  double rel_step = 1e-4;
  double min_step = 1e-8;
};

/// Real-valued field on a subset of R^n with optional analytic derivatives.
///
/// `support_radius` bounds where the evaluator may be called; finite
/// differences shrink their step to stay inside it and switch to Richardson
/// extrapolation when they do.
class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(int dim, ValueFn value, std::string name = {},
              double support_radius = std::numeric_limits<double>::infinity());

  ScalarField& with_gradient(GradientFn g);
  ScalarField& with_hessian(HessianFn h);
  ScalarField& with_diff_options(DiffOptions o);

  int dimension() const { return dim_; }
  const std::string& name() const { return name_; }
  double support_radius() const { return support_; }
  bool has_gradient() const { return static_cast<bool>(grad_); }
  bool has_hessian() const { return static_cast<bool>(hess_); }
  bool valid() const { return static_cast<bool>(value_); }

  double operator()(const Point& x) const;
  Vector gradient(const Point& x) const;
  Matrix hessian(const Point& x) const;
  double laplacian(const Point& x) const { return hessian(x).trace(); }

  /// Central-difference versions regardless of analytic availability.
  Vector fd_gradient(const Point& x) const;
  Matrix fd_hessian(const Point& x) const;

 private:
  double step_at(const Point& x, bool& shrunk) const;

  int dim_ = 0;
  ValueFn value_;
  GradientFn grad_;
  HessianFn hess_;
  std::string name_;
  double support_ = std::numeric_limits<double>::infinity();
  DiffOptions diff_;
};

/// Vector-valued field given componentwise.
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(std::vector<ScalarField> components);

  int dimension() const { return dim_; }
  std::size_t size() const { return comps_.size(); }
  const ScalarField& operator[](std::size_t k) const { return comps_[k]; }
  const std::vector<ScalarField>& components() const { return comps_; }
  Point operator()(const Point& x) const;
  /// Jacobian with rows = components.
  Matrix jacobian(const Point& x) const;

 private:
  int dim_ = 0;
  std::vector<ScalarField> comps_;
};

Vector gradient(const ScalarField& f, const Point& x);
Matrix hessian(const ScalarField& f, const Point& x);
double laplacian(const ScalarField& f, const Point& x);
double hessian_frobenius_sq(const ScalarField& f, const Point& x);

/// Gradient of the Laplacian, by central differences of the Hessian trace.
/// O(h^2) when the Hessian is analytic, roughly O(h) otherwise.
Vector laplacian_gradient(const ScalarField& f, const Point& x);

/// Largest singular value.
double operator_norm(const Matrix& a);

struct HeinzData {
  ScalarField a1, a2, a3;  // empty fields read as 0
  double b1 = 0.0;
  double b2 = 0.0;
  void validate() const;
};

/// a1|grad u|^b1 + a2|u|^b2 + a3 - |Lap u|; nonnegative iff the inequality holds at x.
double heinz_residual(const ScalarField& u, const HeinzData& data, const Point& x);

/// phi = (Lap p)/p - q/p^2, the potential in E_{p,q} = div(p^2 grad) + q = p (Lap - phi) p.
double factorize_elliptic(const ScalarField& p, const ScalarField& q, const Point& x);

/// div(p^2 grad u) + q u evaluated directly minus p (Lap - phi)(p u).
double factorization_defect(const ScalarField& p, const ScalarField& q, const ScalarField& u,
                            const Point& x);

// ---------------------------------------------------------------------------
// Field catalog

/// Sparse multivariate polynomial with exact derivatives.
class Polynomial {
 public:
  struct Term {
    double coef;
    std::vector<int> powers;
  };

  explicit Polynomial(int dim) : dim_(dim) {}
  Polynomial(int dim, std::vector<Term> terms);

  static Polynomial monomial(int dim, const std::vector<int>& powers, double coef = 1.0);
  /// All monomials x^a with |a| <= degree, in graded lexicographic order.
  static std::vector<Polynomial> monomials_up_to(int dim, int degree);

  int dimension() const { return dim_; }
  int degree() const;
  const std::vector<Term>& terms() const { return terms_; }

  double operator()(const Point& x) const;
  Polynomial derivative(int axis) const;
  Polynomial laplacian() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator*(double c) const;

  std::string to_string() const;
  ScalarField field() const;

 private:
  void compact();
  int dim_;
  std::vector<Term> terms_;
};

/// F(|x|^2) for a power series F(q) = sum c_k q^k; exact derivatives via
/// grad = 2F'x, H = 2F' I + 4F'' x x^T.
class RadialSeries {
 public:
  RadialSeries(int dim, std::vector<double> coefs, std::string name);
  /// Coefficients are generated until they are negligible for q <= q_max.
  static RadialSeries from_generator(int dim, const std::function<double(int)>& coef_k,
                                     double q_max, std::string name);

  double value(double q) const;
  double d1(double q) const;
  double d2(double q) const;
  ScalarField field(double support = std::numeric_limits<double>::infinity()) const;
  RadialSeries scaled(double c) const;

 private:
  int dim_;
  std::vector<double> c_;
  std::string name_;
};

/// sinh(a s)/(a s) in n = 3 and I0(a s) in n = 2 (a = sqrt(lambda)); both solve
/// Lap u = lambda u. Other n use the general radial series
/// sum (lambda q / 4)^k / (k! (n/2)_k).
RadialSeries yukawa_radial(int dim, double lambda);

double bessel_i0(double x);

ScalarField constant_field(int dim, double c);
ScalarField coordinate_field(int dim, int axis);
ScalarField norm_sq_field(int dim);
/// exp(sqrt(lambda) x_axis): a plane-wave Yukawa solution.
ScalarField plane_wave_field(int dim, double lambda, int axis = 0);
/// sinh(a x_axis)/a (x_axis when a = 0): odd Yukawa solution with lambda = a^2.
ScalarField sinh_coordinate_field(int dim, double a, int axis);
/// Re log(1/(1-z)) on the unit disk.
ScalarField log_kernel_field();
/// sqrt(1 - |x|) restricted to the closed unit ball.
ScalarField sqrt_distance_field(int dim);
ScalarField product(const ScalarField& f, double c);

}  // namespace ellab
