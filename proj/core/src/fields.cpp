#include "ellab/fields.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace ellab {

ScalarField::ScalarField(int dim, ValueFn value, std::string name, double support_radius)
    : dim_(dim), value_(std::move(value)), name_(std::move(name)), support_(support_radius) {
  if (dim < 1 || dim > kMaxDim) fail(ErrorKind::Configuration, "ScalarField: unsupported dimension");
}

ScalarField& ScalarField::with_gradient(GradientFn g) {
  grad_ = std::move(g);
  return *this;
}

ScalarField& ScalarField::with_hessian(HessianFn h) {
  hess_ = std::move(h);
  return *this;
}

ScalarField& ScalarField::with_diff_options(DiffOptions o) {
  diff_ = o;
  return *this;
}

double ScalarField::operator()(const Point& x) const {
  const double v = value_(x);
  if (std::isnan(v)) {
    std::ostringstream os;
    os << "field '" << name_ << "' returned NaN at (" << x.transpose() << ")";
    fail(ErrorKind::Evaluation, os.str());
  }
  return v;
}

double ScalarField::step_at(const Point& x, bool& shrunk) const {
  const double norm = x.norm();
  double h = diff_.rel_step * std::max(1.0, norm);
  shrunk = false;
  if (std::isfinite(support_)) {
    const double margin = support_ - norm;
    if (margin <= 0.0) fail(ErrorKind::Domain, "finite difference outside the field support");
    if (margin < 2.0 * h) {
      h = margin / 3.0;
      shrunk = true;
    }
    if (h < diff_.min_step) fail(ErrorKind::Domain, "finite-difference step below minimum near the support boundary");
  }
  return h;
}

namespace {

Vector central_gradient(const ScalarField& f, const Point& x, double h) {
  const int n = f.dimension();
  Vector g(n);
  for (int i = 0; i < n; ++i) {
    Point xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

Matrix central_hessian(const ScalarField& f, const Point& x, double h) {
  const int n = f.dimension();
  Matrix H(n, n);
  const double f0 = f(x);
  for (int i = 0; i < n; ++i) {
    Point xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    H(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      Point pp = x, pm = x, mp = x, mm = x;
      pp[i] += h, pp[j] += h;
      pm[i] += h, pm[j] -= h;
      mp[i] -= h, mp[j] += h;
      mm[i] -= h, mm[j] -= h;
      H(i, j) = H(j, i) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * h * h);
    }
  }
  return H;
}

Matrix gradient_jacobian(const ScalarField& f, const Point& x, double h) {
  const int n = f.dimension();
  Matrix H(n, n);
  for (int j = 0; j < n; ++j) {
    Point xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    H.col(j) = (f.gradient(xp) - f.gradient(xm)) / (2.0 * h);
  }
  return 0.5 * (H + H.transpose());
}

}  // namespace

Vector ScalarField::fd_gradient(const Point& x) const {
  bool shrunk = false;
  const double h = step_at(x, shrunk);
  if (!shrunk) return central_gradient(*this, x, h);
  return (4.0 * central_gradient(*this, x, 0.5 * h) - central_gradient(*this, x, h)) / 3.0;
}

Matrix ScalarField::fd_hessian(const Point& x) const {
  bool shrunk = false;
  const double h = step_at(x, shrunk);
  if (!shrunk) return central_hessian(*this, x, h);
  return (4.0 * central_hessian(*this, x, 0.5 * h) - central_hessian(*this, x, h)) / 3.0;
}

Vector ScalarField::gradient(const Point& x) const {
  if (grad_) return grad_(x);
  return fd_gradient(x);
}

Matrix ScalarField::hessian(const Point& x) const {
  if (hess_) return hess_(x);
  if (grad_) {
    bool shrunk = false;
    const double h = step_at(x, shrunk);
    if (!shrunk) return gradient_jacobian(*this, x, h);
    return (4.0 * gradient_jacobian(*this, x, 0.5 * h) - gradient_jacobian(*this, x, h)) / 3.0;
  }
  return fd_hessian(x);
}

VectorField::VectorField(std::vector<ScalarField> components) : comps_(std::move(components)) {
  if (comps_.empty()) fail(ErrorKind::Configuration, "VectorField: no components");
  dim_ = comps_.front().dimension();
  for (const auto& c : comps_) {
    if (c.dimension() != dim_) fail(ErrorKind::Configuration, "VectorField: component dimension mismatch");
  }
}

Point VectorField::operator()(const Point& x) const {
  Point y(static_cast<Eigen::Index>(comps_.size()));
  for (std::size_t k = 0; k < comps_.size(); ++k) y[k] = comps_[k](x);
  return y;
}

Matrix VectorField::jacobian(const Point& x) const {
  Matrix J(static_cast<Eigen::Index>(comps_.size()), dim_);
  for (std::size_t k = 0; k < comps_.size(); ++k) J.row(k) = comps_[k].gradient(x).transpose();
  return J;
}

Vector gradient(const ScalarField& f, const Point& x) { return f.gradient(x); }
Matrix hessian(const ScalarField& f, const Point& x) { return f.hessian(x); }
double laplacian(const ScalarField& f, const Point& x) { return f.laplacian(x); }

double hessian_frobenius_sq(const ScalarField& f, const Point& x) {
  return f.hessian(x).squaredNorm();
}

Vector laplacian_gradient(const ScalarField& f, const Point& x) {
  const int n = f.dimension();
  const double h = 1e-3 * std::max(1.0, x.norm());
  Vector g(n);
  for (int i = 0; i < n; ++i) {
    Point xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f.laplacian(xp) - f.laplacian(xm)) / (2.0 * h);
  }
  return g;
}

double operator_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

void HeinzData::validate() const {
  if (b1 < 0.0 || b1 > 1.0 || b2 < 0.0 || b2 > 1.0) {
    fail(ErrorKind::Configuration, "Heinz exponents must lie in [0, 1]");
  }
}

namespace {
double eval_or_zero(const ScalarField& f, const Point& x) { return f.valid() ? f(x) : 0.0; }

// |t|^b with 0^0 = 1
double pow_abs(double t, double b) { return b == 0.0 ? 1.0 : std::pow(std::abs(t), b); }
}  // namespace

double heinz_residual(const ScalarField& u, const HeinzData& data, const Point& x) {
  const double a1 = eval_or_zero(data.a1, x);
  const double a2 = eval_or_zero(data.a2, x);
  const double a3 = eval_or_zero(data.a3, x);
  double rhs = a3;
  if (a1 != 0.0) rhs += a1 * pow_abs(u.gradient(x).norm(), data.b1);
  if (a2 != 0.0) rhs += a2 * pow_abs(u(x), data.b2);
  return rhs - std::abs(u.laplacian(x));
}

double factorize_elliptic(const ScalarField& p, const ScalarField& q, const Point& x) {
  const double pv = p(x);
  if (std::abs(pv) < 1e-14) fail(ErrorKind::SingularCoefficient, "factorize_elliptic: p(x) = 0");
  return p.laplacian(x) / pv - q(x) / (pv * pv);
}

double factorization_defect(const ScalarField& p, const ScalarField& q, const ScalarField& u,
                            const Point& x) {
  const double pv = p(x);
  const Vector gp = p.gradient(x);
  const double direct = pv * pv * u.laplacian(x) + 2.0 * pv * gp.dot(u.gradient(x)) + q(x) * u(x);
  const ScalarField pu(u.dimension(), [&](const Point& y) { return p(y) * u(y); });
  const double factored = pv * (pu.laplacian(x) - factorize_elliptic(p, q, x) * pv * u(x));
  return direct - factored;
}

// ---------------------------------------------------------------------------

Polynomial::Polynomial(int dim, std::vector<Term> terms) : dim_(dim), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    if (static_cast<int>(t.powers.size()) != dim_) fail(ErrorKind::Configuration, "Polynomial: exponent length mismatch");
  }
  compact();
}

Polynomial Polynomial::monomial(int dim, const std::vector<int>& powers, double coef) {
  return Polynomial(dim, {Term{coef, powers}});
}

std::vector<Polynomial> Polynomial::monomials_up_to(int dim, int degree) {
  std::vector<Polynomial> out;
  std::vector<int> a(dim, 0);
  for (int d = 0; d <= degree; ++d) {
    // enumerate compositions of d into dim parts, first coordinate descending
    std::function<void(int, int)> rec = [&](int axis, int left) {
      if (axis == dim - 1) {
        a[axis] = left;
        out.push_back(monomial(dim, a));
        return;
      }
      for (int k = left; k >= 0; --k) {
        a[axis] = k;
        rec(axis + 1, left - k);
      }
    };
    rec(0, d);
  }
  return out;
}

void Polynomial::compact() {
  std::map<std::vector<int>, double> acc;
  for (const auto& t : terms_) acc[t.powers] += t.coef;
  terms_.clear();
  for (const auto& [p, c] : acc) {
    if (c != 0.0) terms_.push_back(Term{c, p});
  }
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) {
    int s = 0;
    for (int p : t.powers) s += p;
    d = std::max(d, s);
  }
  return d;
}

double Polynomial::operator()(const Point& x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double v = t.coef;
    for (int i = 0; i < dim_; ++i) {
      for (int k = 0; k < t.powers[i]; ++k) v *= x[i];
    }
    sum += v;
  }
  return sum;
}

Polynomial Polynomial::derivative(int axis) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.powers[axis] == 0) continue;
    Term d = t;
    d.coef *= t.powers[axis];
    d.powers[axis] -= 1;
    out.push_back(std::move(d));
  }
  return Polynomial(dim_, std::move(out));
}

Polynomial Polynomial::laplacian() const {
  Polynomial sum(dim_);
  for (int i = 0; i < dim_; ++i) sum = sum + derivative(i).derivative(i);
  return sum;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Term> t = terms_;
  t.insert(t.end(), o.terms_.begin(), o.terms_.end());
  return Polynomial(dim_, std::move(t));
}

Polynomial Polynomial::operator*(double c) const {
  std::vector<Term> t = terms_;
  for (auto& term : t) term.coef *= c;
  return Polynomial(dim_, std::move(t));
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    bool any = false;
    if (t.coef != 1.0) {
      os << t.coef;
      any = true;
    }
    for (int i = 0; i < dim_; ++i) {
      if (t.powers[i] == 0) continue;
      if (any) os << "*";
      os << "x" << (i + 1);
      if (t.powers[i] > 1) os << "^" << t.powers[i];
      any = true;
    }
    if (!any) os << "1";
  }
  return os.str();
}

ScalarField Polynomial::field() const {
  const Polynomial p = *this;
  std::vector<Polynomial> grads;
  std::vector<std::vector<Polynomial>> hess(dim_);
  for (int i = 0; i < dim_; ++i) grads.push_back(derivative(i));
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) hess[i].push_back(grads[i].derivative(j));
  }
  const int n = dim_;
  ScalarField f(n, [p](const Point& x) { return p(x); }, to_string());
  f.with_gradient([grads, n](const Point& x) {
    Vector g(n);
    for (int i = 0; i < n; ++i) g[i] = grads[i](x);
    return g;
  });
  f.with_hessian([hess, n](const Point& x) {
    Matrix H(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) H(i, j) = hess[i][j](x);
    }
    return H;
  });
  return f;
}

// ---------------------------------------------------------------------------

RadialSeries::RadialSeries(int dim, std::vector<double> coefs, std::string name)
    : dim_(dim), c_(std::move(coefs)), name_(std::move(name)) {
  if (c_.empty()) c_.push_back(0.0);
}

RadialSeries RadialSeries::from_generator(int dim, const std::function<double(int)>& coef_k,
                                          double q_max, std::string name) {
  std::vector<double> c;
  double scale = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double ck = coef_k(k);
    c.push_back(ck);
    const double contrib = std::abs(ck) * std::pow(std::max(q_max, 1e-300), k);
    scale = std::max(scale, contrib);
    if (k > 2 && contrib <= 1e-18 * scale) break;
  }
  return RadialSeries(dim, std::move(c), std::move(name));
}

double RadialSeries::value(double q) const {
  double s = 0.0;
  for (std::size_t k = c_.size(); k-- > 0;) s = s * q + c_[k];
  return s;
}

double RadialSeries::d1(double q) const {
  double s = 0.0;
  for (std::size_t k = c_.size(); k-- > 1;) s = s * q + static_cast<double>(k) * c_[k];
  return s;
}

double RadialSeries::d2(double q) const {
  double s = 0.0;
  for (std::size_t k = c_.size(); k-- > 2;) s = s * q + static_cast<double>(k * (k - 1)) * c_[k];
  return s;
}

RadialSeries RadialSeries::scaled(double c) const {
  std::vector<double> out = c_;
  for (double& v : out) v *= c;
  return RadialSeries(dim_, std::move(out), name_);
}

ScalarField RadialSeries::field(double support) const {
  const RadialSeries s = *this;
  const int n = dim_;
  ScalarField f(n, [s](const Point& x) { return s.value(x.squaredNorm()); }, name_, support);
  f.with_gradient([s](const Point& x) { return Vector(2.0 * s.d1(x.squaredNorm()) * x); });
  f.with_hessian([s, n](const Point& x) {
    const double q = x.squaredNorm();
    Matrix H = 4.0 * s.d2(q) * (x * x.transpose());
    for (int i = 0; i < n; ++i) H(i, i) += 2.0 * s.d1(q);
    return H;
  });
  return f;
}

RadialSeries yukawa_radial(int dim, double lambda) {
  if (lambda < 0.0) fail(ErrorKind::Configuration, "yukawa_radial: lambda must be nonnegative");
  const double half_n = 0.5 * dim;
  // c_k = (lambda/4)^k / (k! (n/2)_k), from 2k(n + 2k - 2) c_k = lambda c_{k-1}
  std::vector<double> c{1.0};
  const double q_max = 4.0;
  for (int k = 1; k < 200; ++k) {
    const double ck = c.back() * (0.25 * lambda) / (k * (k - 1 + half_n));
    if (ck * std::pow(q_max, k) < 1e-18) break;
    c.push_back(ck);
  }
  std::ostringstream name;
  name << "yukawa_radial(n=" << dim << ",lambda=" << lambda << ")";
  return RadialSeries(dim, std::move(c), name.str());
}

double bessel_i0(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

ScalarField constant_field(int dim, double c) {
  std::ostringstream name;
  name << "constant(" << c << ")";
  ScalarField f(dim, [c](const Point&) { return c; }, name.str());
  f.with_gradient([dim](const Point&) { return Vector(Vector::Zero(dim)); });
  f.with_hessian([dim](const Point&) { return Matrix(Matrix::Zero(dim, dim)); });
  return f;
}

ScalarField coordinate_field(int dim, int axis) {
  std::vector<int> p(dim, 0);
  p[axis] = 1;
  return Polynomial::monomial(dim, p).field();
}

ScalarField norm_sq_field(int dim) {
  std::vector<Polynomial::Term> terms;
  for (int i = 0; i < dim; ++i) {
    std::vector<int> p(dim, 0);
    p[i] = 2;
    terms.push_back({1.0, p});
  }
  return Polynomial(dim, terms).field();
}

ScalarField plane_wave_field(int dim, double lambda, int axis) {
  const double a = std::sqrt(lambda);
  std::ostringstream name;
  name << "plane_wave(lambda=" << lambda << ")";
  ScalarField f(dim, [a, axis](const Point& x) { return std::exp(a * x[axis]); }, name.str());
  f.with_gradient([a, axis, dim](const Point& x) {
    Vector g = Vector::Zero(dim);
    g[axis] = a * std::exp(a * x[axis]);
    return g;
  });
  f.with_hessian([a, axis, dim](const Point& x) {
    Matrix H = Matrix::Zero(dim, dim);
    H(axis, axis) = a * a * std::exp(a * x[axis]);
    return H;
  });
  return f;
}

ScalarField sinh_coordinate_field(int dim, double a, int axis) {
  std::ostringstream name;
  name << "sinh_coordinate(a=" << a << ",axis=" << axis + 1 << ")";
  auto val = [a](double t) { return a == 0.0 ? t : std::sinh(a * t) / a; };
  ScalarField f(dim, [val, axis](const Point& x) { return val(x[axis]); }, name.str());
  f.with_gradient([a, axis, dim](const Point& x) {
    Vector g = Vector::Zero(dim);
    g[axis] = std::cosh(a * x[axis]);
    return g;
  });
  f.with_hessian([a, axis, dim](const Point& x) {
    Matrix H = Matrix::Zero(dim, dim);
    H(axis, axis) = a * std::sinh(a * x[axis]);
    return H;
  });
  return f;
}

ScalarField log_kernel_field() {
  // Re log(1/(1-z)) = -0.5 log|1-z|^2; derivatives from the analytic function 1/(1-z)
  ScalarField f(2, [](const Point& x) {
    const double a = 1.0 - x[0];
    const double b = x[1];
    return -0.5 * std::log(a * a + b * b);
  }, "log_kernel", 1.0);
  f.with_gradient([](const Point& x) {
    const double a = 1.0 - x[0];
    const double b = x[1];
    const double m = a * a + b * b;
    return make_point({a / m, -b / m});
  });
  f.with_hessian([](const Point& x) {
    // u_x - i u_y = 1/(1-z); second derivatives from 1/(1-z)^2
    const double a = 1.0 - x[0];
    const double b = x[1];
    const double m = a * a + b * b;
    const double re = (a * a - b * b) / (m * m);
    const double im = 2.0 * a * b / (m * m);
    Matrix H(2, 2);
    H(0, 0) = re;
    H(1, 1) = -re;
    H(0, 1) = H(1, 0) = -im;
    return H;
  });
  return f;
}

ScalarField sqrt_distance_field(int dim) {
  return ScalarField(dim, [](const Point& x) { return std::sqrt(std::max(0.0, 1.0 - x.norm())); },
                     "sqrt_distance", 1.0);
}

ScalarField product(const ScalarField& f, double c) {
  ScalarField g(f.dimension(), [f, c](const Point& x) { return c * f(x); }, f.name(), f.support_radius());
  if (f.has_gradient()) g.with_gradient([f, c](const Point& x) { return Vector(c * f.gradient(x)); });
  if (f.has_hessian()) g.with_hessian([f, c](const Point& x) { return Matrix(c * f.hessian(x)); });
  return g;
}

}  // namespace ellab
