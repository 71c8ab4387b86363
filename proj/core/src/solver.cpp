#include "ellab/solver.hpp"
#include "ellab/rng.hpp"
#include "ellab/spectral.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

namespace ellab {

BoundaryData::BoundaryData() : fn_([](const Point&) { return 1.0; }), constant_(1.0), name_("const(1)") {}

BoundaryData BoundaryData::constant(double c) {
  BoundaryData b;
  b.fn_ = [c](const Point&) { return c; };
  b.constant_ = c;
  std::ostringstream os;
  os << "const(" << c << ")";
  b.name_ = os.str();
  return b;
}

BoundaryData BoundaryData::function(ValueFn g, std::string name) {
  BoundaryData b = constant(0.0);
  b.fn_ = std::move(g);
  b.constant_.reset();
  b.name_ = std::move(name);
  return b;
}

BoundaryData BoundaryData::harmonics(int dim, std::vector<Harmonic> terms) {
  for (const Harmonic& h : terms) real_harmonic(dim, h.degree, h.order, unit_vector(dim, 0));
  std::ostringstream os;
  os << "harmonics(" << terms.size() << ")";
  BoundaryData b = function(
      [dim, terms](const Point& z) {
        double sum = 0.0;
        for (const Harmonic& h : terms) sum += h.coef * real_harmonic(dim, h.degree, h.order, z);
        return sum;
      },
      os.str());
  if (terms.size() == 1 && terms[0].degree == 0) b.constant_ = terms[0].coef;
  return b;
}

std::string to_string(Backend b) {
  switch (b) {
    case Backend::RadialExact: return "radial-exact";
    case Backend::PicardIntegral: return "picard-integral";
    case Backend::FdGrid: return "fd-grid";
  }
  return "unknown";
}

Backend backend_from_string(const std::string& s) {
  if (s == "radial-exact") return Backend::RadialExact;
  if (s == "picard-integral" || s == "picard") return Backend::PicardIntegral;
  if (s == "fd-grid" || s == "grid") return Backend::FdGrid;
  fail(ErrorKind::Configuration, "unknown solver backend '" + s + "'");
}

YukawaProblem YukawaProblem::constant(int dim, double lambda, double tau, double boundary) {
  YukawaProblem p;
  p.dimension = dim;
  p.tau = tau;
  p.lambda = constant_field(dim, lambda);
  p.lambda_constant = lambda;
  p.boundary = BoundaryData::constant(boundary);
  std::ostringstream os;
  os << "yukawa(n=" << dim << ",lambda=" << lambda << ",tau=" << tau << ")";
  p.name = os.str();
  return p;
}

void YukawaProblem::validate(std::uint64_t seed, int samples) const {
  if (dimension != 2 && dimension != 3) fail(ErrorKind::Configuration, "solver ships n in {2,3}");
  if (!(tau >= 1.0)) fail(ErrorKind::Configuration, "tau must be at least 1");
  if (!lambda.valid()) fail(ErrorKind::Configuration, "problem has no lambda field");
  if (lambda.dimension() != dimension) fail(ErrorKind::Configuration, "lambda dimension mismatch");
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Point x = rng.in_ball(dimension, 1.0);
    const double l = lambda(x);
    if (!(l >= 0.0)) {
      std::ostringstream os;
      os << "lambda must be nonnegative; lambda = " << l << " at sample " << i;
      fail(ErrorKind::Hypothesis, os.str());
    }
  }
}

namespace {

double nonlinearity(double u, double tau) {
  return tau == 1.0 ? u : std::pow(std::abs(u), tau - 1.0) * u;
}

void require_ball(const Point& x) {
  if (x.norm() > 1.0 + 1e-12) fail(ErrorKind::Domain, "solution evaluated outside the closed unit ball");
}

/// Function stored as radial values of angular modes at the Gauss radii.
struct ModalField {
  std::shared_ptr<const AngularBasis> basis;
  std::shared_ptr<const RadialGreenOperator> radial;
  Eigen::MatrixXd coefs;  // radial nodes x modes

  double operator()(const Point& x) const {
    require_ball(x);
    const double s = x.norm();
    const int n = basis->dimension();
    const Point dir = s > 0.0 ? Point(x / s) : unit_vector(n, 0);
    const Eigen::VectorXd row = radial->interpolation_row(s);
    const Eigen::VectorXd at_s = coefs.transpose() * row;
    return at_s.dot(basis->evaluate(dir));
  }
};

struct ModalSetup {
  std::shared_ptr<const AngularBasis> basis;
  std::shared_ptr<const RadialGreenOperator> radial;
  std::vector<Point> points;  // radial-major: index i * A + a
};

ModalSetup modal_setup(int n, const SolverOptions& o) {
  ModalSetup m;
  m.basis = std::make_shared<const AngularBasis>(n == 2 ? AngularBasis::circle(o.circle_nodes)
                                                        : AngularBasis::sphere(o.sphere_polar, o.sphere_azimuth));
  m.radial = std::make_shared<const RadialGreenOperator>(n, o.radial_nodes);
  for (double s : m.radial->nodes())
    for (int a = 0; a < m.basis->node_count(); ++a) m.points.push_back(s * m.basis->node(a));
  return m;
}

/// Green potential coefficients of nodal source values (radial nodes x angular nodes).
Eigen::MatrixXd apply_green(const ModalSetup& m, const Eigen::MatrixXd& source) {
  const Eigen::MatrixXd c = source * m.basis->analysis();
  Eigen::MatrixXd out(c.rows(), c.cols());
  for (int k = 0; k < c.cols(); ++k) out.col(k) = m.radial->matrix(m.basis->degree(k)) * c.col(k);
  return out;
}

double residual_estimate(const ScalarField& u, const YukawaProblem& p, const SolverOptions& o) {
  Rng rng(o.seed ^ 0x5eedULL);
  double worst = 0.0;
  for (int i = 0; i < o.residual_samples; ++i) {
    const Point x = rng.in_ball(p.dimension, o.residual_radius);
    const double r = u.laplacian(x) - p.lambda(x) * nonlinearity(u(x), p.tau);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

void finish_status(SolutionField& s, const SolverOptions& o) {
  if (s.contraction_estimate >= 0.99) {
    s.converged = false;
    s.status = "contraction estimate >= 0.99";
  } else if (!(s.residual <= o.residual_tolerance)) {
    s.converged = false;
    s.status = "residual above tolerance";
  } else {
    s.converged = true;
    s.status = "converged";
  }
}

}  // namespace

SolutionField picard_solve(const YukawaProblem& problem, const SolverOptions& options) {
  problem.validate(options.seed);
  const int n = problem.dimension;
  const ModalSetup m = modal_setup(n, options);
  const int N = m.radial->size();
  const int A = m.basis->node_count();
  const int K = m.basis->mode_count();
  const auto& radii = m.radial->nodes();

  Eigen::MatrixXd lam(N, A);
  Eigen::RowVectorXd gvals(A);
  for (int a = 0; a < A; ++a) gvals[a] = problem.boundary(m.basis->node(a));
  for (int i = 0; i < N; ++i)
    for (int a = 0; a < A; ++a) lam(i, a) = problem.lambda(m.points[static_cast<std::size_t>(i * A + a)]);

  const Eigen::RowVectorXd gcoef = gvals * m.basis->analysis();
  Eigen::MatrixXd harmonic(N, K);
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < K; ++k) harmonic(i, k) = gcoef[k] * std::pow(radii[i], m.basis->degree(k));

  SolutionField out;
  out.backend = Backend::PicardIntegral;
  out.lambda_sup = lam.maxCoeff();
  out.operator_bound = out.lambda_sup / (2.0 * n);

  Eigen::MatrixXd coefs = harmonic;
  Eigen::MatrixXd u = coefs * m.basis->synthesis();
  bool done = false;
  for (int it = 1; it <= options.max_iterations; ++it) {
    Eigen::MatrixXd f(N, A);
    for (int i = 0; i < N; ++i)
      for (int a = 0; a < A; ++a) f(i, a) = lam(i, a) * nonlinearity(u(i, a), problem.tau);
    coefs = harmonic - apply_green(m, f);
    const Eigen::MatrixXd next = coefs * m.basis->synthesis();
    const double update = (next - u).cwiseAbs().maxCoeff();
    u = next;
    out.update_history.push_back(update);
    out.iterations = it;
    if (!std::isfinite(update)) break;
    if (update <= options.tolerance) {
      done = true;
      break;
    }
  }
  if (!done) {
    std::ostringstream os;
    os << "picard iteration did not reach " << options.tolerance << " in " << out.iterations
       << " iterations; last update " << (out.update_history.empty() ? 0.0 : out.update_history.back());
    throw DivergenceError(os.str(), out.update_history);
  }
  out.final_update = out.update_history.back();
  const auto& h = out.update_history;
  // ratios of tiny updates are round-off noise, so only those above 1e3 * tol count
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (h[k - 1] > 1e3 * options.tolerance && h[k - 1] > 0.0)
      out.contraction_estimate = std::max(out.contraction_estimate, h[k] / h[k - 1]);
  }

  ModalField field{m.basis, m.radial, coefs};
  out.field = ScalarField(n, field, "picard:" + problem.name, 1.0);
  for (int i = 0; i < N; ++i)
    for (int a = 0; a < A; ++a) {
      out.nodes.push_back(m.points[static_cast<std::size_t>(i * A + a)]);
      out.node_values.push_back(u(i, a));
    }
  out.residual = residual_estimate(out.field, problem, options);
  finish_status(out, options);
  return out;
}

ScalarField green_potential_modal(const ScalarField& source, const SolverOptions& options) {
  const int n = source.dimension();
  if (n != 2 && n != 3) fail(ErrorKind::Configuration, "green_potential_modal ships n in {2,3}");
  const ModalSetup m = modal_setup(n, options);
  const int N = m.radial->size();
  const int A = m.basis->node_count();
  Eigen::MatrixXd f(N, A);
  for (int i = 0; i < N; ++i)
    for (int a = 0; a < A; ++a) f(i, a) = source(m.points[static_cast<std::size_t>(i * A + a)]);
  ModalField field{m.basis, m.radial, apply_green(m, f)};
  return ScalarField(n, field, "green-modal:" + source.name(), 1.0);
}

// ---------------------------------------------------------------------------
// Finite-volume backend

namespace {

struct FvMesh {
  int dim = 2;
  int nr = 0, ntheta = 1, nphi = 0;
  double h = 0.0;
  std::vector<Point> nodes;
  std::vector<double> volume;
  struct Link {
    int p, q;
    double t;
  };
  std::vector<Link> links;
  struct BoundaryLink {
    int p;
    double t;
    double g;
  };
  std::vector<BoundaryLink> boundary;
  std::vector<double> boundary_values;  // per (k, j) direction

  int index(int i, int k, int j) const { return i == 0 ? 0 : 1 + ((i - 1) * ntheta + k) * nphi + j; }
  double theta(int k) const { return (k + 0.5) * std::numbers::pi / ntheta; }
};

FvMesh polar_mesh(int nr, int nphi, const BoundaryData& g) {
  FvMesh m;
  m.dim = 2;
  m.nr = nr;
  m.nphi = nphi;
  m.h = 1.0 / nr;
  const double h = m.h;
  const double dphi = 2.0 * std::numbers::pi / nphi;
  m.nodes.push_back(Point::Zero(2));
  m.volume.push_back(std::numbers::pi * h * h / 4.0);
  for (int i = 1; i < nr; ++i)
    for (int j = 0; j < nphi; ++j) {
      const double r = i * h;
      m.nodes.push_back(make_point({r * std::cos(j * dphi), r * std::sin(j * dphi)}));
      m.volume.push_back(r * h * dphi);
    }
  for (int j = 0; j < nphi; ++j)
    m.boundary_values.push_back(g(make_point({std::cos(j * dphi), std::sin(j * dphi)})));
  for (int j = 0; j < nphi; ++j) m.links.push_back({0, m.index(1, 0, j), 0.5 * dphi});
  for (int i = 1; i < nr; ++i)
    for (int j = 0; j < nphi; ++j) {
      const int p = m.index(i, 0, j);
      m.links.push_back({p, m.index(i, 0, (j + 1) % nphi), h / (i * h * dphi)});
      const double t = (i + 0.5) * h * dphi / h;
      if (i + 1 < nr) m.links.push_back({p, m.index(i + 1, 0, j), t});
      else m.boundary.push_back({p, t, m.boundary_values[j]});
    }
  return m;
}

FvMesh spherical_mesh(int nr, int ntheta, int nphi, const BoundaryData& g) {
  FvMesh m;
  m.dim = 3;
  m.nr = nr;
  m.ntheta = ntheta;
  m.nphi = nphi;
  m.h = 1.0 / nr;
  const double h = m.h;
  const double dth = std::numbers::pi / ntheta;
  const double dphi = 2.0 * std::numbers::pi / nphi;
  auto band = [&](int k) { return std::cos(k * dth) - std::cos((k + 1) * dth); };
  auto dir = [&](int k, int j) {
    const double th = m.theta(k);
    return make_point({std::sin(th) * std::cos(j * dphi), std::sin(th) * std::sin(j * dphi), std::cos(th)});
  };
  m.nodes.push_back(Point::Zero(3));
  m.volume.push_back(4.0 / 3.0 * std::numbers::pi * std::pow(0.5 * h, 3));
  for (int i = 1; i < nr; ++i)
    for (int k = 0; k < ntheta; ++k)
      for (int j = 0; j < nphi; ++j) {
        const double lo = (i - 0.5) * h;
        const double hi = (i + 0.5) * h;
        m.nodes.push_back((i * h) * dir(k, j));
        m.volume.push_back((hi * hi * hi - lo * lo * lo) / 3.0 * band(k) * dphi);
      }
  for (int k = 0; k < ntheta; ++k)
    for (int j = 0; j < nphi; ++j) m.boundary_values.push_back(g(dir(k, j)));
  for (int k = 0; k < ntheta; ++k)
    for (int j = 0; j < nphi; ++j) m.links.push_back({0, m.index(1, k, j), 0.25 * h * h * band(k) * dphi / h});
  for (int i = 1; i < nr; ++i)
    for (int k = 0; k < ntheta; ++k)
      for (int j = 0; j < nphi; ++j) {
        const int p = m.index(i, k, j);
        m.links.push_back({p, m.index(i, k, (j + 1) % nphi), h * dth / (std::sin(m.theta(k)) * dphi)});
        if (k + 1 < ntheta) m.links.push_back({p, m.index(i, k + 1, j), h * std::sin((k + 1) * dth) * dphi / dth});
        const double rf = (i + 0.5) * h;
        const double t = rf * rf * band(k) * dphi / h;
        if (i + 1 < nr) m.links.push_back({p, m.index(i + 1, k, j), t});
        else m.boundary.push_back({p, t, m.boundary_values[static_cast<std::size_t>(k * nphi + j)]});
      }
  return m;
}

struct GridField {
  std::shared_ptr<const FvMesh> mesh;
  std::shared_ptr<const std::vector<double>> u;

  double at(int i, int k, int j) const {
    const FvMesh& m = *mesh;
    j = ((j % m.nphi) + m.nphi) % m.nphi;
    if (i >= m.nr) return m.boundary_values[static_cast<std::size_t>(k * m.nphi + j)];
    return (*u)[static_cast<std::size_t>(m.index(i, k, j))];
  }

  double ring(int i, double kpos, double jpos) const {
    const FvMesh& m = *mesh;
    if (i == 0) return (*u)[0];
    const int j0 = static_cast<int>(std::floor(jpos));
    const double b = jpos - j0;
    auto along = [&](int k) { return (1.0 - b) * at(i, k, j0) + b * at(i, k, j0 + 1); };
    if (m.ntheta == 1) return along(0);
    int k0 = static_cast<int>(std::floor(kpos));
    k0 = std::clamp(k0, 0, m.ntheta - 2);
    const double c = std::clamp(kpos - k0, 0.0, 1.0);
    return (1.0 - c) * along(k0) + c * along(k0 + 1);
  }

  double operator()(const Point& x) const {
    require_ball(x);
    const FvMesh& m = *mesh;
    const double r = std::min(x.norm(), 1.0);
    double phi = std::atan2(x[1], x[0]);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    const double jpos = phi / (2.0 * std::numbers::pi / m.nphi);
    double kpos = 0.0;
    if (m.dim == 3) {
      const double th = r > 0.0 ? std::acos(std::clamp(x[2] / x.norm(), -1.0, 1.0)) : 0.0;
      kpos = th / (std::numbers::pi / m.ntheta) - 0.5;
    }
    const double rho = r / m.h;
    const int i0 = std::min(static_cast<int>(std::floor(rho)), m.nr - 1);
    const double t = rho - i0;
    return (1.0 - t) * ring(i0, kpos, jpos) + t * ring(i0 + 1, kpos, jpos);
  }
};

}  // namespace

SolutionField grid_solve(const YukawaProblem& problem, const SolverOptions& options) {
  problem.validate(options.seed);
  const int n = problem.dimension;
  const int nr = options.grid_radial > 0 ? options.grid_radial : (n == 2 ? 256 : 48);
  auto mesh = std::make_shared<FvMesh>(
      n == 2 ? polar_mesh(nr, options.grid_angular, problem.boundary)
             : spherical_mesh(nr, options.grid_polar, options.grid_azimuth, problem.boundary));
  const int size = static_cast<int>(mesh->nodes.size());

  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(size);
  for (const auto& l : mesh->links) {
    trip.emplace_back(l.p, l.q, -l.t);
    trip.emplace_back(l.q, l.p, -l.t);
    diag[l.p] += l.t;
    diag[l.q] += l.t;
  }
  for (const auto& b : mesh->boundary) diag[b.p] += b.t;
  for (int p = 0; p < size; ++p) trip.emplace_back(p, p, diag[p]);
  Eigen::SparseMatrix<double> lap(size, size);
  lap.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd lam(size), vol(size);
  for (int p = 0; p < size; ++p) {
    lam[p] = problem.lambda(mesh->nodes[static_cast<std::size_t>(p)]);
    vol[p] = mesh->volume[static_cast<std::size_t>(p)];
  }

  auto residual = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd r = -(lap * u);
    for (const auto& b : mesh->boundary) r[b.p] += b.t * b.g;
    for (int p = 0; p < size; ++p) r[p] -= vol[p] * lam[p] * nonlinearity(u[p], problem.tau);
    return r;
  };

  SolutionField out;
  out.backend = Backend::FdGrid;
  out.lambda_sup = lam.maxCoeff();
  out.operator_bound = out.lambda_sup / (2.0 * n);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(size);
  bool first = true;
  bool done = false;
  for (int it = 1; it <= std::max(options.max_iterations, 1); ++it) {
    Eigen::SparseMatrix<double> jac = lap;
    for (int p = 0; p < size; ++p) {
      const double deriv = problem.tau == 1.0 ? 1.0 : problem.tau * std::pow(std::abs(u[p]), problem.tau - 1.0);
      jac.diagonal()[p] += vol[p] * lam[p] * deriv;
    }
    if (first) {
      ldlt.analyzePattern(jac);
      first = false;
    }
    ldlt.factorize(jac);
    if (ldlt.info() != Eigen::Success) fail(ErrorKind::Evaluation, "grid solve: factorization failed");
    const Eigen::VectorXd delta = ldlt.solve(residual(u));
    u += delta;
    const double update = delta.cwiseAbs().maxCoeff();
    out.update_history.push_back(update);
    out.iterations = it;
    if (!std::isfinite(update)) break;
    // a linear problem is solved by the first step
    if (problem.tau == 1.0 || update <= std::max(options.tolerance, 1e-14 * (1.0 + u.cwiseAbs().maxCoeff()))) {
      done = true;
      break;
    }
  }
  if (!done) {
    std::ostringstream os;
    os << "grid Newton iteration did not converge in " << out.iterations << " iterations";
    throw DivergenceError(os.str(), out.update_history);
  }
  out.final_update = out.update_history.back();
  out.residual = residual(u).cwiseQuotient(vol).cwiseAbs().maxCoeff();
  auto values = std::make_shared<const std::vector<double>>(u.data(), u.data() + size);
  out.nodes = mesh->nodes;
  out.node_values = *values;
  out.field = ScalarField(n, GridField{mesh, values}, "grid:" + problem.name, 1.0);
  finish_status(out, options);
  return out;
}

// ---------------------------------------------------------------------------

RadialSeries radial_profile(int n, double lambda, double tau, std::optional<double> boundary_value) {
  if (n < 2) fail(ErrorKind::Configuration, "radial_oracle: n must be at least 2");
  if (!(lambda >= 0.0)) fail(ErrorKind::Configuration, "radial_oracle: lambda must be nonnegative");
  if (!(tau >= 1.0)) fail(ErrorKind::Configuration, "radial_oracle: tau must be at least 1");
  // u = sum a_k q^k, q = |x|^2, Lap q^k = 2k(2k + n - 2) q^{k-1}; b = a^tau by the
  // power-series power recurrence, valid for a_0 > 0.
  auto series = [&](double a0) {
    std::vector<double> a{a0}, b{std::pow(a0, tau)};
    for (int k = 1; k < 400; ++k) {
      a.push_back(lambda * b[static_cast<std::size_t>(k - 1)] / (2.0 * k * (2.0 * k + n - 2.0)));
      double bk = 0.0;
      for (int j = 1; j <= k; ++j)
        bk += ((tau + 1.0) * j - k) * a[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(k - j)];
      b.push_back(bk / (k * a0));
      if (k > 3 && std::abs(a.back()) <= 1e-18 * a0 && std::abs(a[a.size() - 2]) <= 1e-17 * a0) return a;
    }
    fail(ErrorKind::Divergence, "radial_oracle: power series did not converge on the unit ball");
  };
  auto at_one = [](const std::vector<double>& a) {
    double s = 0.0;
    for (double c : a) s += c;
    return s;
  };
  std::ostringstream name;
  name << "radial(n=" << n << ",lambda=" << lambda << ",tau=" << tau << ")";
  if (!boundary_value) return RadialSeries(n, series(1.0), name.str());
  const double g = *boundary_value;
  if (g == 0.0) return RadialSeries(n, {0.0}, name.str());
  const double sign = g < 0.0 ? -1.0 : 1.0;
  const double target = std::abs(g);
  std::vector<double> a;
  if (tau == 1.0) {
    a = series(1.0);
    const double scale = target / at_one(a);
    for (double& c : a) c *= scale;
  } else {
    // u(1) is increasing in u(0) and u(1) >= u(0)
    double lo = 0.0, hi = target;
    for (int it = 0; it < 200 && hi - lo > 1e-16 * target; ++it) {
      const double mid = 0.5 * (lo + hi);
      (at_one(series(mid)) < target ? lo : hi) = mid;
    }
    a = series(0.5 * (lo + hi));
  }
  for (double& c : a) c *= sign;
  return RadialSeries(n, a, name.str());
}

ScalarField radial_oracle(int n, double lambda, double tau, std::optional<double> boundary_value) {
  return radial_profile(n, lambda, tau, boundary_value).field();
}

SolutionField solve(const YukawaProblem& problem, const SolverOptions& options) {
  switch (problem.backend) {
    case Backend::PicardIntegral: return picard_solve(problem, options);
    case Backend::FdGrid: return grid_solve(problem, options);
    case Backend::RadialExact: break;
  }
  problem.validate(options.seed);
  if (!problem.lambda_constant || !problem.boundary.constant_value())
    fail(ErrorKind::Configuration, "radial-exact backend needs constant lambda and constant boundary data");
  SolutionField out;
  out.backend = Backend::RadialExact;
  out.lambda_sup = *problem.lambda_constant;
  out.operator_bound = out.lambda_sup / (2.0 * problem.dimension);
  out.field = radial_oracle(problem.dimension, *problem.lambda_constant, problem.tau,
                            *problem.boundary.constant_value());
  out.residual = residual_estimate(out.field, problem, options);
  finish_status(out, options);
  return out;
}

ScalarField poisson_extend(const BoundaryData& g, int n, double r, const QuadratureOrders& orders) {
  if (n != 2 && n != 3) fail(ErrorKind::Configuration, "poisson_extend ships n in {2,3}");
  if (!(r > 0.0) || r > 1.0) fail(ErrorKind::Domain, "poisson_extend needs 0 < r <= 1");
  auto rule = std::make_shared<const SphereRule>(SphereRule::for_dimension(n, orders));
  auto values = std::make_shared<std::vector<double>>();
  for (std::size_t i = 0; i < rule->size(); ++i) values->push_back(g(rule->node(i)));
  const double pre = std::pow(r, n - 2.0);
  return ScalarField(
      n,
      [rule, values, n, r, pre](const Point& w) {
        if (w.norm() >= r) fail(ErrorKind::Domain, "poisson_extend evaluated outside B_r");
        double sum = 0.0;
        for (std::size_t i = 0; i < rule->size(); ++i)
          sum += rule->weight(i) * poisson_kernel(n, r, w, rule->node(i)) * (*values)[i];
        return pre * sum;
      },
      "poisson:" + g.name(), r);
}

ScalarField green_potential(const ScalarField& source, int n, double r, const DirectGreenOptions& options) {
  if (source.dimension() != n) fail(ErrorKind::Configuration, "green_potential: dimension mismatch");
  if (!(r > 0.0) || r > 1.0) fail(ErrorKind::Domain, "green_potential needs 0 < r <= 1");
  const ScalarField scaled(n, [source, r](const Point& y) { return source(Point(r * y)); }, source.name());
  return ScalarField(
      n,
      [scaled, r, options](const Point& w) {
        if (w.norm() >= r) {
          if (w.norm() <= r * (1.0 + 1e-12)) return 0.0;
          fail(ErrorKind::Domain, "green_potential evaluated outside B_r");
        }
        return r * r * green_potential_direct(scaled, Point(w / r), options);
      },
      "green:" + source.name(), r);
}

}  // namespace ellab
