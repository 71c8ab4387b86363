#include "ellab/functionals.hpp"
#include "ellab/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ellab {

namespace {

double max_gap(const std::vector<double>& grid) {
  double gap = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) gap = std::max(gap, std::abs(grid[i] - grid[i - 1]));
  return gap;
}

void take(NormReport& rep, double v, const Point& x) {
  if (std::isinf(v)) rep.infinite = true;
  if (v > rep.value || rep.argmax.size() == 0) {
    rep.value = std::max(rep.value, v);
    rep.argmax = x;
  }
}

}  // namespace

NormReport hardy_norm(const ScalarField& u, double nu, const std::vector<double>& radius_grid,
                      const QuadratureOrders& orders) {
  const int n = u.dimension();
  const SphereRule rule = SphereRule::for_dimension(n, orders);
  NormReport rep;
  for (double r : radius_grid) {
    if (!(r >= 0.0) || r > 1.0) fail(ErrorKind::Domain, "hardy_norm: radii must lie in [0, 1]");
    const double m = r == 0.0 ? std::abs(u(Point::Zero(n))) : surface_mean(u, r, rule, nu);
    take(rep, m, Point(r * unit_vector(n, 0)));
    rep.samples += r == 0.0 ? 1 : rule.size();
  }
  rep.resolution = max_gap(radius_grid);
  return rep;
}

std::vector<double> bloch_radius_grid(int count, double min_distance) {
  const int inner = std::max(2, count / 2);
  const int outer = std::max(2, count - inner);
  std::vector<double> g;
  for (int i = 0; i < inner; ++i) g.push_back(0.9 * i / inner);
  for (double d : log_grid(min_distance, 0.1, outer)) g.push_back(1.0 - d);
  std::sort(g.begin(), g.end());
  g.erase(std::unique(g.begin(), g.end()), g.end());
  return g;
}

NormReport weighted_mean_sup(const ScalarField& f, double nu, const Majorant& omega, const BlochWeight& weight,
                             const BlochSampling& sampling) {
  const int n = f.dimension();
  const std::vector<double> radii = bloch_radius_grid(sampling.radii, sampling.min_distance);
  NormReport rep;
  const SphereRule rule = SphereRule::for_dimension(n, sampling.orders);
  auto objective = [&](double r) {
    const double m = r == 0.0 ? f(Point::Zero(n)) : surface_mean(f, r, rule, nu);
    rep.samples += rule.size();
    return m * omega(phi_radius(weight, r));
  };
  std::size_t best = 0;
  std::vector<double> vals;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    vals.push_back(objective(radii[i]));
    if (vals[i] > vals[best]) best = i;
  }
  // golden-section refinement in the bracket around the best radius
  double a = radii[best > 0 ? best - 1 : 0];
  double b = radii[std::min(best + 1, radii.size() - 1)];
  double r_best = radii[best];
  double f_best = vals[best];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = objective(c), fd = objective(d);
  for (int it = 0; it < 40 && b - a > 1e-7; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = objective(d);
    }
  }
  for (auto [r, f] : {std::pair{c, fc}, std::pair{d, fd}})
    if (f > f_best) {
      f_best = f;
      r_best = r;
    }
  take(rep, f_best, Point(r_best * unit_vector(n, 0)));
  rep.resolution = b - a;
  return rep;
}

NormReport bloch_norm(const ScalarField& u, double nu, const Majorant& omega, const BlochWeight& weight,
                      const BlochSampling& sampling) {
  const int n = u.dimension();
  const double rmax = 1.0 - sampling.min_distance;
  const std::vector<double> radii = bloch_radius_grid(sampling.radii, sampling.min_distance);
  const double base = std::abs(u(Point::Zero(n)));
  NormReport rep;

  if (std::isinf(nu)) {
    auto objective = [&](const Point& x) {
      return u.gradient(x).norm() * omega(phi_radius(weight, std::min(x.norm(), rmax)));
    };
    const SphereRule dirs = n == 2 ? SphereRule::circle(sampling.circle_directions)
                                   : SphereRule::product(sampling.sphere_polar, sampling.sphere_azimuth);
    double best_r = 0.0;
    for (double r : radii) {
      for (std::size_t k = 0; k < (r == 0.0 ? 1 : dirs.size()); ++k) {
        const Point x = r * dirs.node(k);
        const double v = objective(x);
        ++rep.samples;
        if (v > rep.value || rep.argmax.size() == 0) best_r = r;
        take(rep, v, x);
      }
    }
    // compass search around the best sample, kept inside |x| <= rmax
    double step = std::max(0.5 * max_gap(radii), 1e-3);
    if (best_r > 0.0) step = std::min(step, std::max(0.5 * (1.0 - best_r), 1e-4));
    Point x = rep.argmax;
    double fx = rep.value;
    for (int it = 0; it < sampling.refine_iterations && step > 1e-7 && !rep.infinite; ++it) {
      bool moved = false;
      for (int axis = 0; axis < n && !moved; ++axis)
        for (double sgn : {1.0, -1.0}) {
          Point y = x;
          y[axis] += sgn * step;
          if (y.norm() > rmax) y *= rmax / y.norm();
          const double fy = objective(y);
          ++rep.samples;
          if (fy > fx) {
            x = y;
            fx = fy;
            moved = true;
            break;
          }
        }
      if (!moved) step *= 0.5;
    }
    take(rep, fx, x);
    rep.resolution = step;
  } else {
    const ScalarField grad_norm(n, [&u](const Point& x) { return u.gradient(x).norm(); }, "|grad u|");
    rep = weighted_mean_sup(grad_norm, nu, omega, weight, sampling);
  }
  rep.value += base;
  return rep;
}

double oscillation_mean(const ScalarField& u, const Domain& domain, const Point& x, double r,
                        const BallRule& rule) {
  if (!(r > 0.0)) fail(ErrorKind::Domain, "oscillation_mean: radius must be positive");
  if (domain.boundary_distance(x) < r * (1.0 - 1e-12))
    fail(ErrorKind::Domain, "oscillation_mean: ball B(x, r) leaves the domain");
  const double ux = u(x);
  return rule.integrate([&](const Point& y) { return std::abs(u(y) - ux); }, x, r);
}

double oscillation_mean(const ScalarField& u, const Point& x, double r) {
  const int n = u.dimension();
  const BallRule rule = BallRule::for_dimension(n, QuadratureOrders{512, 24, 48, 24});
  return oscillation_mean(u, BallDomain(n), x, r, rule);
}

NormReport lipschitz_constant(const ScalarField& u, const Majorant& omega,
                              const std::vector<std::pair<Point, Point>>& pairs) {
  NormReport rep;
  double closest = std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : pairs) {
    const double dist = (x - y).norm();
    if (dist == 0.0) continue;
    const double w = omega(dist);
    const double v = w > 0.0 ? std::abs(u(x) - u(y)) / w : std::numeric_limits<double>::infinity();
    ++rep.samples;
    closest = std::min(closest, dist);
    if (v > rep.value || rep.argmax.size() == 0) {
      rep.argmax = x;
      rep.argmax_pair = y;
    }
    take(rep, v, x);
  }
  rep.resolution = std::isfinite(closest) ? closest : 0.0;
  return rep;
}

std::vector<std::pair<Point, Point>> sample_pairs(int dim, std::size_t count, Rng& rng, double radius,
                                                  double close) {
  std::vector<std::pair<Point, Point>> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Point x = rng.in_ball(dim, radius);
    Point y;
    if (i % 2 == 0) {
      do {
        y = x + rng.in_ball(dim, close);
      } while (y.norm() >= radius);
    } else {
      y = rng.in_ball(dim, radius);
    }
    out.emplace_back(x, y);
  }
  return out;
}

DirichletResult dirichlet_energy(const ScalarField& u, double alpha, double gamma, double mu,
                                 const DirichletOptions& options) {
  const int n = u.dimension();
  if (!(alpha > 0.0)) fail(ErrorKind::Configuration, "dirichlet_energy: alpha must be positive");
  if (gamma < 0.0 || mu < 0.0) fail(ErrorKind::Configuration, "dirichlet_energy: gamma and mu must be nonnegative");
  const SphereRule dirs = n == 2 ? SphereRule::circle(options.circle_nodes)
                                 : SphereRule::product(options.sphere_polar, options.sphere_azimuth);
  const double surface = n * unit_ball_volume(n);
  auto integrand = [&](const Point& x) {
    const double d = 1.0 - x.squaredNorm();
    const double g = gamma == 0.0 ? 1.0 : std::pow(u.gradient(x).norm(), gamma);
    const double h = mu == 0.0 ? 1.0 : std::pow(hessian_frobenius_sq(u, x), mu);
    const double v = std::pow(d, alpha) * g * h;
    if (!std::isfinite(v)) fail(ErrorKind::Evaluation, "dirichlet_energy: integrand not finite at a node");
    return v;
  };
  auto shell = [&](double a, double b, int nodes) {
    const GaussRule gl = gauss_legendre(nodes, a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double s = gl.nodes[i];
      sum += gl.weights[i] * std::pow(s, n - 1) * dirs.integrate([&](const Point& z) { return integrand(Point(s * z)); });
    }
    return surface * sum;
  };
  DirichletResult res;
  double total = shell(0.0, 0.5, 2 * options.radial_nodes);
  res.partial.push_back(total);
  for (int k = 2; k <= options.shells; ++k) {
    total += shell(1.0 - std::pow(2.0, 1 - k), 1.0 - std::pow(2.0, -k), options.radial_nodes);
    res.partial.push_back(total);
  }
  res.truncated = total;
  const std::size_t m = res.partial.size();
  const double last = res.partial[m - 1] - res.partial[m - 2];
  const double prev = res.partial[m - 2] - res.partial[m - 3];
  const double scale = 1.0 + std::abs(total);
  if (std::abs(last) <= 1e-14 * scale) {
    res.tail_ratio = 0.0;
    res.value = total;
    return res;
  }
  res.tail_ratio = prev != 0.0 ? last / prev : std::numeric_limits<double>::infinity();
  if (!(res.tail_ratio < 0.95) || res.tail_ratio < 0.0) {
    res.divergent = !(std::abs(last) <= 1e-10 * scale);
  }
  if (res.divergent) {
    res.value = std::numeric_limits<double>::infinity();
  } else {
    const double q = std::clamp(res.tail_ratio, 0.0, 0.95);
    res.value = total + last * q / (1.0 - q);
  }
  return res;
}

double growth_normalizer(GrowthNormalizer kind, double r) {
  if (!(r >= 0.0) || r >= 1.0) fail(ErrorKind::Domain, "growth normalizer needs r in [0, 1)");
  const double L = std::log(1.0 / (1.0 - r));
  if (kind == GrowthNormalizer::Korenblum) return L > 0.0 ? std::sqrt(L) * std::log(L) : std::numeric_limits<double>::quiet_NaN();
  if (!(L > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double ll = std::log(std::log(L));
  return L > 1.0 ? std::sqrt(L * ll) : std::numeric_limits<double>::quiet_NaN();
}

std::vector<GrowthEntry> radial_growth_profile(const ScalarField& u, const Point& zeta,
                                               const std::vector<double>& r_grid, GrowthNormalizer kind) {
  std::vector<GrowthEntry> out;
  const Point dir = zeta / zeta.norm();
  for (double r : r_grid) {
    GrowthEntry e;
    e.r = r;
    e.value = std::abs(u(Point(r * dir)));
    const double nz = growth_normalizer(kind, r);
    e.defined = std::isfinite(nz) && nz > 0.0;
    e.normalizer = e.defined ? nz : 0.0;
    e.ratio = e.defined ? e.value / nz : 0.0;
    out.push_back(e);
  }
  return out;
}

std::string to_string(GrowthNormalizer kind) {
  return kind == GrowthNormalizer::Makarov ? "makarov" : "korenblum";
}

}  // namespace ellab
