#include "ellab/verifier.hpp"

#include "ellab/kernels.hpp"
#include "ellab/rng.hpp"
#include "ellab/solver.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

namespace ellab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string point_string(const Point& x) {
  std::string s = "(";
  for (int i = 0; i < x.size(); ++i) s += (i ? ", " : "") + num(x[i]);
  return s + ")";
}

// First few failing points of a hypothesis scan, as a message.
[[noreturn]] void hypothesis_failure(const std::string& what, const std::vector<Point>& bad, std::size_t total) {
  std::ostringstream os;
  os << what << " fails at " << bad.size() << " of " << total << " samples";
  for (std::size_t i = 0; i < std::min<std::size_t>(bad.size(), 5); ++i) os << (i ? ", " : ": ") << point_string(bad[i]);
  fail(ErrorKind::Hypothesis, os.str());
}

std::vector<Point> interior_samples(int n, std::size_t count, double radius, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back(rng.in_ball(n, radius));
  return pts;
}

void require_u_lap_u_nonnegative(const ScalarField& u, std::size_t samples, std::uint64_t seed) {
  std::vector<Point> bad;
  for (const Point& x : interior_samples(u.dimension(), samples, 0.999, seed ^ 0xa11ce)) {
    const double v = u(x);
    if (v * u.laplacian(x) < -1e-8 * (1.0 + v * v)) bad.push_back(x);
  }
  if (!bad.empty()) hypothesis_failure("u Lap u >= 0", bad, samples);
}

void require_majorant(const Majorant& omega) {
  if (!validate_majorant(omega, log_grid(1e-8, 1e2, 400)))
    fail(ErrorKind::Hypothesis, "omega is not a majorant: " + omega.name());
}

void require_weight(const BlochWeight& w) {
  if (!(w.alpha > 0.0) || w.beta > w.alpha)
    fail(ErrorKind::Hypothesis, "Bloch weight needs alpha > 0 and beta <= alpha");
}

SphereRule coarse_sphere(int n, int circle, int polar, int azimuth) {
  return n == 2 ? SphereRule::circle(circle) : SphereRule::product(polar, azimuth);
}

// Sup of the first half and of all per-sample values.
std::pair<double, double> half_and_full_sup(const std::vector<double>& values) {
  const std::size_t half = values.size() / 2;
  double c1 = 0.0, c2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i < half) c1 = std::max(c1, values[i]);
    c2 = std::max(c2, values[i]);
  }
  return {c1, c2};
}

void add_stable_constant(Verdict& v, const std::string& key, double c1, double c2, double& worst) {
  v.add_constant(key, c2);
  v.add_constant(key + "_half", c1);
  const double g = refinement_growth(c1, c2);
  v.add_constant(key + "_growth", g);
  worst = std::max(worst, std::isnan(g) ? kInf : g);
}

void settle_constants(Verdict& v, double worst_growth, double max_growth, bool finite) {
  v.tolerance = max_growth;
  v.max_violation = finite ? worst_growth : kInf;
  v.settle(finite ? VerdictStatus::Unstable : VerdictStatus::Fail);
}

void growth_params(Verdict& v, const ScalarField& u, double nu, const Majorant& omega, const BlochWeight& w) {
  v.add_param("field", u.name());
  v.add_param("dimension", static_cast<double>(u.dimension()));
  v.add_param("nu", nu);
  v.add_param("omega", omega.name());
  v.add_param("alpha", w.alpha);
  v.add_param("beta", w.beta);
}

double sup_of(const ScalarField& f, const std::vector<Point>& pts) {
  if (!f.valid()) return 0.0;
  double s = 0.0;
  for (const Point& x : pts) s = std::max(s, f(x));
  return s;
}

}  // namespace

std::string to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::Pass: return "pass";
    case VerdictStatus::Fail: return "fail";
    case VerdictStatus::Unstable: return "unstable";
    case VerdictStatus::HypothesisError: return "hypothesis-error";
    case VerdictStatus::Error: return "error";
  }
  return "error";
}

void Verdict::add_param(const std::string& key, double value) { params.emplace_back(key, num(value)); }

double Verdict::constant(const std::string& key) const {
  for (const auto& [k, v] : constants)
    if (k == key) return v;
  fail(ErrorKind::Configuration, "verdict " + theorem + " has no constant " + key);
}

void Verdict::settle(VerdictStatus fail_status) {
  pass = max_violation <= tolerance;
  status = pass ? VerdictStatus::Pass : fail_status;
}

Verdict run_guarded(const std::string& id, const std::function<Verdict()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const Error& e) {
    v = Verdict{};
    v.status = e.kind() == ErrorKind::Hypothesis ? VerdictStatus::HypothesisError : VerdictStatus::Error;
    v.message = std::string(to_string(e.kind())) + ": " + e.what();
  } catch (const std::exception& e) {
    v = Verdict{};
    v.status = VerdictStatus::Error;
    v.message = e.what();
  }
  if (v.status == VerdictStatus::HypothesisError || v.status == VerdictStatus::Error) {
    v.pass = false;
    v.max_violation = kInf;
  }
  v.theorem = id;
  v.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return v;
}

double refinement_growth(double c1, double c2) {
  if (!std::isfinite(c1) || !std::isfinite(c2)) return kInf;
  if (c1 == 0.0) return c2 == 0.0 ? 0.0 : kInf;
  return std::abs(c2 / c1 - 1.0);
}

// ---------------------------------------------------------------------------
// Empirical-constant checks

Verdict verify_gradient_bound(const ScalarField& u, double tau, double nu, const ConstantOptions& options) {
  if (!(tau >= 1.0) || !(nu > 0.0)) fail(ErrorKind::Hypothesis, "gradient bound needs tau >= 1 and nu > 0");
  const int n = u.dimension();
  const BallRule rule(n, 16, coarse_sphere(n, 64, 8, 16));
  Rng rng(options.seed);
  const std::size_t total = 2 * options.samples;
  std::vector<double> ratios;
  ratios.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const Point x = i == 0 ? Point(Point::Zero(n)) : rng.in_ball(n, 0.9);
    const double big_r = (1.0 - x.norm()) * rng.uniform(0.1, 0.999);
    const double lhs = std::pow(u.gradient(x).norm(), nu) * std::pow(big_r, nu + n);
    if (lhs == 0.0) {
      ratios.push_back(0.0);
      continue;
    }
    const double i1 = rule.integrate([&](const Point& y) { return std::pow(std::abs(u(y)), nu); }, x, big_r,
                                     VolumeMeasure::Lebesgue);
    const double i2 = tau == 1.0 ? i1
                                 : rule.integrate([&](const Point& y) { return std::pow(std::abs(u(y)), tau * nu); },
                                                  x, big_r, VolumeMeasure::Lebesgue);
    ratios.push_back(lhs / (i1 + i2));
  }
  Verdict v;
  v.theorem = "prop-1.1";
  v.add_param("field", u.name());
  v.add_param("tau", tau);
  v.add_param("nu", nu);
  v.samples = total;
  const auto [c1, c2] = half_and_full_sup(ratios);
  double worst = 0.0;
  add_stable_constant(v, "C", c1, c2, worst);
  settle_constants(v, worst, options.max_growth, std::isfinite(c2));
  return v;
}

Verdict verify_bloch_oscillation(const ScalarField& u, const Majorant& omega, double alpha,
                                 const ConstantOptions& options) {
  if (!(alpha >= 1.0 && alpha < 2.0)) fail(ErrorKind::Hypothesis, "oscillation characterization needs alpha in [1, 2)");
  require_majorant(omega);
  const int n = u.dimension();
  const BlochWeight w{alpha, 0.0};
  const double u0 = std::abs(u(Point::Zero(n)));

  BlochSampling coarse;
  BlochSampling fine = coarse;
  fine.radii *= 2;
  fine.circle_directions *= 2;
  fine.sphere_polar *= 2;
  fine.sphere_azimuth *= 2;
  fine.refine_iterations *= 2;
  const double a1 = std::max(0.0, bloch_norm(u, kInf, omega, w, coarse).value - u0);
  const double a2 = std::max(0.0, bloch_norm(u, kInf, omega, w, fine).value - u0);

  const BallDomain ball(n);
  const BallRule rule(n, 24, coarse_sphere(n, 96, 8, 16));
  Rng rng(options.seed);
  const std::size_t total = 2 * options.samples;
  std::vector<double> vals;
  vals.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const Point x = i == 0 ? Point(Point::Zero(n)) : rng.in_ball(n, 0.95);
    const double d = 1.0 - x.norm();
    double best = 0.0;
    for (double frac : {0.25, 0.5, 0.75, 0.999}) {
      const double r = frac * d;
      best = std::max(best, oscillation_mean(u, ball, x, r, rule) * omega(std::pow(r, alpha)) / r);
    }
    vals.push_back(best);
  }
  const auto [b1, b2] = half_and_full_sup(vals);

  Verdict v;
  v.theorem = "thm-1.2";
  v.add_param("field", u.name());
  v.add_param("omega", omega.name());
  v.add_param("alpha", alpha);
  v.samples = total;
  v.add_constant("A", a2);
  v.add_constant("B", b2);
  const bool finite = std::isfinite(a2) && std::isfinite(b2);
  // Comparability: A and B vanish together, otherwise both ratios are finite.
  if (finite && ((a2 == 0.0) != (b2 == 0.0))) {
    v.message = "one functional vanishes while the other does not";
    settle_constants(v, kInf, options.max_growth, true);
    return v;
  }
  auto ratio = [](double p, double q) { return q == 0.0 ? 0.0 : p / q; };
  double worst = 0.0;
  add_stable_constant(v, "A_over_B", ratio(a1, b1), ratio(a2, b2), worst);
  add_stable_constant(v, "B_over_A", ratio(b1, a1), ratio(b2, a2), worst);
  settle_constants(v, worst, options.max_growth, finite);
  return v;
}

Verdict verify_metric_equivalence(const VectorField& u, const std::vector<double>& lambdas,
                                  const MetricOptions& options) {
  if (u.dimension() != 2 || u.size() != 2) fail(ErrorKind::Configuration, "metric check needs a planar map of the disk");
  if (lambdas.size() != u.size()) fail(ErrorKind::Configuration, "one lambda per component required");
  for (double l : lambdas)
    if (!(l >= 0.0)) fail(ErrorKind::Hypothesis, "component equations need lambda >= 0");
  {
    std::vector<Point> bad;
    const auto pts = interior_samples(2, 64, 0.99, options.seed ^ 0x3e7);
    for (const Point& x : pts)
      for (std::size_t k = 0; k < u.size(); ++k) {
        const double val = u[k](x);
        if (std::abs(u[k].laplacian(x) - lambdas[k] * val) > 1e-6 * (1.0 + std::abs(lambdas[k] * val))) {
          bad.push_back(x);
          break;
        }
      }
    if (!bad.empty()) hypothesis_failure("Lap u_k = lambda_k u_k", bad, pts.size());
  }

  Verdict v;
  v.theorem = "thm-1.3";
  v.add_param("map", u[0].name() + ", " + u[1].name());
  v.add_param("lambda_1", lambdas[0]);
  v.add_param("lambda_2", lambdas[1]);
  const BallDomain ball(2);
  Rng rng(options.seed);
  const std::size_t total_sources = 2 * options.sources;
  std::vector<std::vector<std::pair<Point, Point>>> groups;
  for (std::size_t i = 0; i < total_sources; ++i) {
    const Point x = rng.in_ball(2, options.radius);
    const double d = 1.0 - x.norm();
    std::vector<std::pair<Point, Point>> g;
    for (std::size_t j = 0; j < options.targets; ++j) {
      const Point y = x + d * rng.uniform(0.05, 0.9) * rng.unit_direction(2);
      g.emplace_back(x, y);
    }
    groups.push_back(std::move(g));
  }
  v.samples = total_sources * options.targets;

  if (is_constant_map(u)) {
    v.message = "constant map";
    v.add_constant("weak_uniform", 0.0);
    v.add_constant("k_lipschitz", 0.0);
    settle_constants(v, 0.0, options.max_growth, true);
    return v;
  }
  const GridDomain image = rasterize_image(u, options.raster);
  v.add_param("image_spacing", image.spacing());

  std::vector<std::pair<Point, Point>> half_pairs, all_pairs;
  std::vector<double> k_ratios;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const Point fx = u(groups[i][0].first);
    std::vector<Point> fys;
    for (const auto& [x, y] : groups[i]) {
      fys.push_back(u(y));
      all_pairs.emplace_back(x, y);
      if (i < options.sources) half_pairs.emplace_back(x, y);
    }
    double best = 0.0;
    try {
      if (!image.contains(fx)) throw Error(ErrorKind::Domain, "image point outside raster");
      const auto k_img = image.quasihyperbolic_from(fx, fys);
      for (std::size_t j = 0; j < fys.size(); ++j) {
        const auto& [x, y] = groups[i][j];
        const double kb = ball.quasihyperbolic(x, y);
        if (kb > 0.0 && std::isfinite(k_img[j])) best = std::max(best, k_img[j] / kb);
      }
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Domain && e.kind() != ErrorKind::Unreachable) throw;
      ++skipped;
    }
    k_ratios.push_back(best);
  }
  const auto [k1, k2] = half_and_full_sup(k_ratios);
  const WeakUniformResult w1 = weak_uniform_bound_constant(u, ball, image, half_pairs);
  const WeakUniformResult w2 = weak_uniform_bound_constant(u, ball, image, all_pairs);
  v.add_constant("admissible_pairs", static_cast<double>(w2.admissible));
  v.add_constant("skipped_sources", static_cast<double>(skipped));
  double worst = 0.0;
  add_stable_constant(v, "weak_uniform", w1.constant, w2.constant, worst);
  add_stable_constant(v, "k_lipschitz", k1, k2, worst);
  const bool finite = std::isfinite(w2.constant) && std::isfinite(k2) && w2.admissible > 0;
  if (finite && ((w2.constant == 0.0) != (k2 == 0.0))) {
    v.message = "one constant vanishes while the other does not";
    worst = kInf;
  }
  settle_constants(v, worst, options.max_growth, finite);
  return v;
}

Verdict verify_mean_bound(const ScalarField& u, double nu, const ConstantOptions& options) {
  if (!(nu > 0.0)) fail(ErrorKind::Hypothesis, "mean bound needs nu > 0");
  const int n = u.dimension();
  const SphereRule sphere = coarse_sphere(n, 128, 12, 24);
  const BallRule rule(n, 16, coarse_sphere(n, 64, 8, 16));
  Rng rng(options.seed);
  const std::size_t total = 2 * options.samples;
  std::vector<double> c_mean, c_grad;
  for (std::size_t i = 0; i < total; ++i) {
    const Point x = i == 0 ? Point(Point::Zero(n)) : rng.in_ball(n, 0.9);
    const double r = (1.0 - x.norm()) * rng.uniform(0.1, 0.999);
    const double ux = u(x);
    const double lhs1 = std::pow(std::abs(ux), nu) * std::pow(r, n);
    const double int1 =
        lhs1 == 0.0 ? 1.0 : rule.integrate([&](const Point& y) { return std::pow(std::abs(u(y)), nu); }, x, r,
                                           VolumeMeasure::Lebesgue);
    c_mean.push_back(lhs1 == 0.0 ? 0.0 : lhs1 / int1);
    const double lhs2 = u.gradient(x).norm() * r;
    double int2 = 1.0;
    if (lhs2 != 0.0) {
      int2 = 0.0;
      for (std::size_t j = 0; j < sphere.size(); ++j)
        int2 += sphere.weight(j) * std::abs(u(Point(x + r * sphere.node(j))) - ux);
    }
    c_grad.push_back(lhs2 == 0.0 ? 0.0 : lhs2 / int2);
  }
  Verdict v;
  v.theorem = "lem-2.3";
  v.add_param("field", u.name());
  v.add_param("nu", nu);
  v.samples = total;
  double worst = 0.0;
  const auto [m1, m2] = half_and_full_sup(c_mean);
  const auto [g1, g2] = half_and_full_sup(c_grad);
  add_stable_constant(v, "C_mean", m1, m2, worst);
  add_stable_constant(v, "C_gradient", g1, g2, worst);
  settle_constants(v, worst, options.max_growth, std::isfinite(m2) && std::isfinite(g2));
  return v;
}

// ---------------------------------------------------------------------------
// Growth bounds

std::vector<double> growth_radius_grid(int count) {
  std::vector<double> g(count);
  for (int k = 0; k < count; ++k) g[k] = static_cast<double>(k) / count;
  return g;
}

double growth_kernel_integral(int n, const BlochWeight& weight, double r, double power, int nodes) {
  const GaussRule gl = gauss_legendre(nodes, 0.0, 1.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double s = gl.nodes[i];
    if (n == 2) {
      // t = s^2 smooths the t log(1/t) endpoint
      const double t = s * s;
      sum += gl.weights[i] * 2.0 * s * t * std::log(1.0 / t) / std::pow(phi_radius(weight, t * r), power);
    } else {
      sum += gl.weights[i] * s * (1.0 - std::pow(s, n - 2)) / (n - 2) / std::pow(phi_radius(weight, s * r), power);
    }
  }
  return sum;
}

namespace {

struct GrowthContext {
  int n;
  double u0;
  std::vector<double> lhs;
};

GrowthContext growth_lhs(const ScalarField& u, double nu, const std::vector<double>& r_grid, const GrowthOptions& o) {
  GrowthContext c;
  c.n = u.dimension();
  c.u0 = std::abs(u(Point::Zero(c.n)));
  const SphereRule rule = SphereRule::for_dimension(c.n, o.orders);
  for (double r : r_grid) {
    if (!(r >= 0.0 && r < 1.0)) fail(ErrorKind::Configuration, "growth radii must lie in [0, 1)");
    c.lhs.push_back(r == 0.0 ? c.u0 : surface_mean(u, r, rule, nu));
  }
  return c;
}

Table growth_table(const std::string& name, const std::vector<double>& r_grid, const std::vector<double>& lhs,
                   const std::vector<double>& rhs) {
  Table t{name, {"r", "M_nu", "rhs_bound", "slack"}, {}};
  for (std::size_t i = 0; i < r_grid.size(); ++i) t.rows.push_back({r_grid[i], lhs[i], rhs[i], rhs[i] - lhs[i]});
  return t;
}

}  // namespace

Verdict verify_growth(const ScalarField& u, double nu, const Majorant& omega, const BlochWeight& weight,
                      const std::vector<double>& r_grid, const GrowthOptions& options) {
  if (!(nu >= 2.0) || !std::isfinite(nu)) fail(ErrorKind::Hypothesis, "growth bound needs finite nu >= 2");
  require_weight(weight);
  require_majorant(omega);
  require_u_lap_u_nonnegative(u, options.hypothesis_samples, options.seed);
  const int n = u.dimension();

  const ScalarField f(
      n,
      [&u](const Point& x) {
        const Vector g = u.gradient(x);
        return g.squaredNorm() + u(x) * u.laplacian(x);
      },
      "|grad u|^2 + u Lap u");
  const double f0 = std::abs(f(Point::Zero(n)));
  const NormReport sup = weighted_mean_sup(f, nu, omega, weight, options.sampling);
  const double norm_f = f0 + sup.value;
  const NormReport grad_form = bloch_norm(f, nu, omega, weight, options.sampling);

  const GrowthContext c = growth_lhs(u, nu, r_grid, options);
  const double w1 = omega(1.0);
  std::vector<double> rhs;
  double worst = -kInf;
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i];
    const double integral = r == 0.0 ? 0.0 : growth_kernel_integral(n, weight, r, 1.0, options.integral_nodes);
    const double bound = std::sqrt(c.u0 * c.u0 + nu * (nu - 1.0) * norm_f * r * r / w1 * integral);
    rhs.push_back(bound);
    worst = std::max(worst, c.lhs[i] - bound);
  }
  Verdict v;
  v.theorem = "thm-1.4";
  growth_params(v, u, nu, omega, weight);
  v.samples = r_grid.size();
  v.tolerance = kGrowthSlack;
  v.max_violation = worst;
  v.add_constant("weighted_mean_norm", norm_f);
  v.add_constant("gradient_form_norm", grad_form.value);
  v.add_constant("u0", c.u0);
  v.tables.push_back(growth_table("thm-1.4", r_grid, c.lhs, rhs));
  v.settle();
  return v;
}

Verdict verify_heinz_growth(const ScalarField& u, const HeinzData& heinz, double nu, const Majorant& omega,
                            const BlochWeight& weight, const std::vector<double>& r_grid, bool with_corollary,
                            const GrowthOptions& options) {
  if (!(nu >= 2.0) || !std::isfinite(nu)) fail(ErrorKind::Hypothesis, "Heinz growth bound needs finite nu >= 2");
  try {
    heinz.validate();
  } catch (const Error& e) {
    fail(ErrorKind::Hypothesis, e.what());
  }
  require_weight(weight);
  require_majorant(omega);
  const int n = u.dimension();
  const auto pts = interior_samples(n, options.hypothesis_samples, 0.999, options.seed ^ 0x4e12);
  const double a1 = sup_of(heinz.a1, pts), a2 = sup_of(heinz.a2, pts), a3 = sup_of(heinz.a3, pts);
  if (!(a2 < 2.0 * n / nu)) fail(ErrorKind::Hypothesis, "sup a2 = " + num(a2) + " is not below 2n/nu");
  if (!std::isfinite(a1) || !std::isfinite(a3)) fail(ErrorKind::Hypothesis, "sup a1 and sup a3 must be finite");
  {
    std::vector<Point> bad;
    for (const Point& x : pts) {
      const double scale = 1.0 + std::abs(u.laplacian(x));
      if (heinz_residual(u, heinz, x) < -1e-8 * scale) bad.push_back(x);
    }
    if (!bad.empty()) hypothesis_failure("|Lap u| <= a1|grad u|^b1 + a2|u|^b2 + a3", bad, pts.size());
  }
  require_u_lap_u_nonnegative(u, options.hypothesis_samples, options.seed);
  if (with_corollary) {
    if (!(a2 < nu / (2.0 * n))) fail(ErrorKind::Hypothesis, "corollary needs sup lambda < nu/(2n)");
    std::vector<Point> bad;
    for (const Point& x : pts) {
      const double rhs = heinz.a2.valid() ? heinz.a2(x) * u(x) : 0.0;
      if (std::abs(u.laplacian(x) - rhs) > 1e-6 * (1.0 + std::abs(rhs))) bad.push_back(x);
    }
    if (!bad.empty()) hypothesis_failure("Lap u = lambda u with lambda = a2", bad, pts.size());
  }

  const NormReport bn = bloch_norm(u, nu, omega, weight, options.sampling);
  if (bn.infinite || !std::isfinite(bn.value)) fail(ErrorKind::Hypothesis, "Bloch-type norm of u is not finite");
  const double norm_u = bn.value;
  const GrowthContext c = growth_lhs(u, nu, r_grid, options);
  const double w1 = omega(1.0);
  const double b1 = heinz.b1, b2 = heinz.b2;

  std::vector<double> bracket_root, cor_bound;
  double worst = -kInf;
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    const double r = r_grid[i], m = c.lhs[i];
    const double i2 = r == 0.0 ? 0.0 : growth_kernel_integral(n, weight, r, 2.0, options.integral_nodes);
    const double ib = r == 0.0 ? 0.0 : growth_kernel_integral(n, weight, r, b1, options.integral_nodes);
    const double base = c.u0 * c.u0 + nu * (nu - 1.0) / (w1 * w1) * norm_u * norm_u * r * r * i2;
    const double bracket = base + nu * a1 / std::pow(w1, b1) * std::pow(norm_u, b1) * r * r * m * ib +
                           nu * a2 / (2.0 * n) * r * r * std::pow(m, 1.0 + b2) + nu * a3 / (2.0 * n) * r * r * m;
    bracket_root.push_back(std::sqrt(bracket));
    worst = std::max(worst, m * m - bracket);
    if (with_corollary) {
      const double c_star = std::sqrt(1.0 - r * r * nu * a2 / (2.0 * n));
      const double bound = std::sqrt(base) / c_star;
      cor_bound.push_back(bound);
      worst = std::max(worst, m - bound);
    }
  }
  Verdict v;
  v.theorem = with_corollary ? "cor-1.5" : "thm-1.5";
  growth_params(v, u, nu, omega, weight);
  v.add_param("b1", b1);
  v.add_param("b2", b2);
  v.samples = r_grid.size();
  v.tolerance = kGrowthSlack;
  v.max_violation = worst;
  v.add_constant("bloch_norm", norm_u);
  v.add_constant("sup_a1", a1);
  v.add_constant("sup_a2", a2);
  v.add_constant("sup_a3", a3);
  v.tables.push_back(growth_table("thm-1.5", r_grid, c.lhs, bracket_root));
  if (with_corollary) v.tables.push_back(growth_table("cor-1.5", r_grid, c.lhs, cor_bound));
  v.settle();
  return v;
}

// ---------------------------------------------------------------------------
// Weighted Laplacian integrals and harmonic majorants

double gradient_power_laplacian(const ScalarField& u, double nu, const Point& x) {
  const Vector g = u.gradient(x);
  const Matrix h = u.hessian(x);
  const Vector lg = laplacian_gradient(u, x);
  const double q = g.norm();
  const double hh = h.squaredNorm();
  if (q == 0.0) {
    if (nu == 2.0) return 2.0 * hh;
    return nu > 2.0 ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  }
  const Vector hg = h * g;
  return nu * std::pow(q, nu - 2.0) * (hh + g.dot(lg)) + nu * (nu - 2.0) * std::pow(q, nu - 4.0) * hg.squaredNorm();
}

Verdict verify_dirichlet_finiteness(const ScalarField& u, double alpha, double mu, double nu,
                                    const ShellOptions& options) {
  const int n = u.dimension();
  if (!(mu >= 1.0 && mu <= 0.5 * n)) fail(ErrorKind::Hypothesis, "needs mu in [1, n/2]");
  if (!(nu >= 2.0)) fail(ErrorKind::Hypothesis, "needs nu >= 2");
  if (!(alpha > 0.0)) fail(ErrorKind::Hypothesis, "needs alpha > 0");
  if (options.epsilons.size() < 2) fail(ErrorKind::Configuration, "shell grid needs at least two epsilons");
  const DirichletResult d = dirichlet_energy(u, alpha, 0.0, mu, options.dirichlet);
  if (d.divergent || !std::isfinite(d.value)) fail(ErrorKind::Hypothesis, "D(alpha, 0, mu) is not finite");
  const double beta = (n + alpha) / (2.0 * mu) - 1.0;
  std::vector<double> eps = options.epsilons;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  if (!(eps.front() < 1.0) || !(eps.back() > 0.0)) fail(ErrorKind::Configuration, "epsilons must lie in (0, 1)");

  const SphereRule sphere = SphereRule::for_dimension(n, options.orders);
  const double area = n * unit_ball_volume(n);
  auto panel = [&](double a, double b) {
    const GaussRule gl = gauss_legendre(options.radial_nodes, a, b);
    double sum = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double s = gl.nodes[i];
      double mean = 0.0;
      for (std::size_t j = 0; j < sphere.size(); ++j)
        mean += sphere.weight(j) * gradient_power_laplacian(u, nu, Point(s * sphere.node(j)));
      sum += gl.weights[i] * area * std::pow(s, n - 1) * std::pow(1.0 - s, beta * nu) * mean;
    }
    return sum;
  };
  // Panels [0, 1/2], then geometric up to 1 - eps_0, then between consecutive shells.
  double total = 0.0;
  double a = 0.0;
  for (double b : {0.5, 0.75, 0.875}) {
    if (b >= 1.0 - eps.front()) break;
    total += panel(a, b);
    a = b;
  }
  Table table{"thm-1.6", {"epsilon", "integral"}, {}};
  std::vector<double> seq;
  for (double e : eps) {
    const double b = 1.0 - e;
    if (b > a) {
      total += panel(a, b);
      a = b;
    }
    seq.push_back(total);
    table.rows.push_back({e, total});
  }
  const double last = seq.back(), prev = seq[seq.size() - 2];
  const double rel = last == prev ? 0.0 : std::abs(last - prev) / std::max(std::abs(last), 1e-300);

  Verdict v;
  v.theorem = "thm-1.6";
  v.add_param("field", u.name());
  v.add_param("alpha", alpha);
  v.add_param("mu", mu);
  v.add_param("nu", nu);
  v.add_constant("beta", beta);
  v.add_constant("dirichlet_energy", d.value);
  v.add_constant("integral", last);
  v.add_constant("relative_difference", rel);
  v.samples = eps.size();
  v.tolerance = options.tolerance;
  v.max_violation = std::isfinite(rel) ? rel : kInf;
  v.tables.push_back(std::move(table));
  v.settle();
  return v;
}

double majorant_alpha(int n, double nu, double mu) { return 2.0 * mu * (1.0 + 1.0 / nu) - n; }

Verdict verify_harmonic_majorant(const ScalarField& u, double nu, double alpha, double mu,
                                 const std::vector<double>& r_seq, const MajorantOptions& options) {
  const int n = u.dimension();
  if (!(nu >= 1.0) || !std::isfinite(nu)) fail(ErrorKind::Hypothesis, "needs finite nu >= 1");
  if (!(mu >= 1.0 && mu <= 0.5 * n)) fail(ErrorKind::Hypothesis, "needs mu in [1, n/2]");
  if (!(alpha > 0.0)) fail(ErrorKind::Hypothesis, "needs alpha > 0");
  if (std::abs((n + alpha) / (2.0 * mu) - 1.0 - 1.0 / nu) > 1e-12)
    fail(ErrorKind::Hypothesis, "constraint (n + alpha)/(2 mu) - 1 = 1/nu violated");
  const DirichletResult d = dirichlet_energy(u, alpha, 0.0, mu, options.dirichlet);
  if (d.divergent || !std::isfinite(d.value)) fail(ErrorKind::Hypothesis, "D(alpha, 0, mu) is not finite");

  const ScalarField grad_norm(n, [&u](const Point& x) { return u.gradient(x).norm(); }, "|grad u|");
  const NormReport hardy = hardy_norm(grad_norm, nu, open_unit_grid(options.hardy_radii), options.means);
  const bool hardy_finite = !hardy.infinite && std::isfinite(hardy.value);

  const SphereRule poisson = SphereRule::for_dimension(n, options.poisson);
  const SphereRule means = SphereRule::for_dimension(n, options.means);
  const auto pts = interior_samples(n, options.samples, options.sample_radius, options.seed);
  double worst_ratio = 0.0, worst_gap = 0.0;
  Table table{"thm-1.7", {"r", "G_r(0)", "M_nu^nu", "max_ratio"}, {}};
  for (double r : r_seq) {
    if (!(r > 0.0 && r < 1.0)) fail(ErrorKind::Configuration, "majorant radii must lie in (0, 1)");
    std::vector<double> t(poisson.size());
    for (std::size_t j = 0; j < poisson.size(); ++j) t[j] = std::pow(grad_norm(Point(r * poisson.node(j))), nu);
    double g0 = 0.0;
    for (std::size_t j = 0; j < poisson.size(); ++j) g0 += poisson.weight(j) * t[j];
    const double m = std::pow(surface_mean(grad_norm, r, means, nu), nu);
    const double gap = std::abs(g0 - m) / std::max(std::abs(m), 1e-300);
    worst_gap = std::max(worst_gap, m == g0 ? 0.0 : gap);
    double max_ratio = 0.0;
    for (const Point& x : pts) {
      const double x2 = x.squaredNorm();
      double g = 0.0;
      for (std::size_t j = 0; j < poisson.size(); ++j)
        g += poisson.weight(j) * (1.0 - x2) / std::pow((x - poisson.node(j)).norm(), n) * t[j];
      const double lhs = std::pow(grad_norm(Point(r * x)), nu);
      const double ratio = lhs == 0.0 ? 0.0 : (g > 0.0 ? lhs / g : kInf);
      max_ratio = std::max(max_ratio, ratio);
    }
    worst_ratio = std::max(worst_ratio, max_ratio);
    table.rows.push_back({r, g0, m, max_ratio});
  }
  Verdict v;
  v.theorem = "thm-1.7";
  v.add_param("field", u.name());
  v.add_param("nu", nu);
  v.add_param("alpha", alpha);
  v.add_param("mu", mu);
  v.samples = pts.size() * r_seq.size();
  v.add_constant("hardy_norm", hardy.value);
  v.add_constant("dirichlet_energy", d.value);
  v.add_constant("max_domination_ratio", worst_ratio);
  v.add_constant("max_center_gap", worst_gap);
  v.tolerance = 0.0;
  v.max_violation = hardy_finite ? std::max(worst_ratio - (1.0 + options.domination_slack),
                                            worst_gap - options.mean_tolerance)
                                 : kInf;
  v.tables.push_back(std::move(table));
  v.settle();
  return v;
}

// ---------------------------------------------------------------------------
// Subharmonicity

std::string to_string(SubharmonicTarget target) {
  switch (target) {
    case SubharmonicTarget::AbsolutePower: return "abs-power";
    case SubharmonicTarget::HessianPower: return "hessian-power";
    case SubharmonicTarget::GradientPower: return "gradient-power";
  }
  return "?";
}

std::string theorem_id(SubharmonicTarget target) {
  switch (target) {
    case SubharmonicTarget::AbsolutePower: return "lem-2.1";
    case SubharmonicTarget::HessianPower: return "lem-cw4";
    case SubharmonicTarget::GradientPower: return "lem-cw5";
  }
  return "?";
}

Verdict verify_subharmonicity(SubharmonicTarget target, const ScalarField& u, double nu,
                              const SubharmonicOptions& options) {
  if (!(nu >= 1.0)) fail(ErrorKind::Hypothesis, "subharmonic powers need nu >= 1");
  const int n = u.dimension();
  const auto pts = interior_samples(n, options.samples, options.sample_radius, options.seed);

  std::vector<Point> bad;
  for (const Point& x : pts) {
    switch (target) {
      case SubharmonicTarget::AbsolutePower: {
        const double val = u(x);
        if (val * u.laplacian(x) < -1e-8 * (1.0 + val * val)) bad.push_back(x);
        break;
      }
      case SubharmonicTarget::HessianPower: {
        if (!(options.lambda >= 0.0)) fail(ErrorKind::Hypothesis, "needs constant lambda >= 0");
        const double rhs = options.lambda * u(x);
        if (std::abs(u.laplacian(x) - rhs) > 1e-6 * (1.0 + std::abs(rhs))) bad.push_back(x);
        break;
      }
      case SubharmonicTarget::GradientPower: {
        const Vector g = u.gradient(x);
        const double s = g.dot(laplacian_gradient(u, x));
        if (s < -1e-6 * (1.0 + g.squaredNorm())) bad.push_back(x);
        break;
      }
    }
  }
  if (!bad.empty()) {
    const char* what = target == SubharmonicTarget::AbsolutePower   ? "u Lap u >= 0"
                       : target == SubharmonicTarget::HessianPower ? "Lap u = lambda u with constant lambda >= 0"
                                                                    : "sum u_k (Lap u)_k >= 0";
    hypothesis_failure(what, bad, pts.size());
  }

  // base b with T = b^p: |u|, sqrt(sum H^2), |grad u|
  auto base = [&](const Point& x) {
    switch (target) {
      case SubharmonicTarget::AbsolutePower: return std::abs(u(x));
      case SubharmonicTarget::HessianPower: return u.hessian(x).norm();
      case SubharmonicTarget::GradientPower: return u.gradient(x).norm();
    }
    return 0.0;
  };
  const double power = target == SubharmonicTarget::HessianPower ? 2.0 * nu : nu;
  auto value = [&](const Point& x) { return std::pow(base(x), power); };

  const double h = options.step;
  const double exclusion = 10.0 * h;
  const SphereRule ring1 = coarse_sphere(n, 256, 32, 64);
  const SphereRule ring2 = coarse_sphere(n, 512, 64, 128);
  double worst = -kInf;
  std::size_t excluded = 0;
  for (const Point& x : pts) {
    const double bx = base(x);
    Vector db(n);
    for (int k = 0; k < n; ++k) {
      const Point e = h * unit_vector(n, k);
      db[k] = (base(Point(x + e)) - base(Point(x - e))) / (2.0 * h);
    }
    const double t0 = value(x);
    if (bx <= exclusion * db.norm() || bx == 0.0) {
      // near the zero set: sub-mean value on a sphere of the exclusion radius,
      // less the quadrature error estimated from two resolutions
      ++excluded;
      auto mean = [&](const SphereRule& rule) {
        double s = 0.0;
        for (std::size_t j = 0; j < rule.size(); ++j) s += rule.weight(j) * value(Point(x + exclusion * rule.node(j)));
        return s;
      };
      const double m1 = mean(ring1), m2 = mean(ring2);
      const double scale = 1.0 + std::abs(t0);
      worst = std::max(worst, (t0 - m2 - std::abs(m2 - m1)) / scale);
      continue;
    }
    double lap = 0.0, scale = std::abs(t0);
    for (int k = 0; k < n; ++k) {
      const Point e = h * unit_vector(n, k);
      const double p1 = value(Point(x + e)), m1 = value(Point(x - e));
      const double p2 = value(Point(x + 2.0 * e)), m2 = value(Point(x - 2.0 * e));
      lap += (-p2 + 16.0 * p1 - 30.0 * t0 + 16.0 * m1 - m2) / (12.0 * h * h);
      scale = std::max({scale, std::abs(p1), std::abs(m1), std::abs(p2), std::abs(m2)});
    }
    worst = std::max(worst, -lap / (1.0 + scale));
  }
  Verdict v;
  v.theorem = theorem_id(target);
  v.add_param("target", to_string(target));
  v.add_param("field", u.name());
  v.add_param("nu", nu);
  v.add_param("lambda", options.lambda);
  v.add_param("fd_step", h);
  v.add_param("exclusion_radius", exclusion);
  v.samples = pts.size();
  v.add_constant("excluded_samples", static_cast<double>(excluded));
  v.tolerance = options.tolerance;
  v.max_violation = worst;
  v.settle();
  return v;
}

// ---------------------------------------------------------------------------
// Mean-value identity and scalar inequalities

std::vector<MeanValueCase> polynomial_catalog(int dim, int max_degree) {
  std::vector<MeanValueCase> out;
  for (const Polynomial& p : Polynomial::monomials_up_to(dim, max_degree))
    out.push_back({p.field(), p.laplacian().field()});
  return out;
}

QuadratureOrders catalog_orders() { return {32, 8, 16, 64}; }

Verdict verify_mean_value(const std::vector<MeanValueCase>& catalog, const std::vector<double>& r_grid,
                          const QuadratureOrders& orders) {
  Verdict v;
  v.theorem = "thm-B";
  v.add_param("catalog_size", static_cast<double>(catalog.size()));
  Table table{"thm-B", {"r", "max_residual"}, {}};
  double worst = 0.0;
  std::vector<double> per_r(r_grid.size(), 0.0);
  int rule_dim = 0;
  BallRule rule(2, 1, SphereRule::circle(4));
  for (const MeanValueCase& c : catalog) {
    const int n = c.g.dimension();
    if (n != rule_dim) {
      rule = green_ball_rule(n, orders);
      rule_dim = n;
    }
    for (std::size_t i = 0; i < r_grid.size(); ++i) {
      const MeanValueSides s =
          c.laplacian.valid() ? mean_value_sides(c.g, c.laplacian, r_grid[i], rule) : mean_value_sides(c.g, r_grid[i], rule);
      const double res = std::isfinite(s.residual()) ? s.residual() : kInf;
      per_r[i] = std::max(per_r[i], res);
      worst = std::max(worst, res);
    }
  }
  for (std::size_t i = 0; i < r_grid.size(); ++i) table.rows.push_back({r_grid[i], per_r[i]});
  v.samples = catalog.size() * r_grid.size();
  v.tolerance = 1e-8;
  v.max_violation = worst;
  v.add_constant("max_residual", worst);
  v.tables.push_back(std::move(table));
  v.settle();
  return v;
}

Verdict verify_power_inequality(std::size_t draws, std::uint64_t seed) {
  Rng rng(seed);
  double worst = -kInf;
  std::size_t violations = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double a = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, 10.0);
    const double b = rng.uniform() < 0.1 ? 0.0 : rng.uniform(0.0, 10.0);
    const double iota = rng.uniform(1e-3, 6.0);
    const double lhs = std::pow(a + b, iota);
    const double rhs = std::pow(2.0, std::max(iota - 1.0, 0.0)) * (std::pow(a, iota) + std::pow(b, iota));
    const double rel = rhs == 0.0 ? (lhs == 0.0 ? 0.0 : kInf) : (lhs - rhs) / rhs;
    if (rel > 1e-12) ++violations;
    worst = std::max(worst, rel);
  }
  Verdict v;
  v.theorem = "lem-lemx";
  v.samples = draws;
  v.tolerance = 1e-12;
  v.max_violation = worst;
  v.add_constant("violations", static_cast<double>(violations));
  v.settle();
  return v;
}

Verdict verify_majorant_monotonicity(std::size_t draws, std::uint64_t seed) {
  Rng rng(seed);
  const std::vector<double> grid = open_unit_grid(200);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double alpha = rng.uniform(0.05, 3.0);
    const BlochWeight w{alpha, rng.uniform(-2.0, alpha)};
    Majorant omega = Majorant::identity();
    if (i % 2 == 0) {
      omega = Majorant::power(rng.uniform(0.05, 1.0));
    } else {
      // concave piecewise-linear table through the origin
      std::vector<double> t{0.0}, val{0.0};
      double slope = rng.uniform(0.5, 4.0);
      for (int k = 0; k < 6; ++k) {
        const double next = t.back() + rng.uniform(0.01, 0.4);
        val.push_back(val.back() + slope * (next - t.back()));
        t.push_back(next);
        slope *= rng.uniform(0.2, 1.0);
      }
      omega = Majorant::table(t, val);
    }
    if (!check_phi_monotone(w, omega, grid)) ++violations;
  }
  Verdict v;
  v.theorem = "lem-5";
  v.samples = draws;
  v.tolerance = 0.0;
  v.max_violation = static_cast<double>(violations);
  v.add_constant("violations", static_cast<double>(violations));
  v.settle();
  return v;
}

// ---------------------------------------------------------------------------

TestFunction radial_yukawa_member(int dim, double lambda) {
  TestFunction t;
  t.lambda = lambda;
  t.u = radial_oracle(dim, lambda);
  t.name = "radial-yukawa(n=" + std::to_string(dim) + ", lambda=" + num(lambda) + ")";
  return t;
}

std::vector<TestFunction> harmonic_family(int dim) {
  std::vector<TestFunction> out;
  const Polynomial x1 = Polynomial::monomial(dim, dim == 2 ? std::vector<int>{1, 0} : std::vector<int>{1, 0, 0});
  const Polynomial x1x2 = Polynomial::monomial(dim, dim == 2 ? std::vector<int>{1, 1} : std::vector<int>{1, 1, 0});
  const Polynomial cubic = dim == 2 ? Polynomial(2, {{1.0, {3, 0}}, {-3.0, {1, 2}}}) : Polynomial(3, {{1.0, {1, 1, 1}}});
  for (const Polynomial& p : {x1, x1x2, cubic}) out.push_back({p.to_string(), p.field(), 0.0});
  return out;
}

}  // namespace ellab
