#pragma once

#include "ellab/fields.hpp"
#include "ellab/functionals.hpp"
#include "ellab/geometry.hpp"
#include "ellab/majorants.hpp"
#include "ellab/quadrature.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace ellab {

enum class VerdictStatus { Pass, Fail, Unstable, HypothesisError, Error };

std::string to_string(VerdictStatus status);

/// Named columns of doubles, e.g. r / M_nu / rhs_bound / slack for growth checks.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Verdict {
  std::string theorem;
  std::vector<std::pair<std::string, std::string>> params;
  std::size_t samples = 0;
  /// Worst signed violation; the check passes iff max_violation <= tolerance.
  double max_violation = 0.0;
  double tolerance = 0.0;
  std::vector<std::pair<std::string, double>> constants;
  VerdictStatus status = VerdictStatus::Pass;
  bool pass = true;
  double runtime_seconds = 0.0;
  std::string message;
  std::vector<Table> tables;

  void add_param(const std::string& key, const std::string& value) { params.emplace_back(key, value); }
  void add_param(const std::string& key, double value);
  void add_constant(const std::string& key, double value) { constants.emplace_back(key, value); }
  /// Value of a named constant; configuration-error when absent.
  double constant(const std::string& key) const;
  /// Sets pass from the violation; a failing check becomes `fail_status` (Fail or Unstable).
  void settle(VerdictStatus fail_status = VerdictStatus::Fail);
};

/// Runs `check`, fills runtime, and turns exceptions into hypothesis-error /
/// error verdicts carrying `id` and the message.
Verdict run_guarded(const std::string& id, const std::function<Verdict()>& check);

/// Relative change of an empirical constant under doubling: |c2/c1 - 1|, 0 when both vanish,
/// +inf when only c1 vanishes or either is non-finite.
double refinement_growth(double c1, double c2);

inline constexpr double kGrowthSlack = 1e-8;
inline constexpr double kStabilityGrowth = 0.10;

struct ConstantOptions {
  std::size_t samples = 128;   // the refined pass uses twice as many
  std::uint64_t seed = 1;
  double max_growth = kStabilityGrowth;
};

/// Sup over (x, R) of |grad u(x)|^nu R^{nu+n} / (int_{B(x,R)} |u|^nu + int_{B(x,R)} |u|^{tau nu})
/// with Lebesgue integrals. Stable iff the sup grows <= max_growth when samples double.
Verdict verify_gradient_bound(const ScalarField& u, double tau, double nu, const ConstantOptions& options = {});

/// A = sup |grad u| omega(d^alpha) and B = sup_{r <= d(x)} oscillation_mean(u, x, r) omega(r^alpha) / r,
/// with the ratios A/B and B/A as the two direction constants.
Verdict verify_bloch_oscillation(const ScalarField& u, const Majorant& omega, double alpha,
                                 const ConstantOptions& options = {});

/// Weak-uniform-boundedness constant and k-Lipschitz constant of a planar map on the disk.
struct MetricOptions {
  std::size_t sources = 24;  // x samples; each carries `targets` y samples
  std::size_t targets = 6;
  double radius = 0.8;
  RasterOptions raster{192};
  std::uint64_t seed = 1;
  double max_growth = kStabilityGrowth;
};
Verdict verify_metric_equivalence(const VectorField& u, const std::vector<double>& lambdas,
                                  const MetricOptions& options = {});

struct GrowthOptions {
  std::size_t hypothesis_samples = 512;
  std::uint64_t seed = 1;
  BlochSampling sampling{};
  QuadratureOrders orders{512, 32, 64, 64};  // integral means on the r grid
  int integral_nodes = 96;                   // radial quadrature of the RHS integral
};

/// r_k = k / count for k = 0 .. count - 1.
std::vector<double> growth_radius_grid(int count = 20);

/// M_nu(u, r) against [|u(0)|^2 + nu(nu-1) N r^2 / omega(1) * I(r)]^{1/2} with
/// I(r) = int_0^1 t(1 - t^{n-2}) / ((n-2) phi(tr)) dt (t log(1/t) / phi(tr) for n = 2)
/// and N = |f(0)| + sup_rho M_nu(f, rho) omega(phi(rho)) for f = |grad u|^2 + u Lap u.
Verdict verify_growth(const ScalarField& u, double nu, const Majorant& omega, const BlochWeight& weight,
                      const std::vector<double>& r_grid, const GrowthOptions& options = {});

/// Implicit inequality for the Heinz class, and with `with_corollary` the
/// explicit bound M_nu <= (1 / C*) [|u(0)|^2 + ...]^{1/2} when Lap u = a2 u.
Verdict verify_heinz_growth(const ScalarField& u, const HeinzData& heinz, double nu, const Majorant& omega,
                            const BlochWeight& weight, const std::vector<double>& r_grid, bool with_corollary,
                            const GrowthOptions& options = {});

/// int_0^1 t(1 - t^{n-2}) / phi(tr)^p dt / (n - 2), or int_0^1 t log(1/t) / phi(tr)^p dt for n = 2.
double growth_kernel_integral(int n, const BlochWeight& weight, double r, double power, int nodes = 96);

struct ShellOptions {
  std::vector<double> epsilons{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  double tolerance = 1e-3;
  int radial_nodes = 24;      // per radial panel
  QuadratureOrders orders{256, 24, 48, 64};
  DirichletOptions dirichlet{};
};

/// Integrals of d^{beta nu} Lap(|grad u|^nu) over B(0, 1 - eps), beta = (n + alpha)/(2 mu) - 1.
/// Passes iff the last relative successive difference is <= tolerance.
Verdict verify_dirichlet_finiteness(const ScalarField& u, double alpha, double mu, double nu,
                                    const ShellOptions& options = {});

/// Pointwise Lap(|grad u|^nu) from derivatives up to third order.
double gradient_power_laplacian(const ScalarField& u, double nu, const Point& x);

struct MajorantOptions {
  std::size_t samples = 400;         // interior x per radius
  double sample_radius = 0.85;
  QuadratureOrders poisson{1024, 96, 192, 64};
  QuadratureOrders means{512, 48, 96, 64};
  int hardy_radii = 40;
  double domination_slack = 1e-6;
  double mean_tolerance = 1e-8;      // relative gap between G_r(0) and M_nu^nu
  std::uint64_t seed = 1;
  DirichletOptions dirichlet{};
};

/// alpha = 2 mu (1 + 1/nu) - n, the weight exponent tied to (nu, mu).
double majorant_alpha(int n, double nu, double mu);

/// G_r(x) = int (1 - |x|^2) / |x - zeta|^n |grad u(r zeta)|^nu dsigma against |grad u(r x)|^nu.
Verdict verify_harmonic_majorant(const ScalarField& u, double nu, double alpha, double mu,
                                 const std::vector<double>& r_seq, const MajorantOptions& options = {});

enum class SubharmonicTarget { AbsolutePower, HessianPower, GradientPower };
std::string to_string(SubharmonicTarget target);
/// Theorem id of the lemma behind each target.
std::string theorem_id(SubharmonicTarget target);

struct SubharmonicOptions {
  std::size_t samples = 1000;
  double step = 1e-3;          // FD step; zero sets are excluded within 10 steps
  double sample_radius = 0.9;
  double tolerance = 1e-6;     // relative to the local scale 1 + max |T| on the stencil
  double lambda = 0.0;         // for the Hessian target: Lap u = lambda u is checked first
  std::uint64_t seed = 1;
};
Verdict verify_subharmonicity(SubharmonicTarget target, const ScalarField& u, double nu,
                              const SubharmonicOptions& options = {});

/// Constants of |u(x)|^nu <= C r^{-n} int_{B(x,r)} |u|^nu and
/// |grad u(a)| <= C r^{-1} int |u(a + r zeta) - u(a)| dsigma, both checked for stability.
Verdict verify_mean_bound(const ScalarField& u, double nu, const ConstantOptions& options = {});

struct MeanValueCase {
  ScalarField g;
  ScalarField laplacian;  // invalid field: differentiate g instead
};
/// Polynomial catalog: all monomials of degree <= max_degree with exact Laplacians.
std::vector<MeanValueCase> polynomial_catalog(int dim, int max_degree);
/// Orders exact for the polynomial catalog of degree <= 6.
QuadratureOrders catalog_orders();
Verdict verify_mean_value(const std::vector<MeanValueCase>& catalog, const std::vector<double>& r_grid,
                          const QuadratureOrders& orders = catalog_orders());

/// (a + b)^iota <= 2^{max(iota - 1, 0)} (a^iota + b^iota) on random draws.
Verdict verify_power_inequality(std::size_t draws = 10000, std::uint64_t seed = 1);
/// phi(1 - r) and phi/omega(phi) nonincreasing in r, for random weights and majorants.
Verdict verify_majorant_monotonicity(std::size_t draws = 10000, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// Shipped test families

struct TestFunction {
  std::string name;
  ScalarField u;
  double lambda = 0.0;  // Lap u = lambda u
};

/// Radial Yukawa solutions with u(0) = 1, e.g. sinh(|x|)/|x| for n = 3, lambda = 1.
TestFunction radial_yukawa_member(int dim, double lambda);
/// x1, x1 x2 and a cubic harmonic polynomial.
std::vector<TestFunction> harmonic_family(int dim);

}  // namespace ellab
