#pragma once

#include "ellab/fields.hpp"
#include "ellab/geometry.hpp"
#include "ellab/majorants.hpp"
#include "ellab/quadrature.hpp"
#include "ellab/rng.hpp"

#include <string>
#include <utility>
#include <vector>

namespace ellab {

/// Sampled supremum. Always a lower bound for the true sup; `resolution` is the
/// finest spacing used in the final scan.
struct NormReport {
  double value = 0.0;
  bool infinite = false;
  Point argmax;
  Point argmax_pair;  // second point for pair functionals
  double resolution = 0.0;
  std::size_t samples = 0;
};

/// sup_r M_nu(u, r) over the grid (r = 0 reads |u(0)|).
NormReport hardy_norm(const ScalarField& u, double nu, const std::vector<double>& radius_grid,
                      const QuadratureOrders& orders = {});

struct BlochSampling {
  int radii = 48;            // coarse radii, denser towards the sphere
  double min_distance = 1e-3;
  int circle_directions = 64;
  int sphere_polar = 8;
  int sphere_azimuth = 16;
  int refine_iterations = 200;
  QuadratureOrders orders{128, 16, 32, 64};  // surface means for finite nu
};

/// Radii in [0, 1 - min_distance]: half equispaced on [0, 0.9], half log-spaced in distance.
std::vector<double> bloch_radius_grid(int count, double min_distance);

/// sup_r M_nu(f, r) omega(phi(1 - r)) over the Bloch radius grid, refined around the best radius.
NormReport weighted_mean_sup(const ScalarField& f, double nu, const Majorant& omega, const BlochWeight& weight,
                             const BlochSampling& sampling = {});

/// |u(0)| + sup |grad u(x)| omega(phi(x)) for nu = inf, and
/// |u(0)| + sup_r M_nu(|grad u|, r) omega(phi(1 - r)) for finite nu (a radial scan,
/// since the weight depends on x only through |x|). Coarse scan then local refinement.
NormReport bloch_norm(const ScalarField& u, double nu, const Majorant& omega, const BlochWeight& weight,
                      const BlochSampling& sampling = {});

/// Mean of |u(y) - u(x)| over B(x, r) (normalized measure). The ball must lie in the domain.
double oscillation_mean(const ScalarField& u, const Domain& domain, const Point& x, double r,
                        const BallRule& rule);
double oscillation_mean(const ScalarField& u, const Point& x, double r);

/// sup |u(x) - u(y)| / omega(|x - y|) over the pairs; coincident pairs are skipped.
NormReport lipschitz_constant(const ScalarField& u, const Majorant& omega,
                              const std::vector<std::pair<Point, Point>>& pairs);

/// Pairs drawn uniformly in B(0, radius), half of them at distance <= `close`.
std::vector<std::pair<Point, Point>> sample_pairs(int dim, std::size_t count, Rng& rng, double radius = 0.999,
                                                  double close = 0.05);

struct DirichletOptions {
  int shells = 12;           // shells [1 - 2^{1-k}, 1 - 2^{-k}], k = 2..shells
  int radial_nodes = 16;     // per shell
  int circle_nodes = 128;
  int sphere_polar = 16;
  int sphere_azimuth = 32;
};

struct DirichletResult {
  double value = 0.0;          // truncated integral plus geometric tail estimate
  double truncated = 0.0;      // integral over B(0, 1 - 2^{-shells})
  double tail_ratio = 0.0;     // ratio of the last two shell contributions
  bool divergent = false;      // shell contributions fail to decay geometrically
  std::vector<double> partial; // integral over B(0, 1 - 2^{-k})
};

/// int_B (1 - |x|^2)^alpha |grad u|^gamma (sum_jk u_jk^2)^mu dx, raw Lebesgue measure.
DirichletResult dirichlet_energy(const ScalarField& u, double alpha, double gamma, double mu,
                                 const DirichletOptions& options = {});

enum class GrowthNormalizer { Makarov, Korenblum };

struct GrowthEntry {
  double r = 0.0;
  double value = 0.0;       // |u(r zeta)|
  double normalizer = 0.0;
  double ratio = 0.0;
  bool defined = false;     // normalizer positive and finite
};

/// L = log(1/(1-r)); Makarov: sqrt(L log log L), Korenblum: sqrt(L) log L.
double growth_normalizer(GrowthNormalizer kind, double r);

std::vector<GrowthEntry> radial_growth_profile(const ScalarField& u, const Point& zeta,
                                               const std::vector<double>& r_grid, GrowthNormalizer kind);

std::string to_string(GrowthNormalizer kind);

}  // namespace ellab
