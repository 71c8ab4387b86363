#pragma once

#include "ellab/fields.hpp"
#include "ellab/kernels.hpp"
#include "ellab/quadrature.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ellab {

/// Boundary values on the unit sphere, read as functions of the unit direction.
class BoundaryData {
 public:
  struct Harmonic {
    int degree;
    int order;  // > 0 cosine mode, < 0 sine mode
    double coef;
  };

  /// The constant 1.
  BoundaryData();
  static BoundaryData constant(double c);
  static BoundaryData function(ValueFn g, std::string name = "g");
  /// Sum of coef * real_harmonic(n, degree, order, zeta).
  static BoundaryData harmonics(int dim, std::vector<Harmonic> terms);

  double operator()(const Point& zeta) const { return fn_(zeta); }
  std::optional<double> constant_value() const { return constant_; }
  const std::string& name() const { return name_; }

 private:
  ValueFn fn_;
  std::optional<double> constant_;
  std::string name_;
};

enum class Backend { RadialExact, PicardIntegral, FdGrid };

std::string to_string(Backend b);
Backend backend_from_string(const std::string& s);

/// Lap u = lambda(x) |u|^{tau-1} u in the unit ball, u = g on the sphere.
struct YukawaProblem {
  int dimension = 3;
  double tau = 1.0;
  ScalarField lambda;
  /// Set when lambda is a constant; enables the radial-exact backend.
  std::optional<double> lambda_constant;
  BoundaryData boundary;
  Backend backend = Backend::PicardIntegral;
  std::string name;

  static YukawaProblem constant(int dim, double lambda, double tau = 1.0, double boundary = 1.0);
  /// Raises hypothesis-error if lambda < 0 at a sample, configuration-error on bad n or tau.
  void validate(std::uint64_t seed = 1, int samples = 256) const;
};

struct SolverOptions {
  double tolerance = 1e-12;     // sup-norm of the iterate update
  int max_iterations = 500;
  double residual_tolerance = 1e-4;
  int residual_samples = 32;
  double residual_radius = 0.9;
  std::uint64_t seed = 1;

  // integral backend
  int radial_nodes = 64;
  int circle_nodes = 32;
  int sphere_polar = 16;
  int sphere_azimuth = 32;

  // grid backend; 0 picks a size by dimension
  int grid_radial = 0;
  int grid_angular = 128;
  int grid_polar = 12;
  int grid_azimuth = 24;
};

struct SolutionField {
  ScalarField field;
  Backend backend = Backend::PicardIntegral;
  bool converged = false;
  std::string status;  // "converged" or the reason it is not
  int iterations = 0;
  double final_update = 0.0;
  /// Largest ratio of consecutive update norms over the last iterations.
  double contraction_estimate = 0.0;
  /// sup lambda over the solver nodes times the sup-norm bound 1/(2n) of the Green operator.
  double operator_bound = 0.0;
  double lambda_sup = 0.0;
  /// max |Lap u - lambda |u|^{tau-1} u| over the residual samples.
  double residual = 0.0;
  std::vector<double> update_history;
  /// Solver nodes and values (grid backend: cell centres, without the boundary ring).
  std::vector<Point> nodes;
  std::vector<double> node_values;
};

/// Dispatches on problem.backend.
SolutionField solve(const YukawaProblem& problem, const SolverOptions& options = {});

/// Fixed point of u = H[g] - G[lambda |u|^{tau-1} u], H the harmonic extension and
/// G the Green potential, both applied mode by mode in an angular expansion.
/// Non-convergence within max_iterations raises DivergenceError.
SolutionField picard_solve(const YukawaProblem& problem, const SolverOptions& options = {});

/// Finite-volume discretization on a polar (n = 2) or spherical (n = 3) mesh,
/// solved by Newton steps with a sparse Cholesky factorization. The residual is
/// the discrete one, scaled by cell volume.
SolutionField grid_solve(const YukawaProblem& problem, const SolverOptions& options = {});

/// Radial solution as a power series in |x|^2. With tau = 1 this is
/// sinh(sqrt(lambda) s)/(sqrt(lambda) s) for n = 3 and I0(sqrt(lambda) s) for
/// n = 2, equal to 1 at the origin. With `boundary_value` the solution is
/// instead normalized to that value on the unit sphere.
RadialSeries radial_profile(int n, double lambda, double tau = 1.0,
                            std::optional<double> boundary_value = std::nullopt);
ScalarField radial_oracle(int n, double lambda, double tau = 1.0,
                          std::optional<double> boundary_value = std::nullopt);

/// u(w) = r^{n-2} int P_r(w, zeta) g(zeta) dsigma(zeta) for |w| < r, the
/// harmonic function in B_r with u(r zeta) = g(zeta).
ScalarField poisson_extend(const BoundaryData& g, int n, double r, const QuadratureOrders& orders = {});

/// v with Lap v = -source in B_r and v = 0 on the r-sphere, pointwise by the
/// w-centred polar route.
ScalarField green_potential(const ScalarField& source, int n, double r,
                            const DirectGreenOptions& options = {});

/// Same potential on the unit ball from the angular-mode route used by picard_solve.
ScalarField green_potential_modal(const ScalarField& source, const SolverOptions& options = {});

}  // namespace ellab
