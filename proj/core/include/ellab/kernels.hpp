#pragma once

#include "ellab/fields.hpp"
#include "ellab/quadrature.hpp"

#include <cmath>
#include <limits>

namespace ellab {

/// P_r(w, zeta) = (r^2 - |w|^2) / |w - r zeta|^n; integrates to r^{2-n} against sigma.
double poisson_kernel(int n, double r, const Point& w, const Point& zeta);

/// Green function of B(0, r) in the variables (w, x = r y), Lebesgue-normalized:
/// Lap_w of the potential int G_r(w, x/r) f(x) dx is -f. n >= 3 uses
/// [|w - ry|^{2-n} - (r^2 + |w|^2|y|^2 - 2r<w,y>)^{(2-n)/2}] / (n(n-2)V(B^n));
/// n = 2 uses the logarithmic companion (1/2pi) log(sqrt(r^2 + |w|^2|y|^2 - 2r<w,y>) / |w - ry|).
double green_ball(int n, double r, const Point& w, const Point& y);

/// Radial Green function for the normalized volume measure:
/// (s^{2-n} - r^{2-n}) / (n(n-2)), and (1/2) log(r/s) for n = 2.
/// Returns +infinity at s = 0.
double radial_green(int n, double s, double r);

/// M_nu(f, r) about `center`; nu = +infinity gives the maximum over the nodes.
double surface_mean(const ScalarField& f, double r, const SphereRule& rule, double nu);
double surface_mean(const ScalarField& f, const Point& center, double r, const SphereRule& rule,
                    double nu);

double ball_integral(const ScalarField& f, const BallRule& rule,
                     VolumeMeasure measure = VolumeMeasure::Normalized);

/// Both sides of the mean-value identity on B(0, r):
/// mean of g over the r-sphere vs g(0) + int_{B_r} Lap g(x) G_n(x, r) dV_N(x).
struct MeanValueSides {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual() const { return std::abs(lhs - rhs); }
};

MeanValueSides mean_value_sides(const ScalarField& g, double r, const BallRule& rule);
/// Uses `laplacian` instead of differentiating g (exact Laplacians for polynomials).
MeanValueSides mean_value_sides(const ScalarField& g, const ScalarField& laplacian, double r,
                                const BallRule& rule);

/// Ball rule suited to the radial Green kernel: graded radial nodes for the
/// logarithmic n = 2 kernel, plain Gauss-Legendre otherwise.
BallRule green_ball_rule(int n, const QuadratureOrders& orders = {});

double mean_value_identity_residual(const ScalarField& g, double r,
                                    const QuadratureOrders& orders = {});

/// Pointwise Green potential v(w) = int_B G_1(w, x) f(x) dx on the unit ball,
/// computed in polar coordinates centred at w so that the kernel singularity
/// becomes a smooth radial factor. Lap v = -f, v = 0 on the sphere.
struct DirectGreenOptions {
  int directions = 256;      // circle nodes (n = 2)
  int polar = 24;            // sphere rule (n = 3)
  int azimuth = 48;
  int radial_nodes = 40;
};

double green_potential_direct(const ScalarField& source, const Point& w,
                              const DirectGreenOptions& options = {});

}  // namespace ellab
