#pragma once

#include "ellab/error.hpp"
#include "ellab/fields.hpp"
#include "ellab/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ellab {

class Domain {
 public:
  virtual ~Domain() = default;
  virtual int dimension() const = 0;
  virtual bool contains(const Point& x) const = 0;
  /// Euclidean distance to the boundary; domain-error unless x is interior.
  virtual double boundary_distance(const Point& x) const = 0;
  /// Quasihyperbolic distance inf over arcs of int ds / d(s).
  virtual double quasihyperbolic(const Point& x, const Point& y) const = 0;
  virtual std::string name() const = 0;
};

/// Options for the polyline geodesic search in the ball.
struct BallPathOptions {
  int segments = 48;
  int max_iterations = 400;
};

class BallDomain final : public Domain {
 public:
  explicit BallDomain(int dim, BallPathOptions options = {});

  int dimension() const override { return dim_; }
  bool contains(const Point& x) const override { return x.norm() < 1.0; }
  double boundary_distance(const Point& x) const override;
  /// Exact along diameters; otherwise an optimized polyline in the plane
  /// through 0, x and y (geodesics stay in that plane by symmetry).
  double quasihyperbolic(const Point& x, const Point& y) const override;
  std::string name() const override;

 private:
  int dim_;
  BallPathOptions options_;
};

/// Planar domain given by a raster of inside/outside cells. Cell (i, j) covers
/// [origin + (i, j) h, origin + (i + 1, j + 1) h]; the boundary is the union of
/// cell edges separating inside from outside (or from the raster border).
class GridDomain final : public Domain {
 public:
  GridDomain(int nx, int ny, double spacing, Point origin, std::vector<std::uint8_t> mask);

  /// Rows of 0/1 characters, first row on top. Optional first line
  /// "# spacing=<h> origin=<x>,<y>"; without it spacing = 1/max(nx, ny), origin 0.
  static GridDomain from_text(const std::string& text);
  /// {"spacing": h, "polygons": [[[x, y], ...], ...]}, even-odd fill at cell centres.
  static GridDomain from_polygons_json(const std::string& text);
  /// Loads by extension: .json polygons, anything else the text raster.
  static GridDomain load(const std::string& path);
  /// Cells whose centre satisfies `inside`, over the box [lo, hi].
  static GridDomain from_predicate(const std::function<bool(const Point&)>& inside, const Point& lo,
                                   const Point& hi, double spacing);

  int dimension() const override { return 2; }
  bool contains(const Point& x) const override;
  double boundary_distance(const Point& x) const override;
  /// Shortest path on the 8-connected graph of inside cells, edge weight
  /// length / d(midpoint); x and y are joined to their cell centres by straight
  /// segments. Unreachable pairs raise unreachable-error.
  double quasihyperbolic(const Point& x, const Point& y) const override;
  /// One Dijkstra run from x, evaluated at each target.
  std::vector<double> quasihyperbolic_from(const Point& x, const std::vector<Point>& targets) const;
  std::string name() const override;

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double spacing() const { return h_; }
  const Point& origin() const { return origin_; }
  bool inside(int i, int j) const;
  std::size_t inside_count() const;
  Point cell_center(int i, int j) const;
  /// Cell indices containing x, or (-1, -1).
  std::pair<int, int> cell_of(const Point& x) const;
  std::string to_text() const;

 private:
  struct Segment {
    double x0, y0, x1, y1;
  };
  void build_boundary();
  double raw_distance(double px, double py) const;
  double half_grid_distance(int a, int b) const { return half_d_[static_cast<std::size_t>(b) * (2 * nx_ + 1) + a]; }
  std::vector<double> dijkstra(const std::vector<std::pair<int, double>>& sources) const;
  std::vector<std::pair<int, double>> attachments(const Point& x) const;
  double segment_cost(const Point& a, const Point& b) const;

  int nx_, ny_;
  double h_;
  Point origin_;
  std::vector<std::uint8_t> mask_;
  std::vector<Segment> segments_;
  int bucket_cells_ = 8;
  int bx_ = 0, by_ = 0;
  std::vector<std::vector<int>> buckets_;
  std::vector<double> half_d_;  // distances on the half-cell lattice
};

double distance_ratio(const Domain& domain, const Point& x, const Point& y);
double j_metric(const Domain& domain, const Point& x, const Point& y);
double k_metric(const Domain& domain, const Point& x, const Point& y);

/// Forward rasterization of f(B^2) for a planar map on the unit disk.
struct RasterOptions {
  int resolution = 256;  // cells across the image bounding box
};

GridDomain rasterize_image(const VectorField& map, const RasterOptions& options = {});

struct WeakUniformResult {
  double constant = 0.0;      // sup of r_{f(B)}(f(x), f(y)) over admissible pairs
  std::size_t admissible = 0; // pairs with r_B(x, y) <= 1/2
  std::size_t skipped = 0;    // images that fell outside the rasterized domain
  double image_spacing = 0.0; // 0 when the map was constant and no raster was built
  Point argmax_x, argmax_y;
};

/// Sup of r_{f(Omega)}(f(x), f(y)) over sample pairs with r_Omega(x, y) <= 1/2.
/// The image domain is rasterized from forward samples (an approximation).
WeakUniformResult weak_uniform_bound_constant(const VectorField& map, const BallDomain& domain,
                                              const std::vector<std::pair<Point, Point>>& pairs,
                                              const RasterOptions& options = {});
/// Same, against an already rasterized image domain.
WeakUniformResult weak_uniform_bound_constant(const VectorField& map, const BallDomain& domain,
                                              const GridDomain& image,
                                              const std::vector<std::pair<Point, Point>>& pairs);

/// True when all sampled values of the map coincide (image is a point).
bool is_constant_map(const VectorField& map, int samples = 64);

}  // namespace ellab
