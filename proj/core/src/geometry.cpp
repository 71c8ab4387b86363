#include "ellab/geometry.hpp"
#include "ellab/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace ellab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Lower envelope of parabolas: out[q] = min_p (q - p)^2 + f[p] (Felzenszwalb-Huttenlocher).
void squared_distance_1d(const std::vector<double>& f, std::vector<double>& out) {
  const int n = static_cast<int>(f.size());
  out.assign(n, kInf);
  std::vector<int> v(n);
  std::vector<double> z(n + 1);
  int k = -1;
  for (int q = 0; q < n; ++q) {
    if (!std::isfinite(f[q])) continue;
    if (k < 0) {
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      k = 0;
      continue;
    }
    double sx = 0.0;
    for (;;) {
      const int p = v[k];
      sx = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
      if (sx > z[k]) break;
      --k;
    }
    ++k;
    v[k] = q;
    z[k] = sx;
    z[k + 1] = kInf;
  }
  if (k < 0) return;
  int j = 0;
  for (int q = 0; q < n; ++q) {
    while (z[j + 1] < q) ++j;
    const double d = q - v[j];
    out[q] = d * d + f[v[j]];
  }
}

std::string point_text(const Point& x) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}
}  // namespace

// ---------------------------------------------------------------------------
// Ball

BallDomain::BallDomain(int dim, BallPathOptions options) : dim_(dim), options_(options) {
  if (dim < 2 || dim > kMaxDim) fail(ErrorKind::Configuration, "BallDomain: unsupported dimension");
  if (options_.segments < 2) fail(ErrorKind::Configuration, "BallDomain: need at least 2 path segments");
}

double BallDomain::boundary_distance(const Point& x) const {
  if (x.size() != dim_) fail(ErrorKind::Configuration, "point dimension does not match the ball");
  const double d = 1.0 - x.norm();
  if (!(d > 0.0)) fail(ErrorKind::Domain, "point " + point_text(x) + " is not inside the unit ball");
  return d;
}

std::string BallDomain::name() const { return "ball(n=" + std::to_string(dim_) + ")"; }

namespace {

using Vec2 = Eigen::Vector2d;

/// Quasihyperbolic length of a planar polyline in the unit disk with gradient
/// with respect to the interior vertices.
class PolylineCost {
 public:
  PolylineCost(Vec2 a, Vec2 b, int segments) : a_(a), b_(b), m_(segments), gl_(gauss_legendre(4, 0.0, 1.0)) {}

  int size() const { return 2 * (m_ - 1); }

  Vec2 vertex(const Eigen::VectorXd& z, int i) const {
    if (i == 0) return a_;
    if (i == m_) return b_;
    return Vec2(z[2 * (i - 1)], z[2 * (i - 1) + 1]);
  }

  double operator()(const Eigen::VectorXd& z, Eigen::VectorXd* grad) const {
    if (grad) grad->setZero(size());
    double total = 0.0;
    for (int i = 0; i < m_; ++i) {
      const Vec2 p0 = vertex(z, i);
      const Vec2 p1 = vertex(z, i + 1);
      const Vec2 d = p1 - p0;
      const double len = d.norm();
      double s = 0.0;
      Vec2 g0 = Vec2::Zero();
      Vec2 g1 = Vec2::Zero();
      for (std::size_t k = 0; k < gl_.nodes.size(); ++k) {
        const double t = gl_.nodes[k];
        const Vec2 p = p0 + t * d;
        const double r = p.norm();
        if (r >= 1.0) return kInf;
        const double f = 1.0 / (1.0 - r);
        s += gl_.weights[k] * f;
        if (grad && r > 0.0) {
          const Vec2 df = p / (r * (1.0 - r) * (1.0 - r));
          g0 += gl_.weights[k] * (1.0 - t) * df;
          g1 += gl_.weights[k] * t * df;
        }
      }
      total += len * s;
      if (grad) {
        const Vec2 unit = len > 0.0 ? Vec2(d / len) : Vec2::Zero();
        const Vec2 d0 = -unit * s + len * g0;
        const Vec2 d1 = unit * s + len * g1;
        if (i > 0) grad->segment<2>(2 * (i - 1)) += d0;
        if (i + 1 < m_) grad->segment<2>(2 * i) += d1;
      }
    }
    return total;
  }

  Eigen::VectorXd straight() const {
    Eigen::VectorXd z(size());
    for (int i = 1; i < m_; ++i) z.segment<2>(2 * (i - 1)) = a_ + (b_ - a_) * (static_cast<double>(i) / m_);
    return z;
  }

 private:
  Vec2 a_, b_;
  int m_;
  GaussRule gl_;
};

/// Limited-memory BFGS with Armijo backtracking.
double minimize_lbfgs(const PolylineCost& cost, Eigen::VectorXd& z, int max_iter) {
  constexpr int kMemory = 10;
  Eigen::VectorXd g(z.size());
  double f = cost(z, &g);
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (g.lpNorm<Eigen::Infinity>() < 1e-12) break;
    Eigen::VectorXd q = g;
    std::vector<double> alpha(s_hist.size());
    for (int k = static_cast<int>(s_hist.size()) - 1; k >= 0; --k) {
      const double rho = 1.0 / y_hist[k].dot(s_hist[k]);
      alpha[k] = rho * s_hist[k].dot(q);
      q -= alpha[k] * y_hist[k];
    }
    if (!s_hist.empty()) {
      q *= s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    } else {
      q *= 1e-2 / std::max(1.0, g.norm());
    }
    for (std::size_t k = 0; k < s_hist.size(); ++k) {
      const double rho = 1.0 / y_hist[k].dot(s_hist[k]);
      const double beta = rho * y_hist[k].dot(q);
      q += s_hist[k] * (alpha[k] - beta);
    }
    Eigen::VectorXd dir = -q;
    double slope = g.dot(dir);
    if (slope >= 0.0) {
      dir = -g * (1e-2 / std::max(1.0, g.norm()));
      slope = g.dot(dir);
      s_hist.clear();
      y_hist.clear();
    }
    double step = 1.0;
    Eigen::VectorXd z_new, g_new(z.size());
    double f_new = kInf;
    bool accepted = false;
    for (int ls = 0; ls < 50; ++ls) {
      z_new = z + step * dir;
      f_new = cost(z_new, &g_new);
      if (f_new <= f + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const Eigen::VectorXd s = z_new - z;
    const Eigen::VectorXd y = g_new - g;
    const double improvement = f - f_new;
    z = z_new;
    g = g_new;
    f = f_new;
    if (s.dot(y) > 1e-16 * s.norm() * y.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(y);
      if (static_cast<int>(s_hist.size()) > kMemory) {
        s_hist.pop_front();
        y_hist.pop_front();
      }
    }
    if (improvement <= 1e-15 * std::abs(f)) break;
  }
  return f;
}

}  // namespace

double BallDomain::quasihyperbolic(const Point& x_in, const Point& y_in) const {
  boundary_distance(x_in);
  boundary_distance(y_in);
  if ((x_in - y_in).norm() == 0.0) return 0.0;
  // fixed argument order keeps the optimized value exactly symmetric
  const bool swap = std::lexicographical_compare(y_in.data(), y_in.data() + dim_, x_in.data(), x_in.data() + dim_);
  const Point& x = swap ? y_in : x_in;
  const Point& y = swap ? x_in : y_in;
  const double nx = x.norm();
  const double ny = y.norm();
  const double dx = 1.0 - nx;
  const double dy = 1.0 - ny;
  const double dot = x.dot(y);
  const double cross = std::sqrt(std::max(0.0, nx * nx * ny * ny - dot * dot));
  const double through_center = std::log(1.0 / dx) + std::log(1.0 / dy);
  if (nx < 1e-15 || ny < 1e-15 || cross <= 1e-13 * nx * ny) {
    if (nx < 1e-15 || ny < 1e-15 || dot > 0.0) return std::abs(std::log(dx / dy));
    return through_center;
  }
  const Point e1 = x / nx;
  Point v = y - y.dot(e1) * e1;
  const double vn = v.norm();
  const Vec2 a(nx, 0.0);
  const Vec2 b(y.dot(e1), vn);
  const PolylineCost cost(a, b, options_.segments);
  Eigen::VectorXd z = cost.straight();
  const double optimized = minimize_lbfgs(cost, z, options_.max_iterations);
  return std::min(optimized, through_center);
}

// ---------------------------------------------------------------------------
// Grid

GridDomain::GridDomain(int nx, int ny, double spacing, Point origin, std::vector<std::uint8_t> mask)
    : nx_(nx), ny_(ny), h_(spacing), origin_(std::move(origin)), mask_(std::move(mask)) {
  if (nx < 1 || ny < 1 || !(spacing > 0.0)) fail(ErrorKind::Configuration, "GridDomain: bad raster size or spacing");
  if (mask_.size() != static_cast<std::size_t>(nx) * ny) fail(ErrorKind::Configuration, "GridDomain: mask size mismatch");
  if (origin_.size() != 2) fail(ErrorKind::Configuration, "GridDomain: origin must be planar");
  if (inside_count() == 0) fail(ErrorKind::Configuration, "GridDomain: mask has no inside cells");
  build_boundary();
}

bool GridDomain::inside(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return false;
  return mask_[static_cast<std::size_t>(j) * nx_ + i] != 0;
}

std::size_t GridDomain::inside_count() const {
  return static_cast<std::size_t>(std::count_if(mask_.begin(), mask_.end(), [](std::uint8_t v) { return v != 0; }));
}

Point GridDomain::cell_center(int i, int j) const {
  return make_point({origin_[0] + (i + 0.5) * h_, origin_[1] + (j + 0.5) * h_});
}

std::pair<int, int> GridDomain::cell_of(const Point& x) const {
  const double fx = (x[0] - origin_[0]) / h_;
  const double fy = (x[1] - origin_[1]) / h_;
  if (!(fx >= 0.0) || !(fy >= 0.0) || fx >= nx_ || fy >= ny_) return {-1, -1};
  return {static_cast<int>(fx), static_cast<int>(fy)};
}

bool GridDomain::contains(const Point& x) const {
  if (x.size() != 2) return false;
  const auto [i, j] = cell_of(x);
  return i >= 0 && inside(i, j);
}

void GridDomain::build_boundary() {
  const double ox = origin_[0];
  const double oy = origin_[1];
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      if (!inside(i, j)) continue;
      const double x0 = ox + i * h_, x1 = ox + (i + 1) * h_;
      const double y0 = oy + j * h_, y1 = oy + (j + 1) * h_;
      if (!inside(i - 1, j)) segments_.push_back({x0, y0, x0, y1});
      if (!inside(i + 1, j)) segments_.push_back({x1, y0, x1, y1});
      if (!inside(i, j - 1)) segments_.push_back({x0, y0, x1, y0});
      if (!inside(i, j + 1)) segments_.push_back({x0, y1, x1, y1});
    }
  }
  bx_ = (nx_ + bucket_cells_ - 1) / bucket_cells_;
  by_ = (ny_ + bucket_cells_ - 1) / bucket_cells_;
  buckets_.assign(static_cast<std::size_t>(bx_) * by_, {});
  for (std::size_t s = 0; s < segments_.size(); ++s) {
    const Segment& seg = segments_[s];
    const double mx = 0.5 * (seg.x0 + seg.x1);
    const double my = 0.5 * (seg.y0 + seg.y1);
    const int bi = std::clamp(static_cast<int>((mx - ox) / (h_ * bucket_cells_)), 0, bx_ - 1);
    const int bj = std::clamp(static_cast<int>((my - oy) / (h_ * bucket_cells_)), 0, by_ - 1);
    buckets_[static_cast<std::size_t>(bj) * bx_ + bi].push_back(static_cast<int>(s));
  }
  // Nearest boundary points of half-lattice points are half-lattice points on
  // the segments (endpoints or projections), so an exact distance transform on
  // that lattice reproduces raw_distance.
  const int w = 2 * nx_ + 1, hgt = 2 * ny_ + 1;
  std::vector<double> f(static_cast<std::size_t>(w) * hgt, kInf);
  auto mark = [&](double x, double y) {
    const int a = static_cast<int>(std::lround(2.0 * (x - ox) / h_));
    const int b = static_cast<int>(std::lround(2.0 * (y - oy) / h_));
    f[static_cast<std::size_t>(b) * w + a] = 0.0;
  };
  for (const Segment& seg : segments_) {
    mark(seg.x0, seg.y0);
    mark(seg.x1, seg.y1);
    mark(0.5 * (seg.x0 + seg.x1), 0.5 * (seg.y0 + seg.y1));
  }
  std::vector<double> line, out;
  for (int b = 0; b < hgt; ++b) {
    line.assign(f.begin() + static_cast<std::ptrdiff_t>(b) * w, f.begin() + static_cast<std::ptrdiff_t>(b + 1) * w);
    squared_distance_1d(line, out);
    std::copy(out.begin(), out.end(), f.begin() + static_cast<std::ptrdiff_t>(b) * w);
  }
  line.resize(hgt);
  for (int a = 0; a < w; ++a) {
    for (int b = 0; b < hgt; ++b) line[b] = f[static_cast<std::size_t>(b) * w + a];
    squared_distance_1d(line, out);
    for (int b = 0; b < hgt; ++b) f[static_cast<std::size_t>(b) * w + a] = out[b];
  }
  half_d_.resize(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) half_d_[k] = 0.5 * h_ * std::sqrt(f[k]);
}

double GridDomain::raw_distance(double px, double py) const {
  const double bucket = h_ * bucket_cells_;
  const int ci = std::clamp(static_cast<int>(std::floor((px - origin_[0]) / bucket)), 0, bx_ - 1);
  const int cj = std::clamp(static_cast<int>(std::floor((py - origin_[1]) / bucket)), 0, by_ - 1);
  double best_sq = kInf;
  const int max_ring = std::max(bx_, by_);
  for (int ring = 0; ring <= max_ring; ++ring) {
    for (int bj = cj - ring; bj <= cj + ring; ++bj) {
      if (bj < 0 || bj >= by_) continue;
      for (int bi = ci - ring; bi <= ci + ring; ++bi) {
        if (bi < 0 || bi >= bx_) continue;
        if (std::max(std::abs(bi - ci), std::abs(bj - cj)) != ring) continue;
        for (int s : buckets_[static_cast<std::size_t>(bj) * bx_ + bi]) {
          const Segment& seg = segments_[s];
          // segments are axis aligned
          double qx, qy;
          if (seg.x0 == seg.x1) {
            qx = seg.x0;
            qy = std::clamp(py, std::min(seg.y0, seg.y1), std::max(seg.y0, seg.y1));
          } else {
            qy = seg.y0;
            qx = std::clamp(px, std::min(seg.x0, seg.x1), std::max(seg.x0, seg.x1));
          }
          const double d2 = (px - qx) * (px - qx) + (py - qy) * (py - qy);
          best_sq = std::min(best_sq, d2);
        }
      }
    }
    const double reach = ring * bucket - 0.5 * h_;
    if (reach > 0.0 && best_sq <= reach * reach) break;
  }
  return std::sqrt(best_sq);
}

double GridDomain::boundary_distance(const Point& x) const {
  if (!contains(x)) fail(ErrorKind::Domain, "point " + point_text(x) + " is not inside the grid domain");
  const double d = raw_distance(x[0], x[1]);
  if (!(d > 0.0)) fail(ErrorKind::Domain, "point " + point_text(x) + " lies on the grid boundary");
  return d;
}

std::vector<double> GridDomain::dijkstra(const std::vector<std::pair<int, double>>& sources) const {
  std::vector<double> dist(static_cast<std::size_t>(nx_) * ny_, kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  for (const auto& [idx, d0] : sources) {
    if (d0 < dist[idx]) {
      dist[idx] = d0;
      heap.push({d0, idx});
    }
  }
  static constexpr std::array<std::array<int, 2>, 8> kDirs{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  const double diag = std::sqrt(2.0) * h_;
  while (!heap.empty()) {
    const auto [d, idx] = heap.top();
    heap.pop();
    if (d > dist[idx]) continue;
    const int i = idx % nx_;
    const int j = idx / nx_;
    for (const auto& dir : kDirs) {
      const int di = dir[0], dj = dir[1];
      const int ni = i + di, nj = j + dj;
      if (!inside(ni, nj)) continue;
      const bool is_diag = di != 0 && dj != 0;
      if (is_diag && !(inside(i + di, j) && inside(i, j + dj))) continue;
      // midpoint between the two centres on the half-cell lattice
      const double dm = half_grid_distance(2 * i + 1 + di, 2 * j + 1 + dj);
      const double w = (is_diag ? diag : h_) / dm;
      const int nidx = nj * nx_ + ni;
      if (d + w < dist[nidx]) {
        dist[nidx] = d + w;
        heap.push({d + w, nidx});
      }
    }
  }
  return dist;
}

double GridDomain::segment_cost(const Point& a, const Point& b) const {
  const double len = (a - b).norm();
  if (len == 0.0) return 0.0;
  const Point mid = 0.5 * (a + b);
  return len / raw_distance(mid[0], mid[1]);
}

std::vector<std::pair<int, double>> GridDomain::attachments(const Point& x) const {
  // straight links from x to the centres of the surrounding 3x3 block, so the
  // path does not have to detour through the centre of x's own cell
  const auto [ci, cj] = cell_of(x);
  std::vector<std::pair<int, double>> out;
  for (int dj = -1; dj <= 1; ++dj) {
    for (int di = -1; di <= 1; ++di) {
      const int i = ci + di, j = cj + dj;
      if (!inside(i, j)) continue;
      if (di != 0 && dj != 0 && !(inside(ci + di, cj) && inside(ci, cj + dj))) continue;
      out.emplace_back(j * nx_ + i, segment_cost(x, cell_center(i, j)));
    }
  }
  return out;
}

std::vector<double> GridDomain::quasihyperbolic_from(const Point& x, const std::vector<Point>& targets) const {
  boundary_distance(x);
  const auto [si, sj] = cell_of(x);
  const std::vector<double> dist = dijkstra(attachments(x));
  std::vector<double> out;
  out.reserve(targets.size());
  for (const Point& y : targets) {
    boundary_distance(y);
    if ((x - y).norm() == 0.0) {
      out.push_back(0.0);
      continue;
    }
    double k = kInf;
    for (const auto& [idx, tail] : attachments(y)) k = std::min(k, dist[idx] + tail);
    if (!std::isfinite(k)) fail(ErrorKind::Unreachable, "no grid path between " + point_text(x) + " and " + point_text(y));
    const auto [ti, tj] = cell_of(y);
    if (std::abs(ti - si) <= 1 && std::abs(tj - sj) <= 1) k = std::min(k, segment_cost(x, y));
    out.push_back(k);
  }
  return out;
}

double GridDomain::quasihyperbolic(const Point& x, const Point& y) const {
  return quasihyperbolic_from(x, {y}).front();
}

std::string GridDomain::name() const {
  std::ostringstream os;
  os << "grid(" << nx_ << "x" << ny_ << ", h=" << h_ << ")";
  return os.str();
}

std::string GridDomain::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "# spacing=" << h_ << " origin=" << origin_[0] << "," << origin_[1] << "\n";
  for (int j = ny_ - 1; j >= 0; --j) {
    for (int i = 0; i < nx_; ++i) os << (inside(i, j) ? '1' : '0');
    os << "\n";
  }
  return os.str();
}

GridDomain GridDomain::from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> rows;
  double spacing = -1.0;
  Point origin = make_point({0.0, 0.0});
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') {
      const auto sp = line.find("spacing=");
      if (sp != std::string::npos) spacing = std::stod(line.substr(sp + 8));
      const auto org = line.find("origin=");
      if (org != std::string::npos) {
        const std::string rest = line.substr(org + 7);
        const auto comma = rest.find(',');
        if (comma == std::string::npos) fail(ErrorKind::Configuration, "raster header: origin needs x,y");
        origin = make_point({std::stod(rest.substr(0, comma)), std::stod(rest.substr(comma + 1))});
      }
      continue;
    }
    std::string row;
    for (char c : line) {
      if (c == '0' || c == '1') {
        row.push_back(c);
      } else if (!std::isspace(static_cast<unsigned char>(c))) {
        fail(ErrorKind::Configuration, std::string("raster: unexpected character '") + c + "'");
      }
    }
    if (!row.empty()) rows.push_back(row);
  }
  if (rows.empty()) fail(ErrorKind::Configuration, "raster: no rows");
  const int nx = static_cast<int>(rows.front().size());
  const int ny = static_cast<int>(rows.size());
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != nx) fail(ErrorKind::Configuration, "raster: rows have different lengths");
  }
  if (spacing <= 0.0) spacing = 1.0 / std::max(nx, ny);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    const std::string& r = rows[ny - 1 - j];
    for (int i = 0; i < nx; ++i) mask[static_cast<std::size_t>(j) * nx + i] = r[i] == '1';
  }
  return GridDomain(nx, ny, spacing, origin, std::move(mask));
}

GridDomain GridDomain::from_polygons_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorKind::Configuration, std::string("polygon JSON: ") + e.what());
  }
  if (!doc.contains("polygons") || !doc["polygons"].is_array()) fail(ErrorKind::Configuration, "polygon JSON: missing 'polygons'");
  std::vector<std::vector<std::array<double, 2>>> polys;
  double lo_x = kInf, lo_y = kInf, hi_x = -kInf, hi_y = -kInf;
  for (const auto& poly : doc["polygons"]) {
    std::vector<std::array<double, 2>> pts;
    for (const auto& p : poly) {
      const double x = p.at(0).get<double>();
      const double y = p.at(1).get<double>();
      pts.push_back({x, y});
      lo_x = std::min(lo_x, x), hi_x = std::max(hi_x, x);
      lo_y = std::min(lo_y, y), hi_y = std::max(hi_y, y);
    }
    if (pts.size() < 3) fail(ErrorKind::Configuration, "polygon JSON: polygon with fewer than 3 vertices");
    polys.push_back(std::move(pts));
  }
  if (polys.empty()) fail(ErrorKind::Configuration, "polygon JSON: no polygons");
  const double extent = std::max(hi_x - lo_x, hi_y - lo_y);
  const double spacing = doc.contains("spacing") ? doc["spacing"].get<double>() : extent / 256.0;
  if (!(spacing > 0.0)) fail(ErrorKind::Configuration, "polygon JSON: spacing must be positive");
  auto inside = [&polys](const Point& c) {
    bool in = false;
    for (const auto& pts : polys) {
      for (std::size_t a = 0, b = pts.size() - 1; a < pts.size(); b = a++) {
        const auto& p = pts[a];
        const auto& q = pts[b];
        if ((p[1] > c[1]) != (q[1] > c[1]) && c[0] < (q[0] - p[0]) * (c[1] - p[1]) / (q[1] - p[1]) + p[0]) in = !in;
      }
    }
    return in;
  };
  return from_predicate(inside, make_point({lo_x - spacing, lo_y - spacing}), make_point({hi_x + spacing, hi_y + spacing}),
                        spacing);
}

GridDomain GridDomain::from_predicate(const std::function<bool(const Point&)>& inside, const Point& lo,
                                      const Point& hi, double spacing) {
  const int nx = std::max(1, static_cast<int>(std::ceil((hi[0] - lo[0]) / spacing)));
  const int ny = std::max(1, static_cast<int>(std::ceil((hi[1] - lo[1]) / spacing)));
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Point c = make_point({lo[0] + (i + 0.5) * spacing, lo[1] + (j + 0.5) * spacing});
      mask[static_cast<std::size_t>(j) * nx + i] = inside(c);
    }
  }
  return GridDomain(nx, ny, spacing, lo, std::move(mask));
}

GridDomain GridDomain::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Io, "cannot read grid domain file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return json ? from_polygons_json(buf.str()) : from_text(buf.str());
}

// ---------------------------------------------------------------------------
// Metrics

double distance_ratio(const Domain& domain, const Point& x, const Point& y) {
  const double dx = domain.boundary_distance(x);
  const double dy = domain.boundary_distance(y);
  return (x - y).norm() / std::min(dx, dy);
}

double j_metric(const Domain& domain, const Point& x, const Point& y) {
  return std::log1p(distance_ratio(domain, x, y));
}

double k_metric(const Domain& domain, const Point& x, const Point& y) {
  return domain.quasihyperbolic(x, y);
}

// ---------------------------------------------------------------------------
// Images of planar maps

bool is_constant_map(const VectorField& map, int samples) {
  const Point f0 = map(Point::Zero(map.dimension()));
  for (int k = 0; k < samples; ++k) {
    const double s = 0.95 * (k + 1.0) / samples;
    const double t = 2.0 * std::numbers::pi * k * 0.6180339887498949;
    Point x = Point::Zero(map.dimension());
    x[0] = s * std::cos(t);
    x[1] = s * std::sin(t);
    if ((map(x) - f0).norm() > 1e-14 * (1.0 + f0.norm())) return false;
  }
  return true;
}

GridDomain rasterize_image(const VectorField& map, const RasterOptions& options) {
  if (map.dimension() != 2 || map.size() != 2) fail(ErrorKind::Configuration, "image rasterization ships planar maps only");
  if (options.resolution < 8) fail(ErrorKind::Configuration, "image rasterization: resolution too small");
  constexpr double kEdge = 1.0 - 1e-9;
  // bounding box and Lipschitz bound from a coarse pass
  double lip = 0.0;
  double lo_x = kInf, lo_y = kInf, hi_x = -kInf, hi_y = -kInf;
  for (int a = 0; a <= 32; ++a) {
    const double s = kEdge * a / 32.0;
    const int m = a == 0 ? 1 : 128;
    for (int b = 0; b < m; ++b) {
      const double t = 2.0 * std::numbers::pi * b / m;
      const Point x = make_point({s * std::cos(t), s * std::sin(t)});
      const Point y = map(x);
      if (!y.allFinite()) fail(ErrorKind::Configuration, "image rasterization: map is not finite on the disk");
      lo_x = std::min(lo_x, y[0]), hi_x = std::max(hi_x, y[0]);
      lo_y = std::min(lo_y, y[1]), hi_y = std::max(hi_y, y[1]);
      lip = std::max(lip, operator_norm(map.jacobian(x)));
    }
  }
  const double extent = std::max(hi_x - lo_x, hi_y - lo_y);
  if (!(extent > 0.0) || !(lip > 0.0)) fail(ErrorKind::Configuration, "image rasterization: degenerate image");
  const double h = extent / options.resolution;
  const double step = h / (2.0 * 1.25 * lip);
  const int pad = 3;
  const Point origin = make_point({lo_x - pad * h, lo_y - pad * h});
  const int nx = static_cast<int>(std::ceil(extent / h)) + 2 * pad + 1;
  const int ny = nx;
  std::vector<std::uint8_t> hit(static_cast<std::size_t>(nx) * ny, 0);
  auto mark = [&](const Point& y) {
    const int i = static_cast<int>(std::floor((y[0] - origin[0]) / h));
    const int j = static_cast<int>(std::floor((y[1] - origin[1]) / h));
    if (i < 0 || j < 0 || i >= nx || j >= ny) {
      fail(ErrorKind::Configuration, "image rasterization: sample escaped the coarse bounding box");
    }
    hit[static_cast<std::size_t>(j) * nx + i] = 1;
  };
  const int radial = static_cast<int>(std::ceil(1.0 / step));
  for (int a = 0; a <= radial; ++a) {
    const double s = std::min(kEdge, a * step);
    const int m = std::max(1, static_cast<int>(std::ceil(2.0 * std::numbers::pi * s / step)));
    for (int b = 0; b < m; ++b) {
      const double t = 2.0 * std::numbers::pi * b / m;
      mark(map(make_point({s * std::cos(t), s * std::sin(t)})));
    }
  }
  // morphological closing with a 3x3 element bridges single-cell sampling gaps
  auto at = [&](const std::vector<std::uint8_t>& m, int i, int j) -> std::uint8_t {
    if (i < 0 || j < 0 || i >= nx || j >= ny) return 0;
    return m[static_cast<std::size_t>(j) * nx + i];
  };
  std::vector<std::uint8_t> dil(hit.size(), 0), closed(hit.size(), 0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      std::uint8_t v = 0;
      for (int dj = -1; dj <= 1 && !v; ++dj) {
        for (int di = -1; di <= 1 && !v; ++di) v = at(hit, i + di, j + dj);
      }
      dil[static_cast<std::size_t>(j) * nx + i] = v;
    }
  }
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      std::uint8_t v = 1;
      for (int dj = -1; dj <= 1 && v; ++dj) {
        for (int di = -1; di <= 1 && v; ++di) v = at(dil, i + di, j + dj);
      }
      closed[static_cast<std::size_t>(j) * nx + i] = v | hit[static_cast<std::size_t>(j) * nx + i];
    }
  }
  return GridDomain(nx, ny, h, origin, std::move(closed));
}

WeakUniformResult weak_uniform_bound_constant(const VectorField& map, const BallDomain& domain,
                                              const GridDomain& image,
                                              const std::vector<std::pair<Point, Point>>& pairs) {
  WeakUniformResult out;
  out.image_spacing = image.spacing();
  for (const auto& [x, y] : pairs) {
    if (distance_ratio(domain, x, y) > 0.5) continue;
    ++out.admissible;
    const Point fx = map(x);
    const Point fy = map(y);
    if (!image.contains(fx) || !image.contains(fy)) {
      ++out.skipped;
      continue;
    }
    const double r = (fx - fy).norm() / std::min(image.boundary_distance(fx), image.boundary_distance(fy));
    if (r > out.constant || out.argmax_x.size() == 0) {
      out.constant = std::max(out.constant, r);
      out.argmax_x = x;
      out.argmax_y = y;
    }
  }
  return out;
}

WeakUniformResult weak_uniform_bound_constant(const VectorField& map, const BallDomain& domain,
                                              const std::vector<std::pair<Point, Point>>& pairs,
                                              const RasterOptions& options) {
  if (is_constant_map(map)) {
    WeakUniformResult out;
    for (const auto& [x, y] : pairs) {
      if (distance_ratio(domain, x, y) <= 0.5) ++out.admissible;
    }
    return out;
  }
  return weak_uniform_bound_constant(map, domain, rasterize_image(map, options), pairs);
}

}  // namespace ellab
