#pragma once

#include "ellab/types.hpp"

#include <cstdint>

namespace ellab {

/// Seeded generator with a platform-independent output stream.
///
/// std::uniform_real_distribution is implementation-defined, so reports built
/// on it would differ between standard libraries. This wraps splitmix64 and
/// derives doubles from the top 53 bits.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    // Box-Muller; the second variate is discarded to keep the stream simple.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Point unit_direction(int dim) {
    Point p(dim);
    double norm = 0.0;
    do {
      for (int i = 0; i < dim; ++i) p[i] = normal();
      norm = p.norm();
    } while (norm < 1e-12);
    return p / norm;
  }

  /// Uniform in the ball of the given radius.
  Point in_ball(int dim, double radius) {
    const double s = radius * std::pow(uniform(), 1.0 / dim);
    return s * unit_direction(dim);
  }

  /// Independent child stream, e.g. one per worker item.
  Rng split(std::uint64_t salt) { return Rng(next_u64() ^ (salt * 0xD1B54A32D192ED03ULL)); }

 private:
  std::uint64_t state_;
};

}  // namespace ellab
