#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace atv {

/// Uniform N x N sample grid covering the closed square [-L, L]^2.
///
/// Sample (i, j) sits at (x1, x2) = (-L + j*spacing, L - i*spacing):
/// row 0 is the top edge of the image, column 0 the left edge, and
/// spacing = 2L/(N-1) is the same on both axes.  With the pixel
/// convention N = 2L + 1 the spacing is exactly 1.
struct GridSpec {
  int n = 2;
  double half_width = 0.5;

  GridSpec() = default;
  GridSpec(int n_, double half_width_) : n(n_), half_width(half_width_) {
    if (n < 2) throw std::invalid_argument("GridSpec: n must be >= 2");
    if (!(half_width > 0.0))
      throw std::invalid_argument("GridSpec: half_width must be positive");
  }

  double spacing() const { return 2.0 * half_width / (n - 1); }
  int size() const { return n * n; }

  double x1(int j) const { return -half_width + j * spacing(); }
  double x2(int i) const { return half_width - i * spacing(); }

  /// Column of the grid line nearest to x1 = c (clamped to range).
  int nearest_col(double c) const {
    int j = int(std::lround((c + half_width) / spacing()));
    return j < 0 ? 0 : (j > n - 1 ? n - 1 : j);
  }
  /// Row of the grid line nearest to x2 = c (clamped to range).
  int nearest_row(double c) const {
    int i = int(std::lround((half_width - c) / spacing()));
    return i < 0 ? 0 : (i > n - 1 ? n - 1 : i);
  }

  bool operator==(const GridSpec& o) const {
    return n == o.n && half_width == o.half_width;
  }
  bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

/// Real samples on a GridSpec, row-major, top row first.
struct ScalarField {
  GridSpec grid;
  std::vector<double> v;

  ScalarField() : grid(), v(grid.size(), 0.0) {}
  explicit ScalarField(const GridSpec& g, double fill = 0.0)
      : grid(g), v(g.size(), fill) {}

  int n() const { return grid.n; }
  double& operator()(int i, int j) { return v[std::size_t(i) * grid.n + j]; }
  double operator()(int i, int j) const {
    return v[std::size_t(i) * grid.n + j];
  }

  bool finite() const {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  }
};

/// Pair of real N x N grids (g1, g2); the dual variable with the
/// componentwise box constraint max(|g1|, |g2|) <= 1.
struct DualField {
  GridSpec grid;
  std::vector<double> g1, g2;

  DualField() : grid(), g1(grid.size(), 0.0), g2(grid.size(), 0.0) {}
  explicit DualField(const GridSpec& g)
      : grid(g), g1(g.size(), 0.0), g2(g.size(), 0.0) {}

  int n() const { return grid.n; }

  /// max(|g1|, |g2|) over all entries.
  double max_abs() const {
    double m = 0.0;
    for (double x : g1) m = std::max(m, std::abs(x));
    for (double x : g2) m = std::max(m, std::abs(x));
    return m;
  }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b,
                              const char* what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace atv
