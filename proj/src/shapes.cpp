#include "atv/shapes.hpp"

#include <cmath>
#include <random>

namespace atv {

namespace {

double norm_l1(double a, double b) { return std::abs(a) + std::abs(b); }

}  // namespace

bool ShapeSpec::contains(double x1, double x2) const {
  const double a = x1 - center_x1;
  const double b = x2 - center_x2;
  switch (kind) {
    case ShapeKind::l1_ball:
      return norm_l1(a, b) <= radius;
    case ShapeKind::l2_ball:
      return a * a + b * b <= radius * radius;
    case ShapeKind::linf_ball:
      return std::max(std::abs(a), std::abs(b)) <= radius;
    case ShapeKind::composite_s4: {
      const double s = radius / 150.0;
      const bool main_lobe = norm_l1(a, b) <= radius;
      const bool attached = norm_l1(a - 125.0 * s, b - 175.0 * s) <= 25.0 * s;
      const bool removed = norm_l1(a - 0.0, b + 125.0 * s) <= 25.0 * s;
      return (main_lobe || attached) && !removed;
    }
    case ShapeKind::custom_mask:
      return false;  // resolved per sample in make_shape
  }
  return false;
}

ScalarField make_shape(const ShapeSpec& spec, const GridSpec& grid) {
  if (spec.kind != ShapeKind::custom_mask &&
      !(spec.radius > 0.0 && spec.radius < grid.half_width))
    throw std::invalid_argument("make_shape: need 0 < radius < half_width");
  if (!(spec.depth > 0.0))
    throw std::invalid_argument("make_shape: depth must be > 0");
  ScalarField f(grid, 0.0);
  if (spec.kind == ShapeKind::custom_mask) {
    if (int(spec.mask.size()) != grid.size())
      throw std::invalid_argument("make_shape: mask size != grid size");
    for (int k = 0; k < grid.size(); ++k)
      f.v[k] = spec.mask[k] ? -spec.depth : 0.0;
    return f;
  }
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      if (spec.contains(grid.x1(j), grid.x2(i))) f(i, j) = -spec.depth;
  return f;
}

namespace {

// index reflected with half-sample symmetry: -1 -> 0, n -> n-1, ...
int reflect(int k, int n) {
  while (k < 0 || k >= n) {
    if (k < 0) k = -k - 1;
    if (k >= n) k = 2 * n - 1 - k;
  }
  return k;
}

std::vector<double> gaussian_kernel(double sigma) {
  const int half = int(std::ceil(4.0 * sigma));
  std::vector<double> w(2 * half + 1);
  double sum = 0.0;
  for (int k = -half; k <= half; ++k) {
    w[k + half] = std::exp(-0.5 * (double(k) * k) / (sigma * sigma));
    sum += w[k + half];
  }
  for (double& x : w) x /= sum;
  return w;
}

}  // namespace

ScalarField gaussian_blur(const ScalarField& u, double sigma) {
  if (!(sigma >= 0.0))
    throw std::invalid_argument("gaussian_blur: sigma must be >= 0");
  if (sigma == 0.0) return u;
  const std::vector<double> w = gaussian_kernel(sigma);
  const int half = (int(w.size()) - 1) / 2;
  const int n = u.n();

  ScalarField tmp(u.grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = -half; k <= half; ++k)
        s += w[k + half] * u(i, reflect(j + k, n));
      tmp(i, j) = s;
    }
  ScalarField out(u.grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = -half; k <= half; ++k)
        s += w[k + half] * tmp(reflect(i + k, n), j);
      out(i, j) = s;
    }
  return out;
}

ScalarField threshold(const ScalarField& u, double level, double depth) {
  ScalarField out(u.grid);
  for (std::size_t k = 0; k < u.v.size(); ++k)
    out.v[k] = u.v[k] <= level ? -depth : 0.0;
  return out;
}

namespace {

struct PixelRect {
  int i0, j0, i1, j1;  // inclusive
};

void fill(std::vector<std::uint8_t>& mask, int n, const PixelRect& r,
          std::uint8_t value) {
  for (int i = std::max(0, r.i0); i <= std::min(n - 1, r.i1); ++i)
    for (int j = std::max(0, r.j0); j <= std::min(n - 1, r.j1); ++j)
      mask[std::size_t(i) * n + j] = value;
}

// Block letters built from axis-aligned bars inside a w x h cell whose
// top-left pixel is (i0, j0); stroke width s.
void draw_letter(std::vector<std::uint8_t>& mask, int n, char letter, int i0,
                 int j0, int w, int h, int s) {
  const int i1 = i0 + h - 1, j1 = j0 + w - 1;
  switch (letter) {
    case 'E':
      fill(mask, n, {i0, j0, i1, j0 + s - 1}, 1);
      fill(mask, n, {i0, j0, i0 + s - 1, j1}, 1);
      fill(mask, n, {i0 + (h - s) / 2, j0, i0 + (h - s) / 2 + s - 1, j1 - w / 5}, 1);
      fill(mask, n, {i1 - s + 1, j0, i1, j1}, 1);
      break;
    case 'T':
      fill(mask, n, {i0, j0, i0 + s - 1, j1}, 1);
      fill(mask, n, {i0, j0 + (w - s) / 2, i1, j0 + (w - s) / 2 + s - 1}, 1);
      break;
    case 'F':
      fill(mask, n, {i0, j0, i1, j0 + s - 1}, 1);
      fill(mask, n, {i0, j0, i0 + s - 1, j1}, 1);
      fill(mask, n, {i0 + (h - s) / 2, j0, i0 + (h - s) / 2 + s - 1, j1 - w / 5}, 1);
      break;
    case 'H':
      fill(mask, n, {i0, j0, i1, j0 + s - 1}, 1);
      fill(mask, n, {i0, j1 - s + 1, i1, j1}, 1);
      fill(mask, n, {i0 + (h - s) / 2, j0, i0 + (h - s) / 2 + s - 1, j1}, 1);
      break;
    case 'L':
      fill(mask, n, {i0, j0, i1, j0 + s - 1}, 1);
      fill(mask, n, {i1 - s + 1, j0, i1, j1}, 1);
      break;
    default:
      throw std::invalid_argument("draw_letter: unsupported letter");
  }
}

bool all_equal(const std::vector<std::uint8_t>& mask, int n,
               const PixelRect& r, std::uint8_t value, int margin) {
  for (int i = r.i0 - margin; i <= r.i1 + margin; ++i)
    for (int j = r.j0 - margin; j <= r.j1 + margin; ++j) {
      if (i < 0 || j < 0 || i >= n || j >= n) return false;
      if (mask[std::size_t(i) * n + j] != value) return false;
    }
  return true;
}

}  // namespace

GlyphPanel make_glyph_panel(const GridSpec& grid, double depth,
                            std::uint64_t seed) {
  if (grid.n < 64)
    throw std::invalid_argument("make_glyph_panel: grid too small (need n >= 64)");
  const int n = grid.n;
  std::vector<std::uint8_t> mask(std::size_t(n) * n, 0);

  // three letters across the middle band
  const int s = std::max(7, n / 12);          // stroke width
  const int h = std::max(3 * s + 6, n * 2 / 5);  // glyph height
  const int w = h * 3 / 4;
  const int gap = std::max(4, n / 16);
  const int total_w = 3 * w + 2 * gap;
  const int j_start = std::max(1, (n - total_w) / 2);
  const int i_start = std::max(1, (n - h) / 2);
  const char letters[3] = {'E', 'T', 'H'};
  for (int k = 0; k < 3; ++k)
    draw_letter(mask, n, letters[k], i_start, j_start + k * (w + gap), w, h, s);

  std::vector<std::uint8_t> corrupted = mask;
  std::mt19937_64 rng(seed);
  auto uniform_int = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  // holes punched strictly inside strokes
  int holes = 0;
  for (int attempt = 0; attempt < 4000 && holes < 10; ++attempt) {
    const int size = uniform_int(2, 3);
    const int i = uniform_int(1, n - size - 1);
    const int j = uniform_int(1, n - size - 1);
    const PixelRect r{i, j, i + size - 1, j + size - 1};
    if (!all_equal(corrupted, n, r, 1, 1)) continue;
    fill(corrupted, n, r, 0);
    ++holes;
  }
  // specks sprinkled outside, far enough from the letters
  int specks = 0;
  for (int attempt = 0; attempt < 4000 && specks < 12; ++attempt) {
    const int size = uniform_int(1, 2);
    const int i = uniform_int(3, n - size - 3);
    const int j = uniform_int(3, n - size - 3);
    const PixelRect r{i, j, i + size - 1, j + size - 1};
    if (!all_equal(corrupted, n, r, 0, 3)) continue;
    fill(corrupted, n, r, 1);
    ++specks;
  }

  GlyphPanel panel{ScalarField(grid), ScalarField(grid)};
  for (int k = 0; k < grid.size(); ++k) {
    panel.clean.v[k] = mask[k] ? -depth : 0.0;
    panel.corrupted.v[k] = corrupted[k] ? -depth : 0.0;
  }
  return panel;
}

}  // namespace atv
