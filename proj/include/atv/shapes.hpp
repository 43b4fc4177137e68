#pragma once

#include <cstdint>
#include <vector>

#include "atv/grid.hpp"

namespace atv {

enum class ShapeKind { l1_ball, l2_ball, linf_ball, composite_s4, custom_mask };

/// Two-level initial datum: f = -depth on the closed set, 0 elsewhere.
/// composite_s4 is the l1 ball of the given radius with a small diamond
/// attached near the upper-right corner and another removed below the
/// center; the side features scale with radius/150.
struct ShapeSpec {
  ShapeKind kind = ShapeKind::linf_ball;
  double radius = 1.0;
  double center_x1 = 0.0;
  double center_x2 = 0.0;
  double depth = 1.0;  // M
  std::vector<std::uint8_t> mask;  // custom_mask only; row-major n*n

  bool contains(double x1, double x2) const;  // membership before sampling
};

ScalarField make_shape(const ShapeSpec& spec, const GridSpec& grid);

/// Separable convolution with a sampled Gaussian truncated at 4 sigma and
/// renormalized to sum 1; boundary samples reflect (half-sample symmetry,
/// consistent with the Neumann stencil).  sigma = 0 is the identity.
ScalarField gaussian_blur(const ScalarField& u, double sigma);

/// -depth where u <= level, 0 where u > level.
ScalarField threshold(const ScalarField& u, double level, double depth);

/// Procedural letterforms used by the text-restoration experiment:
/// axis-aligned block glyphs at -depth on a 0 background, plus a copy
/// corrupted by holes punched inside the strokes and specks sprinkled
/// outside.  Deterministic in (grid, depth, seed).
struct GlyphPanel {
  ScalarField clean;
  ScalarField corrupted;
};
GlyphPanel make_glyph_panel(const GridSpec& grid, double depth,
                            std::uint64_t seed);

}  // namespace atv
