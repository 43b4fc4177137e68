#pragma once

#include <filesystem>
#include <string>

#include "atv/grid.hpp"

namespace atv {

/// Affine map between the 8-bit pixel lattice and field values:
/// pixel 0 -> vmin, pixel 255 -> vmax.  depth records the two-level
/// magnitude M so downstream thresholding stays reproducible.
struct ValueMap {
  double vmin = -50.0;
  double vmax = 0.0;
  double depth = 50.0;

  double to_value(int pixel) const {
    return vmin + (double(pixel) / 255.0) * (vmax - vmin);
  }
  int to_pixel(double value) const {
    const double p = std::floor(255.0 * (value - vmin) / (vmax - vmin) + 0.5);
    return p < 0.0 ? 0 : (p > 255.0 ? 255 : int(p));
  }
};

/// Reads a grayscale raster (PGM P2/P5 maxval 255, or 8-bit grayscale
/// non-interlaced PNG).  The image must be square; half_width <= 0 picks
/// the pixel convention (N-1)/2.
ScalarField read_image(const std::filesystem::path& path,
                       const ValueMap& map = {}, double half_width = 0.0);

/// Writes a portable graymap, maxval 255, top row first.  binary selects
/// P5 over P2.  Deterministic bytes for identical input.
void write_pgm(const std::filesystem::path& path, const ScalarField& u,
               const ValueMap& map, bool binary = true);

/// Sidecar "key = value" record of the value map (min, max, M).
void write_value_map_sidecar(const std::filesystem::path& path,
                             const ValueMap& map);
ValueMap read_value_map_sidecar(const std::filesystem::path& path);

/// Full-precision field dump (small text header + raw float64 samples);
/// the bit-exact interchange format between runs and comparisons.
void write_field(const std::filesystem::path& path, const ScalarField& u);
ScalarField read_field(const std::filesystem::path& path);

}  // namespace atv
