#pragma once

#include <array>
#include <filesystem>
#include <utility>
#include <vector>

#include "atv/flow.hpp"
#include "atv/grid.hpp"

namespace atv {

struct ContourSet {
  double level = 0.0;
  // (x1, x2) vertex chains; closed curves repeat their first point.
  std::vector<std::vector<std::array<double, 2>>> polylines;
};

/// Marching squares on the bilinear interpolant; every vertex lies on a
/// grid-cell edge where the interpolant crosses the level.  Saddle cells
/// are resolved by comparing the cell average against the level.
ContourSet extract_contours(const ScalarField& u, double level);

enum class Axis { x1, x2 };

/// Samples the grid line nearest to {fixed_axis = coordinate}, ordered by
/// the free coordinate; returns (free coordinate, value) pairs.
std::vector<std::pair<double, double>> cross_section(const ScalarField& u,
                                                     Axis fixed_axis,
                                                     double coordinate);

struct FacetReport {
  double eps_f = 0.0;          // gradient threshold
  double eps_m = 0.0;          // minimum-level band
  double facet_area = 0.0;     // |D1 u| and |D2 u| below eps_f
  double strip_area_x1 = 0.0;  // |D1 u| below, |D2 u| at or above eps_f
  double strip_area_x2 = 0.0;
  double min_level_area = 0.0;  // area of {u <= min u + eps_m}
};

FacetReport facet_report(const ScalarField& u, double eps_f, double eps_m);
/// Defaults: eps_f = 1e-3*(max-min)/(2L), eps_m = 1e-3*(max-min).
FacetReport facet_report(const ScalarField& u);

/// Least-squares slope of log(rate) against log(time) over the outer steps
/// m_lo..m_hi.  Requires at least five samples with positive rates.
double decay_fit(const std::vector<StepDiagnostics>& steps, int m_lo, int m_hi);

/// Means of the two dominant value clusters (low, high); deterministic
/// two-center iteration seeded at the extremes.
std::pair<double, double> two_level_clusters(const ScalarField& u);

/// Sum of max(|dx1|, |dx2|) over polyline segments.
double polyline_linf_length(const std::vector<std::array<double, 2>>& pts);

/// One "x y" pair per line, blank line between polylines.
void write_contours_txt(const std::filesystem::path& path,
                        const ContourSet& contours);
void write_contours_svg(const std::filesystem::path& path,
                        const ContourSet& contours, const GridSpec& grid);

}  // namespace atv
