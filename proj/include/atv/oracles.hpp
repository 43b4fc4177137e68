#pragma once

#include "atv/grid.hpp"

namespace atv {

/// Facet half-width of the paraboloid solution: xi(t) = (3t/2)^(1/3).
double xi(double t);
/// Facet-height auxiliary h(t) = xi(t)^2 = (3t/2)^(2/3).
double facet_height(double t);
/// d/dt facet_height = (2/3) (3/2)^(2/3) t^(-1/3).
double facet_height_rate(double t);

enum class ParabRegion { facet, strip_x1, strip_x2, outer, zero };

/// Evolution of u0 = x1^2 + x2^2 - 2R^2: a square facet of half-width
/// xi(t) grows at the minimum, flanked by strips where exactly one
/// gradient component vanishes.  With truncated = true the initial datum
/// is cut off outside B(0, R) and the state vanishes outside
/// Omega(t) = B(0,R) intersected with {|x1| < L(t)} and {|x2| < L(t)},
/// L(t) = sqrt(R^2 - xi^2); that variant is valid for t < t1 = sqrt(2) R^3 / 6.
struct ParaboloidSolution {
  double R = 1.0;
  bool truncated = false;

  ParaboloidSolution() = default;
  ParaboloidSolution(double R_, bool truncated_) : R(R_), truncated(truncated_) {
    if (!(R > 0.0)) throw std::invalid_argument("ParaboloidSolution: R <= 0");
  }

  /// Validity window end: t1 for the truncated variant, +inf otherwise.
  double valid_until() const;
  double strip_half_length(double t) const;  // L(t)

  ParabRegion region(double x1, double x2, double t) const;
  /// Value of one region's formula at (x1, x2); the continuity checks
  /// compare adjacent branches at the same seam point.
  double region_value(ParabRegion r, double x1, double x2, double t) const;

  struct Eval {
    double value;
    ParabRegion region;
  };
  Eval eval(double x1, double x2, double t) const;

  /// |u_t - div L(grad u)| from the exact piecewise derivatives and the
  /// selection field; zero in every open region.  Rejects points within
  /// seam_guard of a region seam.
  double residual(double x1, double x2, double t, double seam_guard) const;
  /// Distance from (x1, x2) to the nearest region seam at time t.
  double seam_distance(double x1, double x2, double t) const;
};

/// Two-level state from u0 = -M on the square |x|_inf <= alpha inside
/// (-L, L)^2: the pit rises at 2/alpha while the surroundings sink at
/// 2*alpha/(L^2 - alpha^2), meeting at the extinction time.
struct BoxFacetSolution {
  double alpha = 1.0;
  double domain_half_width = 2.0;  // L
  double depth = 1.0;              // M

  BoxFacetSolution() = default;
  BoxFacetSolution(double alpha_, double half_width_, double depth_)
      : alpha(alpha_), domain_half_width(half_width_), depth(depth_) {
    if (!(alpha > 0.0 && alpha < domain_half_width))
      throw std::invalid_argument("BoxFacetSolution: need 0 < alpha < L");
    if (!(depth > 0.0))
      throw std::invalid_argument("BoxFacetSolution: depth must be > 0");
  }

  double extinction_time() const;
  double inside_level(double t) const;   // 2t/alpha - M
  double outside_level(double t) const;  // -2 alpha t / (L^2 - alpha^2)
  /// Rejects t outside [0, T_ext].
  double eval(double x1, double x2, double t) const;
  /// Total in t: the post-extinction constant for t >= T_ext.
  double eval_total(double x1, double x2, double t) const;
};

enum class FrontRegion { facet, arm_x1, arm_x2, corner };

/// Rigidly rising solution of the diffusive equation with gamma = beta/2:
/// u = (2 beta / alpha) t + (ramp(|x1|)^2 + ramp(|x2|)^2) / alpha with
/// ramp(s) = max(s - alpha, 0).
struct TravelingFront {
  double alpha = 1.0;
  double beta = 1.0;

  TravelingFront() = default;
  TravelingFront(double alpha_, double beta_) : alpha(alpha_), beta(beta_) {
    if (!(alpha > 0.0)) throw std::invalid_argument("TravelingFront: alpha <= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("TravelingFront: beta <= 0");
  }

  double gamma() const { return 0.5 * beta; }
  FrontRegion region(double x1, double x2) const;
  double region_value(FrontRegion r, double x1, double x2, double t) const;
  double eval(double x1, double x2, double t) const;
  /// |u_t - (gamma Lap u + beta div L(grad u))| in the open regions.
  double residual(double x1, double x2, double t, double seam_guard) const;
  double seam_distance(double x1, double x2) const;
};

ScalarField rasterize(const ParaboloidSolution& sol, const GridSpec& grid,
                      double t);
ScalarField rasterize(const BoxFacetSolution& sol, const GridSpec& grid,
                      double t);
ScalarField rasterize(const TravelingFront& sol, const GridSpec& grid,
                      double t);

}  // namespace atv
