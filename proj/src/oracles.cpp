#include "atv/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace atv {

double xi(double t) {
  if (!(t >= 0.0)) throw std::domain_error("xi: t must be >= 0");
  return std::cbrt(1.5 * t);
}

double facet_height(double t) {
  const double x = xi(t);
  return x * x;
}

double facet_height_rate(double t) {
  if (!(t > 0.0)) throw std::domain_error("facet_height_rate: t must be > 0");
  return (2.0 / 3.0) * std::pow(1.5, 2.0 / 3.0) * std::pow(t, -1.0 / 3.0);
}

double ParaboloidSolution::valid_until() const {
  if (!truncated) return std::numeric_limits<double>::infinity();
  return std::sqrt(2.0) / 6.0 * R * R * R;
}

double ParaboloidSolution::strip_half_length(double t) const {
  const double x = xi(t);
  const double s = R * R - x * x;
  return s > 0.0 ? std::sqrt(s) : 0.0;
}

ParabRegion ParaboloidSolution::region(double x1, double x2, double t) const {
  const double a1 = std::abs(x1), a2 = std::abs(x2);
  const double x = xi(t);
  if (truncated) {
    const double lt = strip_half_length(t);
    const bool in_box = a1 <= lt && a2 <= lt;
    const bool in_ball = x1 * x1 + x2 * x2 <= R * R;
    if (a1 <= x && a2 <= x) return in_box ? ParabRegion::facet : ParabRegion::zero;
    if (a1 <= x) return (a2 <= lt) ? ParabRegion::strip_x1 : ParabRegion::zero;
    if (a2 <= x) return (a1 <= lt) ? ParabRegion::strip_x2 : ParabRegion::zero;
    return (in_box && in_ball) ? ParabRegion::outer : ParabRegion::zero;
  }
  if (a1 <= x && a2 <= x) return ParabRegion::facet;
  if (a1 <= x) return ParabRegion::strip_x1;
  if (a2 <= x) return ParabRegion::strip_x2;
  return ParabRegion::outer;
}

double ParaboloidSolution::region_value(ParabRegion r, double x1, double x2,
                                        double t) const {
  const double h = facet_height(t);
  switch (r) {
    case ParabRegion::facet:
      return 2.0 * h - 2.0 * R * R;
    case ParabRegion::strip_x1:
      return h + x2 * x2 - 2.0 * R * R;
    case ParabRegion::strip_x2:
      return h + x1 * x1 - 2.0 * R * R;
    case ParabRegion::outer:
      return x1 * x1 + x2 * x2 - 2.0 * R * R;
    case ParabRegion::zero:
      return 0.0;
  }
  return 0.0;
}

ParaboloidSolution::Eval ParaboloidSolution::eval(double x1, double x2,
                                                  double t) const {
  if (!(t >= 0.0)) throw std::domain_error("ParaboloidSolution: t must be >= 0");
  if (truncated && !(t < valid_until()))
    throw std::domain_error(
        "ParaboloidSolution: t beyond the truncated formula's validity window");
  const ParabRegion r = region(x1, x2, t);
  return {region_value(r, x1, x2, t), r};
}

double ParaboloidSolution::seam_distance(double x1, double x2,
                                         double t) const {
  const double a1 = std::abs(x1), a2 = std::abs(x2);
  const double x = xi(t);
  double d = std::min(std::abs(a1 - x), std::abs(a2 - x));
  if (truncated) {
    const double lt = strip_half_length(t);
    d = std::min({d, std::abs(a1 - lt), std::abs(a2 - lt),
                  std::abs(std::hypot(x1, x2) - R)});
  }
  return d;
}

double ParaboloidSolution::residual(double x1, double x2, double t,
                                    double seam_guard) const {
  if (!(t > 0.0))
    throw std::domain_error("ParaboloidSolution::residual: t must be > 0");
  if (truncated && !(t < valid_until()))
    throw std::domain_error("ParaboloidSolution::residual: t out of window");
  if (seam_distance(x1, x2, t) < seam_guard)
    throw std::domain_error("ParaboloidSolution::residual: point near a seam");
  const double x = xi(t);
  double u_t = 0.0, div_sel = 0.0;
  switch (region(x1, x2, t)) {
    case ParabRegion::facet:
      u_t = 2.0 * facet_height_rate(t);
      div_sel = 2.0 / x;  // selection (x1/xi, x2/xi)
      break;
    case ParabRegion::strip_x1:
    case ParabRegion::strip_x2:
      u_t = facet_height_rate(t);
      div_sel = 1.0 / x;  // one linear component, one sign component
      break;
    case ParabRegion::outer:
    case ParabRegion::zero:
      u_t = 0.0;
      div_sel = 0.0;  // constant selection components
      break;
  }
  return std::abs(u_t - div_sel);
}

double BoxFacetSolution::extinction_time() const {
  // M (2/alpha + 2 alpha/(L^2-alpha^2))^{-1}, simplified so that exact
  // integer inputs evaluate exactly.
  const double l2 = domain_half_width * domain_half_width;
  return depth * alpha * (l2 - alpha * alpha) / (2.0 * l2);
}

double BoxFacetSolution::inside_level(double t) const {
  return 2.0 * t / alpha - depth;
}

double BoxFacetSolution::outside_level(double t) const {
  const double l2 = domain_half_width * domain_half_width;
  return -2.0 * alpha * t / (l2 - alpha * alpha);
}

double BoxFacetSolution::eval(double x1, double x2, double t) const {
  if (!(t >= 0.0)) throw std::domain_error("BoxFacetSolution: t must be >= 0");
  if (t > extinction_time())
    throw std::domain_error("BoxFacetSolution: t beyond the extinction time");
  if (std::abs(x1) <= alpha && std::abs(x2) <= alpha) return inside_level(t);
  return outside_level(t);
}

double BoxFacetSolution::eval_total(double x1, double x2, double t) const {
  if (!(t >= 0.0)) throw std::domain_error("BoxFacetSolution: t must be >= 0");
  const double text = extinction_time();
  if (t >= text) return outside_level(text);
  return eval(x1, x2, t);
}

FrontRegion TravelingFront::region(double x1, double x2) const {
  const bool in1 = std::abs(x1) <= alpha;
  const bool in2 = std::abs(x2) <= alpha;
  if (in1 && in2) return FrontRegion::facet;
  if (in1) return FrontRegion::arm_x1;
  if (in2) return FrontRegion::arm_x2;
  return FrontRegion::corner;
}

double TravelingFront::region_value(FrontRegion r, double x1, double x2,
                                    double t) const {
  const double rise = 2.0 * beta * t / alpha;
  const double r1 = std::max(std::abs(x1) - alpha, 0.0);
  const double r2 = std::max(std::abs(x2) - alpha, 0.0);
  switch (r) {
    case FrontRegion::facet:
      return rise;
    case FrontRegion::arm_x1:
      return rise + r2 * r2 / alpha;
    case FrontRegion::arm_x2:
      return rise + r1 * r1 / alpha;
    case FrontRegion::corner:
      return rise + (r1 * r1 + r2 * r2) / alpha;
  }
  return rise;
}

double TravelingFront::eval(double x1, double x2, double t) const {
  return region_value(region(x1, x2), x1, x2, t);
}

double TravelingFront::seam_distance(double x1, double x2) const {
  return std::min(std::abs(std::abs(x1) - alpha),
                  std::abs(std::abs(x2) - alpha));
}

double TravelingFront::residual(double x1, double x2, double t,
                                double seam_guard) const {
  (void)t;  // the speed is time independent
  if (seam_distance(x1, x2) < seam_guard)
    throw std::domain_error("TravelingFront::residual: point near a seam");
  const double u_t = 2.0 * beta / alpha;
  double lap = 0.0, div_sel = 0.0;
  switch (region(x1, x2)) {
    case FrontRegion::facet:
      lap = 0.0;
      div_sel = 2.0 / alpha;  // selection (x1/alpha, x2/alpha)
      break;
    case FrontRegion::arm_x1:
    case FrontRegion::arm_x2:
      lap = 2.0 / alpha;
      div_sel = 1.0 / alpha;
      break;
    case FrontRegion::corner:
      lap = 4.0 / alpha;
      div_sel = 0.0;
      break;
  }
  return std::abs(u_t - (gamma() * lap + beta * div_sel));
}

ScalarField rasterize(const ParaboloidSolution& sol, const GridSpec& grid,
                      double t) {
  if (sol.truncated && !(t < sol.valid_until()))
    throw std::domain_error("rasterize: t beyond the truncated validity window");
  ScalarField out(grid);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      out(i, j) = sol.eval(grid.x1(j), grid.x2(i), t).value;
  return out;
}

ScalarField rasterize(const BoxFacetSolution& sol, const GridSpec& grid,
                      double t) {
  ScalarField out(grid);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      out(i, j) = sol.eval(grid.x1(j), grid.x2(i), t);
  return out;
}

ScalarField rasterize(const TravelingFront& sol, const GridSpec& grid,
                      double t) {
  ScalarField out(grid);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j)
      out(i, j) = sol.eval(grid.x1(j), grid.x2(i), t);
  return out;
}

}  // namespace atv
