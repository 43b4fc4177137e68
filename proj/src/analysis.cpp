#include "atv/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

#include "atv/field_ops.hpp"

namespace atv {

namespace {

// Edge identifiers on the sample lattice.  H(i,j): horizontal edge from
// sample (i,j) to (i,j+1); V(i,j): vertical edge from (i,j) to (i+1,j).
struct EdgeId {
  bool horizontal;
  int i, j;
  bool operator<(const EdgeId& o) const {
    if (horizontal != o.horizontal) return horizontal < o.horizontal;
    if (i != o.i) return i < o.i;
    return j < o.j;
  }
  bool operator==(const EdgeId& o) const {
    return horizontal == o.horizontal && i == o.i && j == o.j;
  }
};

std::array<double, 2> edge_point(const GridSpec& g, const ScalarField& u,
                                 double level, const EdgeId& e) {
  const double a = u(e.i, e.j);
  const double b = e.horizontal ? u(e.i, e.j + 1) : u(e.i + 1, e.j);
  const double t = (level - a) / (b - a);
  if (e.horizontal) return {g.x1(e.j) + t * g.spacing(), g.x2(e.i)};
  return {g.x1(e.j), g.x2(e.i) - t * g.spacing()};
}

}  // namespace

ContourSet extract_contours(const ScalarField& u, double level) {
  const int n = u.n();
  const GridSpec& g = u.grid;
  ContourSet out;
  out.level = level;

  auto above = [&](int i, int j) { return u(i, j) > level; };

  // segments as pairs of crossed edges, keyed for deterministic chaining
  std::map<EdgeId, std::vector<std::pair<EdgeId, std::size_t>>> adj;
  std::vector<std::pair<EdgeId, EdgeId>> segments;
  auto add_segment = [&](const EdgeId& a, const EdgeId& b) {
    const std::size_t id = segments.size();
    segments.emplace_back(a, b);
    adj[a].emplace_back(b, id);
    adj[b].emplace_back(a, id);
  };

  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      const bool tl = above(i, j), tr = above(i, j + 1);
      const bool br = above(i + 1, j + 1), bl = above(i + 1, j);
      const int code = (tl ? 1 : 0) | (tr ? 2 : 0) | (br ? 4 : 0) | (bl ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const EdgeId top{true, i, j}, bottom{true, i + 1, j};
      const EdgeId left{false, i, j}, right{false, i, j + 1};
      switch (code) {
        case 1: case 14: add_segment(top, left); break;
        case 2: case 13: add_segment(top, right); break;
        case 4: case 11: add_segment(right, bottom); break;
        case 8: case 7: add_segment(left, bottom); break;
        case 3: case 12: add_segment(left, right); break;
        case 6: case 9: add_segment(top, bottom); break;
        case 5: case 10: {
          // saddle: connect around the corner whose side matches the
          // cell average
          const double avg =
              0.25 * (u(i, j) + u(i, j + 1) + u(i + 1, j) + u(i + 1, j + 1));
          const bool avg_above = avg > level;
          const bool diag_tl = (code == 5);  // positive corners on TL/BR
          if (diag_tl == avg_above) {
            add_segment(top, right);
            add_segment(left, bottom);
          } else {
            add_segment(top, left);
            add_segment(right, bottom);
          }
          break;
        }
        default: break;
      }
    }
  }

  std::vector<bool> used(segments.size(), false);
  auto walk = [&](const EdgeId& start, std::size_t first_seg) {
    std::vector<std::array<double, 2>> pts;
    pts.push_back(edge_point(g, u, level, start));
    EdgeId cur = start;
    std::size_t seg = first_seg;
    while (true) {
      used[seg] = true;
      const auto& [a, b] = segments[seg];
      const EdgeId next = (a == cur) ? b : a;
      pts.push_back(edge_point(g, u, level, next));
      cur = next;
      std::size_t candidate = segments.size();
      for (const auto& [nbr, sid] : adj[cur]) {
        (void)nbr;
        if (!used[sid]) {
          candidate = sid;
          break;
        }
      }
      if (candidate == segments.size()) break;
      seg = candidate;
    }
    return pts;
  };

  // open chains first (edge nodes of degree one), then closed loops
  for (const auto& [edge, incident] : adj) {
    if (incident.size() != 1 || used[incident[0].second]) continue;
    out.polylines.push_back(walk(edge, incident[0].second));
  }
  for (const auto& [edge, incident] : adj) {
    for (const auto& [nbr, sid] : incident) {
      (void)nbr;
      if (!used[sid]) {
        // a cycle walk re-appends its start point, closing the curve
        out.polylines.push_back(walk(edge, sid));
      }
    }
  }
  return out;
}

std::vector<std::pair<double, double>> cross_section(const ScalarField& u,
                                                     Axis fixed_axis,
                                                     double coordinate) {
  const GridSpec& g = u.grid;
  if (std::abs(coordinate) > g.half_width)
    throw std::invalid_argument("cross_section: coordinate outside the domain");
  std::vector<std::pair<double, double>> out;
  out.reserve(g.n);
  if (fixed_axis == Axis::x1) {
    const int j = g.nearest_col(coordinate);
    for (int i = g.n - 1; i >= 0; --i) out.emplace_back(g.x2(i), u(i, j));
  } else {
    const int i = g.nearest_row(coordinate);
    for (int j = 0; j < g.n; ++j) out.emplace_back(g.x1(j), u(i, j));
  }
  return out;
}

FacetReport facet_report(const ScalarField& u, double eps_f, double eps_m) {
  if (!(eps_f > 0.0 && eps_m > 0.0))
    throw std::invalid_argument("facet_report: thresholds must be > 0");
  const int n = u.n();
  const double h = u.grid.spacing();
  const double inv_h = 1.0 / h;
  const double cell = h * h;
  FacetReport rep;
  rep.eps_f = eps_f;
  rep.eps_m = eps_m;
  const double min_u = min_value(u);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d1 =
          j + 1 < n ? std::abs((u(i, j + 1) - u(i, j)) * inv_h) : 0.0;
      const double d2 =
          i + 1 < n ? std::abs((u(i + 1, j) - u(i, j)) * inv_h) : 0.0;
      const bool flat1 = d1 < eps_f, flat2 = d2 < eps_f;
      if (flat1 && flat2)
        rep.facet_area += cell;
      else if (flat1)
        rep.strip_area_x1 += cell;
      else if (flat2)
        rep.strip_area_x2 += cell;
      if (u(i, j) <= min_u + eps_m) rep.min_level_area += cell;
    }
  }
  return rep;
}

FacetReport facet_report(const ScalarField& u) {
  const double range = max_value(u) - min_value(u);
  const double span = 2.0 * u.grid.half_width;
  const double eps_f = std::max(1e-3 * range / span, 1e-300);
  const double eps_m = std::max(1e-3 * range, 1e-300);
  return facet_report(u, eps_f, eps_m);
}

double decay_fit(const std::vector<StepDiagnostics>& steps, int m_lo,
                 int m_hi) {
  std::vector<std::pair<double, double>> pts;  // (log t, log rate)
  for (const auto& d : steps) {
    if (d.step < m_lo || d.step > m_hi) continue;
    if (!(d.rate > 0.0))
      throw std::invalid_argument("decay_fit: nonpositive rate in window");
    pts.emplace_back(std::log(d.time), std::log(d.rate));
  }
  if (pts.size() < 5)
    throw std::invalid_argument("decay_fit: need at least 5 samples in window");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = double(pts.size());
  const double denom = m * sxx - sx * sx;
  if (denom == 0.0) throw std::invalid_argument("decay_fit: degenerate window");
  return (m * sxy - sx * sy) / denom;
}

std::pair<double, double> two_level_clusters(const ScalarField& u) {
  double lo = min_value(u), hi = max_value(u);
  if (lo == hi) return {lo, hi};
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    double sum_lo = 0, sum_hi = 0;
    long n_lo = 0, n_hi = 0;
    for (double x : u.v) {
      if (x <= mid) {
        sum_lo += x;
        ++n_lo;
      } else {
        sum_hi += x;
        ++n_hi;
      }
    }
    const double new_lo = n_lo ? sum_lo / double(n_lo) : lo;
    const double new_hi = n_hi ? sum_hi / double(n_hi) : hi;
    if (new_lo == lo && new_hi == hi) break;
    lo = new_lo;
    hi = new_hi;
  }
  return {lo, hi};
}

double polyline_linf_length(const std::vector<std::array<double, 2>>& pts) {
  double len = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k)
    len += std::max(std::abs(pts[k][0] - pts[k - 1][0]),
                    std::abs(pts[k][1] - pts[k - 1][1]));
  return len;
}

void write_contours_txt(const std::filesystem::path& path,
                        const ContourSet& contours) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  char buf[96];
  for (std::size_t c = 0; c < contours.polylines.size(); ++c) {
    if (c) out << "\n";
    for (const auto& p : contours.polylines[c]) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p[0], p[1]);
      out << buf;
    }
  }
}

void write_contours_svg(const std::filesystem::path& path,
                        const ContourSet& contours, const GridSpec& grid) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const double L = grid.half_width;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%g %g %g "
                "%g\">\n",
                -L, -L, 2 * L, 2 * L);
  out << buf;
  for (const auto& line : contours.polylines) {
    out << "  <polyline fill=\"none\" stroke=\"black\" stroke-width=\""
        << (2.0 * L / 500.0) << "\" points=\"";
    for (const auto& p : line) {
      // SVG y grows downward; flip x2
      std::snprintf(buf, sizeof buf, "%.10g,%.10g ", p[0], -p[1]);
      out << buf;
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace atv
