#include "atv/field_ops.hpp"

#include <algorithm>
#include <cmath>

namespace atv {

DualField grad(const ScalarField& u) {
  const int n = u.n();
  const double inv_h = 1.0 / u.grid.spacing();
  DualField g(u.grid);
  for (int i = 0; i < n; ++i) {
    const double* row = &u.v[std::size_t(i) * n];
    const double* next = i + 1 < n ? row + n : nullptr;
    double* d1 = &g.g1[std::size_t(i) * n];
    double* d2 = &g.g2[std::size_t(i) * n];
    for (int j = 0; j < n; ++j) {
      d1[j] = j + 1 < n ? (row[j + 1] - row[j]) * inv_h : 0.0;
      d2[j] = next ? (next[j] - row[j]) * inv_h : 0.0;
    }
  }
  return g;
}

ScalarField divergence(const DualField& g) {
  const int n = g.n();
  const double inv_h = 1.0 / g.grid.spacing();
  ScalarField out(g.grid);
  for (int i = 0; i < n; ++i) {
    const double* r1 = &g.g1[std::size_t(i) * n];
    const double* r2 = &g.g2[std::size_t(i) * n];
    const double* r2up = i > 0 ? r2 - n : nullptr;
    double* o = &out.v[std::size_t(i) * n];
    for (int j = 0; j < n; ++j) {
      double d = 0.0;
      if (j + 1 < n) d += r1[j];
      if (j > 0) d -= r1[j - 1];
      if (i + 1 < n) d += r2[j];
      if (r2up) d -= r2up[j];
      o[j] = d * inv_h;
    }
  }
  return out;
}

double energy_phi0(const ScalarField& u, double beta) {
  const int n = u.n();
  const double h = u.grid.spacing();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* row = &u.v[std::size_t(i) * n];
    const double* next = i + 1 < n ? row + n : nullptr;
    for (int j = 0; j < n; ++j) {
      if (j + 1 < n) s += std::abs(row[j + 1] - row[j]);
      if (next) s += std::abs(next[j] - row[j]);
    }
  }
  // |Du| carries 1/h, the area weight h^2; one h survives.
  return beta * h * s;
}

double energy_phi1(const ScalarField& u, double gamma, double beta) {
  const int n = u.n();
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double* row = &u.v[std::size_t(i) * n];
    const double* next = i + 1 < n ? row + n : nullptr;
    for (int j = 0; j < n; ++j) {
      if (j + 1 < n) {
        const double d = row[j + 1] - row[j];
        s += d * d;
      }
      if (next) {
        const double d = next[j] - row[j];
        s += d * d;
      }
    }
  }
  return energy_phi0(u, beta) + 0.5 * gamma * s;
}

double mean(const ScalarField& u) {
  double s = 0.0;
  for (double x : u.v) s += x;
  return s / double(u.v.size());
}

double l2_norm(const ScalarField& u) {
  double s = 0.0;
  for (double x : u.v) s += x * x;
  return std::sqrt(s);
}

double linf_diff(const ScalarField& u, const ScalarField& w) {
  require_same_grid(u.grid, w.grid, "linf_diff");
  double m = 0.0;
  for (std::size_t k = 0; k < u.v.size(); ++k)
    m = std::max(m, std::abs(u.v[k] - w.v[k]));
  return m;
}

double l2_diff(const ScalarField& u, const ScalarField& w) {
  require_same_grid(u.grid, w.grid, "l2_diff");
  double s = 0.0;
  for (std::size_t k = 0; k < u.v.size(); ++k) {
    const double d = u.v[k] - w.v[k];
    s += d * d;
  }
  return std::sqrt(s);
}

double dot(const ScalarField& u, const ScalarField& w) {
  require_same_grid(u.grid, w.grid, "dot");
  const double h = u.grid.spacing();
  double s = 0.0;
  for (std::size_t k = 0; k < u.v.size(); ++k) s += u.v[k] * w.v[k];
  return h * h * s;
}

double dot(const DualField& a, const DualField& b) {
  require_same_grid(a.grid, b.grid, "dot");
  const double h = a.grid.spacing();
  double s = 0.0;
  for (std::size_t k = 0; k < a.g1.size(); ++k)
    s += a.g1[k] * b.g1[k] + a.g2[k] * b.g2[k];
  return h * h * s;
}

ScalarField add(const ScalarField& u, const ScalarField& w) {
  require_same_grid(u.grid, w.grid, "add");
  ScalarField out = u;
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] += w.v[k];
  return out;
}

ScalarField sub(const ScalarField& u, const ScalarField& w) {
  require_same_grid(u.grid, w.grid, "sub");
  ScalarField out = u;
  for (std::size_t k = 0; k < out.v.size(); ++k) out.v[k] -= w.v[k];
  return out;
}

ScalarField scale(const ScalarField& u, double c) {
  ScalarField out = u;
  for (double& x : out.v) x *= c;
  return out;
}

ScalarField shift(const ScalarField& u, double c) {
  ScalarField out = u;
  for (double& x : out.v) x += c;
  return out;
}

double min_value(const ScalarField& u) {
  return *std::min_element(u.v.begin(), u.v.end());
}

double max_value(const ScalarField& u) {
  return *std::max_element(u.v.begin(), u.v.end());
}

}  // namespace atv
