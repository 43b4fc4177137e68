#include "atv/elliptic.hpp"

#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "atv/field_ops.hpp"

namespace atv {

struct EllipticOperator::Plans {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  ~Plans() {
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
  }
};

EllipticOperator::EllipticOperator(const GridSpec& grid, double gamma)
    : grid_(grid), gamma_(gamma) {
  if (!(gamma >= 0.0))
    throw std::invalid_argument("EllipticOperator: gamma must be >= 0");
  const int n = grid_.n;
  axis_eigen_.resize(n);
  for (int p = 0; p < n; ++p)
    axis_eigen_[p] = 2.0 - 2.0 * std::cos(std::numbers::pi * p / n);
  if (gamma_ > 0.0) {
    auto plans = std::make_shared<Plans>();
    double* a = fftw_alloc_real(std::size_t(n) * n);
    double* b = fftw_alloc_real(std::size_t(n) * n);
    // FFTW_ESTIMATE keeps planning deterministic and input untouched.
    plans->fwd = fftw_plan_r2r_2d(n, n, a, b, FFTW_REDFT10, FFTW_REDFT10,
                                  FFTW_ESTIMATE);
    plans->inv = fftw_plan_r2r_2d(n, n, a, b, FFTW_REDFT01, FFTW_REDFT01,
                                  FFTW_ESTIMATE);
    fftw_free(a);
    fftw_free(b);
    plans_ = plans;
  }
}

double EllipticOperator::eigenvalue(int p, int q) const {
  const double h = grid_.spacing();
  return 1.0 + gamma_ / (h * h) * (axis_eigen_[p] + axis_eigen_[q]);
}

ScalarField laplacian(const ScalarField& u) {
  const int n = u.n();
  const double inv_h2 = 1.0 / (u.grid.spacing() * u.grid.spacing());
  ScalarField out(u.grid);
  for (int i = 0; i < n; ++i) {
    const double* row = &u.v[std::size_t(i) * n];
    const double* up = i > 0 ? row - n : nullptr;
    const double* dn = i + 1 < n ? row + n : nullptr;
    double* o = &out.v[std::size_t(i) * n];
    for (int j = 0; j < n; ++j) {
      const double c = row[j];
      double s = 0.0;
      if (j > 0) s += row[j - 1] - c;
      if (j + 1 < n) s += row[j + 1] - c;
      if (up) s += up[j] - c;
      if (dn) s += dn[j] - c;
      o[j] = s * inv_h2;
    }
  }
  return out;
}

ScalarField EllipticOperator::apply(const ScalarField& u) const {
  require_same_grid(grid_, u.grid, "EllipticOperator::apply");
  if (gamma_ == 0.0) return u;
  ScalarField lap = laplacian(u);
  ScalarField out = u;
  for (std::size_t k = 0; k < out.v.size(); ++k)
    out.v[k] -= gamma_ * lap.v[k];
  return out;
}

ScalarField EllipticOperator::solve(const ScalarField& rhs) const {
  require_same_grid(grid_, rhs.grid, "EllipticOperator::solve");
  if (!rhs.finite())
    throw std::invalid_argument("EllipticOperator::solve: non-finite input");
  if (gamma_ == 0.0) return rhs;

  const int n = grid_.n;
  const std::size_t sz = std::size_t(n) * n;
  const double h = grid_.spacing();
  const double c = gamma_ / (h * h);
  const double norm = 1.0 / (4.0 * double(n) * double(n));

  double* a = fftw_alloc_real(sz);
  double* b = fftw_alloc_real(sz);
  for (std::size_t k = 0; k < sz; ++k) a[k] = rhs.v[k];
  fftw_execute_r2r(plans_->fwd, a, b);
  for (int p = 0; p < n; ++p) {
    const double ep = axis_eigen_[p];
    double* row = b + std::size_t(p) * n;
    for (int q = 0; q < n; ++q)
      row[q] *= norm / (1.0 + c * (ep + axis_eigen_[q]));
  }
  fftw_execute_r2r(plans_->inv, b, a);

  ScalarField out(grid_);
  for (std::size_t k = 0; k < sz; ++k) out.v[k] = a[k];
  fftw_free(a);
  fftw_free(b);
  return out;
}

ScalarField cg_solve(const EllipticOperator& op, const ScalarField& rhs,
                     double tol, int max_iter) {
  if (op.gamma() == 0.0) return rhs;
  const std::size_t sz = rhs.v.size();
  ScalarField x(rhs.grid, 0.0);
  ScalarField r = rhs;
  ScalarField p = r;
  double rr = 0.0;
  for (double v : r.v) rr += v * v;
  const double stop = tol * tol * rr;
  for (int it = 0; it < max_iter && rr > stop; ++it) {
    ScalarField ap = op.apply(p);
    double pap = 0.0;
    for (std::size_t k = 0; k < sz; ++k) pap += p.v[k] * ap.v[k];
    const double alpha = rr / pap;
    for (std::size_t k = 0; k < sz; ++k) {
      x.v[k] += alpha * p.v[k];
      r.v[k] -= alpha * ap.v[k];
    }
    double rr_new = 0.0;
    for (double v : r.v) rr_new += v * v;
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t k = 0; k < sz; ++k) p.v[k] = r.v[k] + beta * p.v[k];
  }
  return x;
}

}  // namespace atv
