#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "atv/elliptic.hpp"
#include "atv/field_ops.hpp"
#include "test_helpers.hpp"

using namespace atv;
using test::random_field;
using test::unit_grid;

namespace {

// dense assembly of I - gamma*Lap_h with reflected boundary
std::vector<double> assemble_dense(const GridSpec& g, double gamma) {
  const int n = g.n;
  const int sz = n * n;
  const double w = gamma / (g.spacing() * g.spacing());
  std::vector<double> A(std::size_t(sz) * sz, 0.0);
  auto at = [&](int r, int c) -> double& { return A[std::size_t(r) * sz + c]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int r = i * n + j;
      at(r, r) += 1.0;
      const int di[4] = {0, 0, 1, -1};
      const int dj[4] = {1, -1, 0, 0};
      for (int k = 0; k < 4; ++k) {
        const int ii = i + di[k], jj = j + dj[k];
        if (ii < 0 || jj < 0 || ii >= n || jj >= n) continue;
        at(r, ii * n + jj) -= w;
        at(r, r) += w;
      }
    }
  return A;
}

ScalarField cosine_mode(const GridSpec& g, int p, int q) {
  ScalarField v(g);
  const double pi = std::numbers::pi;
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j)
      v(i, j) = std::cos(pi * p * (2 * i + 1) / (2.0 * g.n)) *
                std::cos(pi * q * (2 * j + 1) / (2.0 * g.n));
  return v;
}

}  // namespace

TEST_CASE("apply keeps constants and is the identity at gamma 0") {
  GridSpec grid(7, 2.0);
  ScalarField c(grid, 5.5);
  CHECK(linf_diff(EllipticOperator(grid, 0.8).apply(c), c) == 0.0);
  ScalarField u = random_field(grid, 1);
  CHECK(linf_diff(EllipticOperator(grid, 0.0).apply(u), u) == 0.0);
}

TEST_CASE("apply matches the dense-matrix oracle") {
  GridSpec grid(6, 1.4);
  const double gamma = 0.37;
  ScalarField u = random_field(grid, 9);
  ScalarField got = EllipticOperator(grid, gamma).apply(u);
  const auto A = assemble_dense(grid, gamma);
  const int sz = grid.size();
  for (int r = 0; r < sz; ++r) {
    double s = 0.0;
    for (int c = 0; c < sz; ++c) s += A[std::size_t(r) * sz + c] * u.v[c];
    CHECK(got.v[r] == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("operator is symmetric in the weighted inner product") {
  GridSpec grid(6, 1.0);
  EllipticOperator op(grid, 0.23);
  for (int trial = 0; trial < 5; ++trial) {
    ScalarField v = random_field(grid, 50 + trial);
    ScalarField w = random_field(grid, 80 + trial);
    CHECK(dot(op.apply(v), w) == doctest::Approx(dot(v, op.apply(w))).epsilon(1e-12));
  }
}

TEST_CASE("solve inverts apply") {
  GridSpec grid(9, 4.0);
  EllipticOperator op(grid, 0.6);
  ScalarField v = random_field(grid, 21);
  ScalarField u = op.solve(op.apply(v));
  CHECK(linf_diff(u, v) < 1e-8);

  // relative residual
  ScalarField rhs = random_field(grid, 22);
  ScalarField sol = op.solve(rhs);
  CHECK(l2_diff(op.apply(sol), rhs) / l2_norm(rhs) < 1e-10);
}

TEST_CASE("solve special cases: identity at gamma 0, constants preserved") {
  GridSpec grid(8, 3.5);
  ScalarField rhs = random_field(grid, 30);
  CHECK(linf_diff(EllipticOperator(grid, 0.0).solve(rhs), rhs) == 0.0);
  ScalarField c(grid, -7.25);
  CHECK(linf_diff(EllipticOperator(grid, 2.0).solve(c), c) < 1e-13);
  ScalarField bad = rhs;
  bad.v[3] = std::nan("");
  CHECK_THROWS_AS((void)EllipticOperator(grid, 2.0).solve(bad),
                  std::invalid_argument);
}

TEST_CASE("solve is deterministic") {
  GridSpec grid(16, 7.5);
  EllipticOperator op(grid, 0.2);
  ScalarField rhs = random_field(grid, 77);
  ScalarField a = op.solve(rhs);
  ScalarField b = op.solve(rhs);
  for (std::size_t k = 0; k < a.v.size(); ++k) CHECK(a.v[k] == b.v[k]);
}

TEST_CASE("cosine modes are eigenvectors with the closed-form eigenvalues") {
  GridSpec grid(10, 4.5);
  EllipticOperator op(grid, 0.31);
  for (auto [p, q] : {std::pair{0, 0}, {1, 0}, {3, 2}, {9, 9}, {5, 7}}) {
    ScalarField v = cosine_mode(grid, p, q);
    ScalarField av = op.apply(v);
    const double lambda = op.eigenvalue(p, q);
    for (int k = 0; k < grid.size(); ++k)
      CHECK(av.v[k] == doctest::Approx(lambda * v.v[k]).epsilon(1e-10));
  }
}

TEST_CASE("smallest eigenvalue is exactly 1") {
  GridSpec grid(8, 3.5);
  CHECK(EllipticOperator(grid, 0.0).smallest_eigenvalue() == 1.0);
  CHECK(EllipticOperator(grid, 0.2).smallest_eigenvalue() == 1.0);

  // inverse power iteration oracle
  EllipticOperator op(grid, 0.2);
  ScalarField v = random_field(grid, 4, 0.5, 1.5);
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    ScalarField w = op.solve(v);
    const double norm = l2_norm(w);
    for (double& x : w.v) x /= norm;
    lambda = dot(w, op.apply(w)) / dot(w, w);
    v = w;
  }
  CHECK(lambda == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("maximum principle for the solve") {
  GridSpec grid(12, 5.5);
  EllipticOperator op(grid, 1.7);
  for (int trial = 0; trial < 10; ++trial) {
    ScalarField rhs = random_field(grid, 300 + trial, -2.0, 5.0);
    ScalarField u = op.solve(rhs);
    const double lo = min_value(rhs), hi = max_value(rhs);
    CHECK(min_value(u) >= lo - 1e-12 * (hi - lo));
    CHECK(max_value(u) <= hi + 1e-12 * (hi - lo));
  }
}

TEST_CASE("conjugate gradient cross-validates the cosine-basis solve") {
  GridSpec grid(11, 5.0);
  EllipticOperator op(grid, 0.45);
  ScalarField rhs = random_field(grid, 61);
  ScalarField direct = op.solve(rhs);
  ScalarField iterative = cg_solve(op, rhs, 1e-13);
  CHECK(linf_diff(direct, iterative) < 1e-10);
}
