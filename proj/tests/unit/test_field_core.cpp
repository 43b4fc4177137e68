#include <doctest.h>

#include <cmath>

#include "atv/field_ops.hpp"
#include "atv/shapes.hpp"
#include "test_helpers.hpp"

using namespace atv;
using test::random_field;
using test::random_dual;
using test::unit_grid;

namespace {

// independent loop-based difference oracle
DualField grad_oracle(const ScalarField& u) {
  const int n = u.n();
  const double h = u.grid.spacing();
  DualField g(u.grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      g.g1[i * n + j] = (j == n - 1) ? 0.0 : (u(i, j + 1) - u(i, j)) / h;
      g.g2[i * n + j] = (i == n - 1) ? 0.0 : (u(i + 1, j) - u(i, j)) / h;
    }
  return g;
}

// backward-difference divergence with one-sided boundary terms
ScalarField divergence_oracle(const DualField& g) {
  const int n = g.n();
  const double h = g.grid.spacing();
  ScalarField out(g.grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double a;
      if (j == 0)
        a = g.g1[i * n + j];
      else if (j == n - 1)
        a = -g.g1[i * n + j - 1];
      else
        a = g.g1[i * n + j] - g.g1[i * n + j - 1];
      double b;
      if (i == 0)
        b = g.g2[i * n + j];
      else if (i == n - 1)
        b = -g.g2[(i - 1) * n + j];
      else
        b = g.g2[i * n + j] - g.g2[(i - 1) * n + j];
      out(i, j) = (a + b) / h;
    }
  return out;
}

}  // namespace

TEST_CASE("grad annihilates constants") {
  ScalarField u(unit_grid(7), 3.25);
  DualField g = grad(u);
  CHECK(g.max_abs() == 0.0);
}

TEST_CASE("grad of a column ramp") {
  // u(i,j) = j on a 4x4 grid with spacing 1
  ScalarField u(unit_grid(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) u(i, j) = double(j);
  DualField g = grad(u);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(g.g1[i * 4 + j] == (j < 3 ? 1.0 : 0.0));
      CHECK(g.g2[i * 4 + j] == 0.0);
    }
}

TEST_CASE("grad matches the loop oracle on random fields") {
  ScalarField u = random_field(GridSpec(5, 1.0), 42);
  DualField g = grad(u);
  DualField ref = grad_oracle(u);
  for (int k = 0; k < 25; ++k) {
    CHECK(g.g1[k] == doctest::Approx(ref.g1[k]).epsilon(1e-14));
    CHECK(g.g2[k] == doctest::Approx(ref.g2[k]).epsilon(1e-14));
  }
}

TEST_CASE("divergence of zero is zero") {
  DualField g(unit_grid(6));
  ScalarField d = divergence(g);
  CHECK(l2_norm(d) == 0.0);
}

TEST_CASE("adjoint identity <grad u, g> = -<u, div g>") {
  for (int trial = 0; trial < 20; ++trial) {
    GridSpec grid(6, 1.7);
    ScalarField u = random_field(grid, 100 + trial);
    DualField g = random_dual(grid, 200 + trial);
    const double lhs = dot(grad(u), g);
    const double rhs = -dot(u, divergence(g));
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("divergence matches the backward-difference oracle") {
  GridSpec grid(6, 2.5);
  DualField g(grid);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) g.g1[i * 6 + j] = j * grid.spacing();
  ScalarField d = divergence(g);
  ScalarField ref = divergence_oracle(g);
  for (int k = 0; k < 36; ++k)
    CHECK(d.v[k] == doctest::Approx(ref.v[k]).epsilon(1e-14));

  DualField r = random_dual(grid, 7);
  ScalarField dr = divergence(r);
  ScalarField refr = divergence_oracle(r);
  for (int k = 0; k < 36; ++k)
    CHECK(dr.v[k] == doctest::Approx(refr.v[k]).epsilon(1e-13));
}

TEST_CASE("energy_phi0 of a constant vanishes") {
  CHECK(energy_phi0(ScalarField(unit_grid(9), -4.0), 10.0) == 0.0);
}

TEST_CASE("energy_phi0 of a one-column step is beta*M*N") {
  const int n = 11;
  const double M = 7.0;
  ScalarField u(unit_grid(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) u(i, j) = j < 5 ? 0.0 : M;
  CHECK(energy_phi0(u, 3.0) == doctest::Approx(3.0 * M * n).epsilon(1e-14));
}

TEST_CASE("energy_phi0 of the square indicator counts its perimeter") {
  GridSpec grid(501, 250.0);
  ShapeSpec spec{ShapeKind::linf_ball, 150.0, 0.0, 0.0, 50.0, {}};
  ScalarField f = make_shape(spec, grid);
  const double beta = 10.0;
  CHECK(energy_phi0(f, beta) ==
        doctest::Approx(beta * 4.0 * 50.0 * 301.0).epsilon(1e-13));
}

TEST_CASE("energy_phi0 is absolutely 1-homogeneous") {
  ScalarField u = random_field(GridSpec(8, 2.0), 5);
  const double e = energy_phi0(u, 2.5);
  for (double lam : {-3.0, -0.5, 0.25, 7.0}) {
    CHECK(energy_phi0(scale(u, lam), 2.5) ==
          doctest::Approx(std::abs(lam) * e).epsilon(1e-12));
  }
}

TEST_CASE("energy_phi1 reduces to phi0 at gamma = 0 and dominates it") {
  ScalarField u = random_field(GridSpec(5, 1.0), 11);
  CHECK(energy_phi1(u, 0.0, 4.0) == energy_phi0(u, 4.0));
  CHECK(energy_phi1(ScalarField(unit_grid(5), 2.0), 1.0, 1.0) == 0.0);
  CHECK(energy_phi1(u, 0.7, 4.0) > energy_phi0(u, 4.0));

  // independent summation oracle
  const int n = u.n();
  const double h = u.grid.spacing();
  double quad = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d1 = j + 1 < n ? (u(i, j + 1) - u(i, j)) / h : 0.0;
      const double d2 = i + 1 < n ? (u(i + 1, j) - u(i, j)) / h : 0.0;
      quad += d1 * d1 + d2 * d2;
    }
  const double want = energy_phi0(u, 4.0) + 0.5 * 0.7 * h * h * quad;
  CHECK(energy_phi1(u, 0.7, 4.0) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("mean, l2_norm and linf_diff basics") {
  GridSpec grid(6, 3.0);
  CHECK(mean(ScalarField(grid, -2.5)) == -2.5);
  ScalarField onehot(grid);
  onehot(2, 3) = 3.0;
  CHECK(l2_norm(onehot) == 3.0);
  ScalarField u = random_field(grid, 3);
  CHECK(linf_diff(u, u) == 0.0);
  ScalarField w(GridSpec(7, 3.0));
  CHECK_THROWS_AS((void)linf_diff(u, w), std::invalid_argument);
}
