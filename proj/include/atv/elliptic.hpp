#pragma once

#include <memory>

#include "atv/grid.hpp"

namespace atv {

/// The operator A = I - gamma * Lap_h, where Lap_h is the 5-point
/// stencil with reflected (Neumann) boundary: a missing neighbor is
/// replaced by the center value.  Symmetric positive definite; constants
/// are eigenvectors with eigenvalue exactly 1.
///
/// solve() diagonalizes in the separable cosine basis (exact for this
/// constant-coefficient operator) and is deterministic: identical input
/// produces bit-identical output.
class EllipticOperator {
 public:
  EllipticOperator(const GridSpec& grid, double gamma);

  ScalarField apply(const ScalarField& u) const;
  ScalarField solve(const ScalarField& rhs) const;

  /// Smallest eigenvalue; exactly 1 for the Neumann discretization.
  double smallest_eigenvalue() const { return 1.0; }

  /// Eigenvalue of the separable cosine mode with axis frequencies (p, q):
  /// 1 + (2 gamma / spacing^2) * (2 - cos(pi p / N) - cos(pi q / N)).
  double eigenvalue(int p, int q) const;

  const GridSpec& grid() const { return grid_; }
  double gamma() const { return gamma_; }

 private:
  GridSpec grid_;
  double gamma_;
  std::vector<double> axis_eigen_;  // 2 - 2 cos(pi p / N), p = 0..N-1
  struct Plans;
  std::shared_ptr<const Plans> plans_;  // created only when gamma > 0
};

/// Reflected-boundary discrete Laplacian (the stencil behind A).
ScalarField laplacian(const ScalarField& u);

/// Conjugate-gradient solve of A u = rhs; cross-validation path for the
/// cosine-basis solve.  Stops at relative residual <= tol.
ScalarField cg_solve(const EllipticOperator& op, const ScalarField& rhs,
                     double tol = 1e-12, int max_iter = 100000);

}  // namespace atv
