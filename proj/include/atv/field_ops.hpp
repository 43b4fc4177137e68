#pragma once

#include "atv/grid.hpp"

namespace atv {

/// Forward differences divided by the spacing; the difference at the
/// last index along each axis is zero (homogeneous Neumann).
/// g1 differentiates along x1 (columns), g2 along rows.
DualField grad(const ScalarField& u);

/// Discrete divergence, defined as the exact negative adjoint of grad:
/// <grad u, g> = -<u, divergence g> for the spacing^2-weighted inner
/// product (backward differences with one-sided boundary terms).
ScalarField divergence(const DualField& g);

/// beta * spacing^2 * sum(|D1 u| + |D2 u|).
double energy_phi0(const ScalarField& u, double beta);

/// energy_phi0 plus (gamma/2) * spacing^2 * sum((D1 u)^2 + (D2 u)^2).
double energy_phi1(const ScalarField& u, double gamma, double beta);

double mean(const ScalarField& u);

/// Unweighted vector 2-norm (the norm used by the stopping criterion).
double l2_norm(const ScalarField& u);

double linf_diff(const ScalarField& u, const ScalarField& w);
double l2_diff(const ScalarField& u, const ScalarField& w);

/// spacing^2-weighted inner products.
double dot(const ScalarField& u, const ScalarField& w);
double dot(const DualField& a, const DualField& b);

ScalarField add(const ScalarField& u, const ScalarField& w);
ScalarField sub(const ScalarField& u, const ScalarField& w);
ScalarField scale(const ScalarField& u, double c);
ScalarField shift(const ScalarField& u, double c);

double min_value(const ScalarField& u);
double max_value(const ScalarField& u);

}  // namespace atv
