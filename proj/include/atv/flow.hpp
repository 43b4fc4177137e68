#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "atv/elliptic.hpp"
#include "atv/grid.hpp"

namespace atv {

struct FlowParams {
  double gamma = 0.0;   // isotropic diffusion weight
  double beta = 1.0;    // anisotropic TV weight
  double dt = 1.0;      // outer time step
  double tau = 0.125;   // dual step of the inner fixed-point iteration
  double tol = 1e-5;    // relative-change stopping tolerance
  int max_inner = 10000;
  int max_outer = 1000;

  /// Throws on hard violations (signs, caps).  tau at or above the
  /// guarantee bound is allowed; see tau_exceeds_guarantee().
  void validate() const;

  /// The convergence guarantee needs tau < 1/(8 lambda1); the reference
  /// experiments run exactly at the boundary value 1/8.
  bool tau_exceeds_guarantee(double lambda1 = 1.0) const {
    return !(tau < 1.0 / (8.0 * lambda1));
  }
};

struct StepDiagnostics {
  int step = 0;        // outer index m
  double time = 0.0;   // m * dt
  int inner_iterations = 0;
  bool converged = true;
  double final_relative_change = 0.0;
  double dual_feasibility_excess = 0.0;  // max(0, max|g| - 1)
  double mean_drift = 0.0;               // |mean(u^m) - mean(u^0)|
  double energy = 0.0;                   // Phi_1(u^m, gamma, beta)
  double rate = 0.0;                     // ||u^m - u^{m-1}||_2 / dt
};

struct ProxResult {
  ScalarField u;
  DualField g;
  StepDiagnostics diag;
};

/// One implicit step: solves
///   min_u 1/2||u - f||^2 + dt*(gamma/2)||grad u||^2
///          + dt*beta*(||D1 u||_1 + ||D2 u||_1)
/// by the dual fixed-point iteration
///   u^n   = solve(I - dt*gamma*Lap, f + dt*beta*divergence(g^{n-1}))
///   g_k^n = (g_k^{n-1} + tau*D_k u^n) / (1 + tau*|D_k u^n|)   k = 1,2
/// with each dual component normalized by its own magnitude.  Stops when
/// ||u^{n-1} - u^n||_2 / ||u^n||_2 < tol or n = max_inner (reported, not
/// an error).  The returned dual is feasible by construction.
ProxResult prox_step(const ScalarField& f, const FlowParams& params);
ProxResult prox_step(const ScalarField& f, const FlowParams& params,
                     const DualField& g_init);
/// Variant reusing a prebuilt operator (must have gamma == dt*gamma).
ProxResult prox_step(const ScalarField& f, const FlowParams& params,
                     const DualField& g_init, const EllipticOperator& op);

using StepCallback =
    std::function<void(int m, const ScalarField&, const StepDiagnostics&)>;

struct EvolveResult {
  ScalarField final_state;
  std::vector<StepDiagnostics> steps;
  std::vector<std::pair<int, ScalarField>> snapshots;
};

/// Outer time stepper: iterates prox_step with f <- u^{m-1}, warm-starting
/// the dual from the previous step.  State u^m has physical time m*dt.
/// mean_drift in the diagnostics is measured against the initial state.
EvolveResult evolve(const ScalarField& f, const FlowParams& params,
                    int m_steps, const std::vector<int>& snapshot_steps = {},
                    const StepCallback& on_step = {});

/// Independent implicit-step oracle for cross-checking prox_step on small
/// grids (n <= 64): replaces |s| by sqrt(s^2 + eps^2), minimizes by damped
/// gradient descent to tight tolerance, and extrapolates over
/// eps in {1e-3, 1e-4, 1e-5}.  Throws on non-convergence.
ScalarField reference_prox_step(const ScalarField& f, const FlowParams& params);

}  // namespace atv
