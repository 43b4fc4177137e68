#include "atv/flow.hpp"

#include <cmath>
#include <limits>

#include "atv/field_ops.hpp"

namespace atv {

void FlowParams::validate() const {
  if (!(gamma >= 0.0)) throw std::invalid_argument("FlowParams: gamma < 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("FlowParams: beta < 0");
  if (!(dt > 0.0)) throw std::invalid_argument("FlowParams: dt must be > 0");
  if (!(tau > 0.0)) throw std::invalid_argument("FlowParams: tau must be > 0");
  if (!(tol > 0.0)) throw std::invalid_argument("FlowParams: tol must be > 0");
  if (max_inner < 1) throw std::invalid_argument("FlowParams: max_inner < 1");
  if (max_outer < 1) throw std::invalid_argument("FlowParams: max_outer < 1");
}

namespace {

double relative_change(double sum_diff2, double sum_u2) {
  if (sum_u2 == 0.0)
    return sum_diff2 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(sum_diff2 / sum_u2);
}

}  // namespace

ProxResult prox_step(const ScalarField& f, const FlowParams& params) {
  return prox_step(f, params, DualField(f.grid));
}

ProxResult prox_step(const ScalarField& f, const FlowParams& params,
                     const DualField& g_init) {
  EllipticOperator op(f.grid, params.dt * params.gamma);
  return prox_step(f, params, g_init, op);
}

ProxResult prox_step(const ScalarField& f, const FlowParams& params,
                     const DualField& g_init, const EllipticOperator& op) {
  params.validate();
  require_same_grid(f.grid, g_init.grid, "prox_step");
  require_same_grid(f.grid, op.grid(), "prox_step");
  if (!f.finite()) throw std::invalid_argument("prox_step: non-finite input");
  if (g_init.max_abs() > 1.0 + 1e-12)
    throw std::invalid_argument("prox_step: infeasible dual initialization");
  const double gamma_eff = params.dt * params.gamma;
  if (op.gamma() != gamma_eff)
    throw std::invalid_argument("prox_step: operator gamma != dt*gamma");

  const int n = f.n();
  const double h = f.grid.spacing();
  const double inv_h = 1.0 / h;
  const double c = params.dt * params.beta * inv_h;  // divergence carries 1/h
  const double tau = params.tau;
  // The dual update acts on the nondimensionalized gradient
  // h^2 * D_k u / (dt*beta): under that scaling tau < 1/(8 lambda1)
  // guarantees convergence for any beta and spacing (the fixed points
  // g_k = sgn(D_k u) are unchanged).
  const double dual_scale =
      params.beta > 0.0 ? h / (params.dt * params.beta) : 0.0;

  ProxResult res{ScalarField(f.grid), DualField(f.grid), {}};
  std::vector<double>& g1 = res.g.g1;
  std::vector<double>& g2 = res.g.g2;
  g1 = g_init.g1;
  g2 = g_init.g2;

  ScalarField u(f.grid);
  ScalarField u_prev = f;
  ScalarField rhs(f.grid);

  int iterations = 0;
  double rel = std::numeric_limits<double>::infinity();
  bool converged = false;

  for (int it = 1; it <= params.max_inner; ++it) {
    // rhs = f + dt*beta*divergence(g)
    for (int i = 0; i < n; ++i) {
      const double* r1 = &g1[std::size_t(i) * n];
      const double* r2 = &g2[std::size_t(i) * n];
      const double* r2up = i > 0 ? r2 - n : nullptr;
      const double* fr = &f.v[std::size_t(i) * n];
      double* o = &rhs.v[std::size_t(i) * n];
      for (int j = 0; j < n; ++j) {
        double d = 0.0;
        if (j + 1 < n) d += r1[j];
        if (j > 0) d -= r1[j - 1];
        if (i + 1 < n) d += r2[j];
        if (r2up) d -= r2up[j];
        o[j] = fr[j] + c * d;
      }
    }

    if (gamma_eff > 0.0)
      u = op.solve(rhs);
    else
      u.v.swap(rhs.v);

    // dual update plus stopping-criterion accumulators
    double sum_diff2 = 0.0, sum_u2 = 0.0;
    double sum_gdiff2 = 0.0, sum_g2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double* row = &u.v[std::size_t(i) * n];
      const double* next = i + 1 < n ? row + n : nullptr;
      const double* prev = &u_prev.v[std::size_t(i) * n];
      double* w1 = &g1[std::size_t(i) * n];
      double* w2 = &g2[std::size_t(i) * n];
      for (int j = 0; j < n; ++j) {
        const double ui = row[j];
        const double d1 =
            j + 1 < n ? (row[j + 1] - ui) * dual_scale : 0.0;
        const double d2 = next ? (next[j] - ui) * dual_scale : 0.0;
        const double n1 = (w1[j] + tau * d1) / (1.0 + tau * std::abs(d1));
        const double n2 = (w2[j] + tau * d2) / (1.0 + tau * std::abs(d2));
        const double e1 = n1 - w1[j];
        const double e2 = n2 - w2[j];
        sum_gdiff2 += e1 * e1 + e2 * e2;
        sum_g2 += n1 * n1 + n2 * n2;
        w1[j] = n1;
        w2[j] = n2;
        const double dd = ui - prev[j];
        sum_diff2 += dd * dd;
        sum_u2 += ui * ui;
      }
    }

    rel = relative_change(sum_diff2, sum_u2);
    const double rel_g = relative_change(sum_gdiff2, sum_g2);
    u_prev.v.swap(u.v);
    iterations = it;
    // Stationarity of the pair (u, g): the u-change alone fires long
    // before the dual has transported flux across wide facets (u moves by
    // O(tau) per sweep there while the distance to the fixed point stays
    // O(1)), so both iterates must have stalled.
    if (rel < params.tol && rel_g < params.tol) {
      converged = true;
      break;
    }
  }

  res.u.v.swap(u_prev.v);

  StepDiagnostics& d = res.diag;
  d.inner_iterations = iterations;
  d.converged = converged;
  d.final_relative_change = rel;
  d.dual_feasibility_excess = std::max(0.0, res.g.max_abs() - 1.0);
  d.mean_drift = std::abs(mean(res.u) - mean(f));
  d.energy = energy_phi1(res.u, params.gamma, params.beta);
  d.rate = l2_diff(res.u, f) / params.dt;
  return res;
}

EvolveResult evolve(const ScalarField& f, const FlowParams& params,
                    int m_steps, const std::vector<int>& snapshot_steps,
                    const StepCallback& on_step) {
  params.validate();
  if (m_steps < 1) throw std::invalid_argument("evolve: m_steps must be >= 1");

  EvolveResult out;
  out.steps.reserve(m_steps);
  EllipticOperator op(f.grid, params.dt * params.gamma);
  const double mean0 = mean(f);

  ScalarField u = f;
  DualField g(f.grid);
  for (int m = 1; m <= m_steps; ++m) {
    ProxResult r = prox_step(u, params, g, op);
    r.diag.step = m;
    r.diag.time = m * params.dt;
    r.diag.mean_drift = std::abs(mean(r.u) - mean0);
    u = std::move(r.u);
    g = std::move(r.g);
    out.steps.push_back(r.diag);
    for (int s : snapshot_steps)
      if (s == m) out.snapshots.emplace_back(m, u);
    if (on_step) on_step(m, u, r.diag);
  }
  out.final_state = std::move(u);
  return out;
}

namespace {

// Energy and gradient of the eps-smoothed implicit-step objective,
// unweighted sums with differences carrying 1/h (the same objective the
// dual iteration optimizes).
struct SmoothedObjective {
  const ScalarField& f;
  double a;   // dt*gamma
  double b;   // dt*beta
  double eps;

  double energy(const ScalarField& u) const {
    const int n = u.n();
    const double inv_h = 1.0 / u.grid.spacing();
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double du = u(i, j) - f(i, j);
        e += 0.5 * du * du;
        const double d1 =
            j + 1 < n ? (u(i, j + 1) - u(i, j)) * inv_h : 0.0;
        const double d2 =
            i + 1 < n ? (u(i + 1, j) - u(i, j)) * inv_h : 0.0;
        e += 0.5 * a * (d1 * d1 + d2 * d2);
        e += b * (std::sqrt(d1 * d1 + eps * eps) +
                  std::sqrt(d2 * d2 + eps * eps));
      }
    }
    return e;
  }

  void gradient(const ScalarField& u, ScalarField& grad_out) const {
    const int n = u.n();
    const double inv_h = 1.0 / u.grid.spacing();
    for (std::size_t k = 0; k < grad_out.v.size(); ++k)
      grad_out.v[k] = u.v[k] - f.v[k];
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (j + 1 < n) {
          const double d1 = (u(i, j + 1) - u(i, j)) * inv_h;
          const double w = a * d1 + b * d1 / std::sqrt(d1 * d1 + eps * eps);
          grad_out(i, j + 1) += w * inv_h;
          grad_out(i, j) -= w * inv_h;
        }
        if (i + 1 < n) {
          const double d2 = (u(i + 1, j) - u(i, j)) * inv_h;
          const double w = a * d2 + b * d2 / std::sqrt(d2 * d2 + eps * eps);
          grad_out(i + 1, j) += w * inv_h;
          grad_out(i, j) -= w * inv_h;
        }
      }
    }
  }
};

// Damped gradient descent: heavy-ball steps, halving the step and
// dropping the velocity whenever the energy fails to decrease.
ScalarField descend(const SmoothedObjective& obj, const ScalarField& start,
                    double grad_tol, long max_iter) {
  const double inv_h = 1.0 / start.grid.spacing();
  const double lips = 1.0 + (8.0 * obj.a + 8.0 * obj.b / obj.eps) * inv_h *
                                inv_h;  // curvature bound
  double step = 1.0 / lips;
  const double momentum = 0.97;

  ScalarField u = start;
  ScalarField g(u.grid);
  ScalarField vel(u.grid, 0.0);
  double e = obj.energy(u);
  for (long it = 0; it < max_iter; ++it) {
    obj.gradient(u, g);
    double gmax = 0.0;
    for (double x : g.v) gmax = std::max(gmax, std::abs(x));
    if (gmax < grad_tol) return u;

    ScalarField trial = u;
    for (std::size_t k = 0; k < u.v.size(); ++k) {
      vel.v[k] = momentum * vel.v[k] - step * g.v[k];
      trial.v[k] += vel.v[k];
    }
    const double e_trial = obj.energy(trial);
    if (e_trial <= e) {
      u.v.swap(trial.v);
      e = e_trial;
    } else {
      for (double& x : vel.v) x = 0.0;
      step *= 0.5;
      if (step < 1e-8 / lips)
        throw std::runtime_error("reference_prox_step: step size underflow");
    }
  }
  throw std::runtime_error("reference_prox_step: did not converge");
}

}  // namespace

ScalarField reference_prox_step(const ScalarField& f,
                                const FlowParams& params) {
  params.validate();
  if (f.n() > 64)
    throw std::invalid_argument("reference_prox_step: grid larger than 64x64");
  if (!f.finite())
    throw std::invalid_argument("reference_prox_step: non-finite input");

  const double scale = 1.0 + std::max(std::abs(min_value(f)),
                                      std::abs(max_value(f)));
  const double grad_tol = 1e-11 * scale;

  std::vector<ScalarField> sols;
  ScalarField start = f;
  for (double eps : {1e-3, 1e-4, 1e-5}) {
    SmoothedObjective obj{f, params.dt * params.gamma, params.dt * params.beta,
                          eps};
    start = descend(obj, start, grad_tol, 4000000);
    sols.push_back(start);
  }

  // Aitken extrapolation entrywise over the eps ladder; falls back to the
  // tightest solve where the second difference degenerates.
  ScalarField out = sols[2];
  for (std::size_t k = 0; k < out.v.size(); ++k) {
    const double a0 = sols[0].v[k], a1 = sols[1].v[k], a2 = sols[2].v[k];
    const double denom = a0 - 2.0 * a1 + a2;
    if (std::abs(denom) > 1e-14 * scale) {
      const double d = a2 - a1;
      out.v[k] = a2 - d * d / denom;
    }
  }
  return out;
}

}  // namespace atv
