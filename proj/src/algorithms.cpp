#include "pareto/algorithms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pareto/rng.hpp"

namespace pareto {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Control initial_control_for(const ProblemSpec& spec, const SolverOptions& opts) {
  if (!opts.initial_control) return zero_control(*spec.grid, spec.time);
  Control v = *opts.initial_control;
  if (v.nt() != spec.time.nt) throw std::invalid_argument("solver: warm start has wrong step count");
  for (const auto& s : v.steps)
    if (static_cast<int>(s.size()) != spec.grid->num_nodes())
      throw std::invalid_argument("solver: warm start does not match grid");
  return project(spec.admissible, *spec.grid, spec.time, std::move(v));
}

void finish(SolveReport& rep, const ProblemSpec& spec, Clock::time_point t0) {
  rep.costs = evaluate_costs(spec, rep.control);
  rep.wall_seconds = seconds_since(t0);
}

// Copies phi^{m-1} onto control level m over omega (conventions in adjoint.hpp).
Control restrict_adjoint(const Grid& g, const TimeGrid& tg, const Trajectory& phi) {
  Control c = zero_control(g, tg);
  for (int m = 1; m <= tg.nt; ++m) {
    const Field& src = phi.levels[m - 1];
    Field& dst = c.steps[m - 1];
    for (int i = 0; i < g.num_nodes(); ++i)
      if (g.omega_mask[i]) dst[i] = src[i];
  }
  return c;
}

double relative_change(const Grid& g, const TimeGrid& tg, const Control& vnew,
                       const Control& vold) {
  Control diff = vnew;
  axpy(-1.0, vold, diff);
  return control_norm(g, tg, diff) / std::max(control_norm(g, tg, vold), 1e-30);
}

}  // namespace

bool algorithm_matches_model(int algorithm_id, const ModelKind& model) {
  switch (algorithm_id) {
    case 1:
    case 2: return std::holds_alternative<LinearModel>(model);
    case 3:
    case 4: return std::holds_alternative<SemilinearModel>(model);
    case 5:
    case 6: return std::holds_alternative<BilinearModel>(model);
    default: return false;
  }
}

SolveReport pareto_cg_linear(const ProblemSpec& spec, const SolverOptions& opts) {
  const auto t0 = Clock::now();
  spec.validate();
  if (!std::holds_alternative<LinearModel>(spec.model))
    throw std::invalid_argument("pareto_cg_linear: needs the linear model");
  if (!std::holds_alternative<FullSpace>(spec.admissible))
    throw std::invalid_argument("pareto_cg_linear: unconstrained controls only");
  const Grid& g = *spec.grid;
  const TimeGrid& tg = spec.time;

  auto [u1T, u2T] = uncontrolled_targets(spec);
  const TerminalWeight tw = make_terminal_weight(g, spec.alpha, u1T, u2T);

  // rhs of (mu I + Lambda_alpha) v = -f_alpha
  Trajectory ubar = forward_linear(g, tg, spec.u0, zero_control(g, tg), spec.stepper);
  Trajectory fbar =
      adjoint_linear(g, tg, terminal_misfit(g, tw, ubar.final_state()), spec.stepper);
  Control rhs = restrict_adjoint(g, tg, fbar);
  scale(rhs, -1.0);

  auto apply = [&](const Control& z) {
    Trajectory w = forward_linear(g, tg, zero_field(g), z, spec.stepper);
    Field term(g.num_nodes(), 0.0);
    const Field& wT = w.final_state();
    for (int i = 0; i < g.num_nodes(); ++i)
      if (g.domain_mask[i]) term[i] = tw.w[i] * wT[i];
    Trajectory psi = adjoint_linear(g, tg, term, spec.stepper);
    Control out = restrict_adjoint(g, tg, psi);
    axpy(spec.mu, z, out);
    return out;
  };
  auto dot = [&](const Control& a, const Control& b) { return control_inner(g, tg, a, b); };

  CgOptions cgo{opts.tolerance, opts.max_iterations};
  auto res = cg_generic(apply, rhs, initial_control_for(spec, opts), dot, cgo);

  SolveReport rep;
  rep.control = std::move(res.x);
  rep.residual_history = std::move(res.residual_history);
  rep.iterations = res.iterations;
  rep.converged = res.converged;
  rep.algorithm_id = 2;
  finish(rep, spec, t0);
  return rep;
}

SolveReport fixed_point_semilinear(const ProblemSpec& spec, const SolverOptions& opts) {
  const auto t0 = Clock::now();
  spec.validate();
  const auto* sl = std::get_if<SemilinearModel>(&spec.model);
  if (!sl) throw std::invalid_argument("fixed_point_semilinear: needs the semilinear model");
  const Grid& g = *spec.grid;
  const TimeGrid& tg = spec.time;

  auto [u1T, u2T] = uncontrolled_targets(spec);
  const TerminalWeight tw = make_terminal_weight(g, spec.alpha, u1T, u2T);

  Control v = initial_control_for(spec, opts);
  SolveReport rep;
  rep.algorithm_id = 3;
  for (int k = 0; k < opts.max_iterations; ++k) {
    Trajectory u = forward_semilinear(g, tg, spec.u0, v, sl->f, spec.stepper);
    Trajectory phi = adjoint_semilinear(g, tg, u, terminal_misfit(g, tw, u.final_state()),
                                        sl->f, spec.stepper);
    Control cand = restrict_adjoint(g, tg, phi);
    scale(cand, -1.0 / spec.mu);
    Control vnew = project(spec.admissible, g, tg, std::move(cand));
    const double change = relative_change(g, tg, vnew, v);
    rep.residual_history.push_back(change);
    rep.iterations = k + 1;
    v = std::move(vnew);
    if (change <= opts.tolerance) {
      rep.converged = true;
      break;
    }
  }
  rep.control = std::move(v);
  finish(rep, spec, t0);
  return rep;
}

namespace {

// Workspace for the simplified Newton iteration on the coupled system
//   state rows   (I+dtA) U^n - U^{n-1} + dt F(U^{n-1}) + (dt/mu) c .* P^{n-1} = 0
//   adjoint rows (I+dtA) P^m - rf^{m+1} .* P^{m+1} = 0   (rf = 1 - dt F'(u),
//                the factor is dropped on the last backward row, m = nt-1)
//   U^0 = u0,    P^nt = W .* U^nt - G
// in packed interior-dof vectors.  c = omega indicator for the weighted
// terminal form (where the root is the stationarity system of J_alpha) or
// -1 everywhere for the unweighted comparison form.
struct NewtonSystem {
  const Grid& g;
  const TimeGrid& tg;
  const Reaction& f;
  double mu;
  SparseOperator A;
  int nd, nt, cap;
  double dt, inner_tol;
  std::vector<double> couple, W, G, u0p;
  std::vector<std::vector<double>> rf;  // per level, packed 1 - dt F'(ulin)

  std::vector<std::vector<double>> rs, ra;  // residuals: rs[1..nt], ra[0..nt-1]
  std::vector<double> rinit, rterm;

  NewtonSystem(const Grid& gg, const TimeGrid& tt, const Reaction& ff, double m)
      : g(gg), tg(tt), f(ff), mu(m), A(identity_plus_scaled(gg.laplacian, tt.dt())),
        nd(gg.num_dofs()), nt(tt.nt), cap(0), dt(tt.dt()), inner_tol(1e-12) {}

  std::vector<double> pack(const Field& fld) const {
    std::vector<double> x(nd);
    for (int d = 0; d < nd; ++d) x[d] = fld[g.node_of_dof[d]];
    return x;
  }

  double znorm(const std::vector<std::vector<double>>& U,
               const std::vector<std::vector<double>>& P) {
    std::vector<double> tmp(nd);
    const double wu = g.cell_volume();
    auto sq = [&](const std::vector<double>& x) {
      double s = 0;
      for (double v : x) s += v * v;
      return s;
    };
    double zsq = 0.0;
    for (int n = 1; n <= nt; ++n) {
      A.apply(U[n], tmp);
      auto& r = rs[n];
      r.resize(nd);
      for (int d = 0; d < nd; ++d)
        r[d] = tmp[d] - U[n - 1][d] + dt * f.value(U[n - 1][d]) +
               (dt / mu) * couple[d] * P[n - 1][d];
      zsq += dt * wu * sq(r);
    }
    for (int m = 0; m < nt; ++m) {
      A.apply(P[m], tmp);
      auto& r = ra[m];
      r.resize(nd);
      // residual of the true system: reaction derivative at the current state
      // iterate (the frozen rf factors only enter the correction sweeps)
      for (int d = 0; d < nd; ++d)
        r[d] = tmp[d] - (m == nt - 1 ? P[nt][d]
                                     : (1.0 - dt * f.clamped_deriv(U[m + 1][d])) * P[m + 1][d]);
      zsq += dt * wu * sq(r);
    }
    for (int d = 0; d < nd; ++d) rinit[d] = U[0][d] - u0p[d];
    for (int d = 0; d < nd; ++d) rterm[d] = P[nt][d] - W[d] * U[nt][d] + G[d];
    zsq += wu * (sq(rinit) + sq(rterm));
    return std::sqrt(zsq);
  }

  // psi sweep for the frozen Jacobian; radj = nullptr means homogeneous rows.
  void backward(const std::vector<double>& q, const std::vector<std::vector<double>>* radj,
                std::vector<std::vector<double>>& psi) const {
    std::vector<double> tmp(nd);
    psi[nt] = q;
    for (int m = nt - 1; m >= 0; --m) {
      for (int d = 0; d < nd; ++d) {
        tmp[d] = (m == nt - 1 ? psi[nt][d] : rf[m + 1][d] * psi[m + 1][d]);
        if (radj) tmp[d] += (*radj)[m][d];
      }
      psi[m] = solve_spd(A, tmp, inner_tol, cap, &psi[m + 1]);
    }
  }

  void forward(const std::vector<std::vector<double>>& psi, bool particular,
               std::vector<std::vector<double>>& y) const {
    std::vector<double> tmp(nd);
    y[0] = particular ? rinit : std::vector<double>(nd, 0.0);
    for (int n = 1; n <= nt; ++n) {
      for (int d = 0; d < nd; ++d) {
        tmp[d] = rf[n - 1][d] * y[n - 1][d] - (dt / mu) * couple[d] * psi[n - 1][d];
        if (particular) tmp[d] += rs[n][d];
      }
      y[n] = solve_spd(A, tmp, inner_tol, cap, &y[n - 1]);
    }
  }
};

}  // namespace

SolveReport newton_semilinear(const ProblemSpec& spec, const SolverOptions& opts) {
  const auto t0 = Clock::now();
  spec.validate();
  const auto* sl = std::get_if<SemilinearModel>(&spec.model);
  if (!sl) throw std::invalid_argument("newton_semilinear: needs the semilinear model");
  if (!std::holds_alternative<FullSpace>(spec.admissible))
    throw std::invalid_argument("newton_semilinear: unconstrained controls only");
  const Grid& g = *spec.grid;
  const TimeGrid& tg = spec.time;
  const bool weighted = opts.newton_terminal == NewtonTerminalForm::weighted;

  NewtonSystem sys(g, tg, sl->f, spec.mu);
  sys.cap = spec.stepper.cap_factor * sys.nd;
  sys.inner_tol = std::clamp(opts.tolerance * 1e-4, 1e-14, 1e-12);
  sys.u0p = sys.pack(spec.u0);
  sys.rs.resize(sys.nt + 1);
  sys.ra.resize(sys.nt);
  sys.rinit.resize(sys.nd);
  sys.rterm.resize(sys.nd);

  auto [u1T, u2T] = uncontrolled_targets(spec);
  if (weighted) {
    const TerminalWeight tw = make_terminal_weight(g, spec.alpha, u1T, u2T);
    sys.W = sys.pack(tw.w);
    sys.G = sys.pack(tw.g);
  } else {
    sys.W.assign(sys.nd, 1.0);
    Field blendT(g.num_nodes(), 0.0);
    for (int i = 0; i < g.num_nodes(); ++i)
      blendT[i] = spec.alpha * u1T[i] + (1.0 - spec.alpha) * u2T[i];
    sys.G = sys.pack(blendT);
  }
  sys.couple.assign(sys.nd, -1.0);
  if (weighted)
    for (int d = 0; d < sys.nd; ++d)
      sys.couple[d] = g.omega_mask[g.node_of_dof[d]] ? 1.0 : 0.0;

  // linearization point: uncontrolled trajectory of the blended initial data
  Field blend0(g.num_nodes(), 0.0);
  for (int i = 0; i < g.num_nodes(); ++i)
    if (g.domain_mask[i]) blend0[i] = spec.alpha * spec.u01[i] + (1.0 - spec.alpha) * spec.u02[i];
  Trajectory ulin =
      forward_semilinear(g, tg, blend0, zero_control(g, tg), sl->f, spec.stepper);
  sys.rf.assign(sys.nt + 1, std::vector<double>(sys.nd));
  for (int n = 0; n <= sys.nt; ++n)
    for (int d = 0; d < sys.nd; ++d)
      sys.rf[n][d] = 1.0 - sys.dt * sl->f.clamped_deriv(ulin.levels[n][g.node_of_dof[d]]);

  // iterate = linearization point, zero adjoint
  std::vector<std::vector<double>> U(sys.nt + 1), P(sys.nt + 1, std::vector<double>(sys.nd, 0.0));
  for (int n = 0; n <= sys.nt; ++n) U[n] = sys.pack(ulin.levels[n]);

  std::vector<std::vector<double>> psi(sys.nt + 1, std::vector<double>(sys.nd, 0.0));
  std::vector<std::vector<double>> y(sys.nt + 1, std::vector<double>(sys.nd, 0.0));
  auto khat = [&](const std::vector<double>& q) {
    sys.backward(q, nullptr, psi);
    sys.forward(psi, false, y);
    return y[sys.nt];
  };
  auto apply_m = [&](const std::vector<double>& x) {
    auto kx = khat(x);
    std::vector<double> out(sys.nd);
    for (int d = 0; d < sys.nd; ++d) out[d] = x[d] - sys.W[d] * kx[d];
    return out;
  };
  auto apply_mt = [&](const std::vector<double>& x) {
    std::vector<double> wx(sys.nd);
    for (int d = 0; d < sys.nd; ++d) wx[d] = sys.W[d] * x[d];
    auto kx = khat(wx);
    for (int d = 0; d < sys.nd; ++d) wx[d] = x[d] - kx[d];
    return wx;
  };
  // The terminal-space fixed-point operator I - W.*Khat is nonsymmetric (Khat
  // itself is symmetric negative semidefinite), so the generic CG runs on its
  // normal equations; eigenvalues of the raw operator are >= 1, keeping the
  // squared system well conditioned.
  auto apply_mtm = [&](const std::vector<double>& x) { return apply_mt(apply_m(x)); };
  auto dotw = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (int d = 0; d < sys.nd; ++d) s += a[d] * b[d];
    return s * g.cell_volume();
  };

  SolveReport rep;
  rep.algorithm_id = 4;
  double zfloor = 1.0, zprev = std::numeric_limits<double>::infinity();
  int grow = 0;
  for (int k = 0;; ++k) {
    const double Z = sys.znorm(U, P);
    if (k == 0) zfloor = std::max(1.0, Z);
    const double rel = Z / zfloor;
    if (k > 0) rep.residual_history.push_back(rel);
    rep.iterations = k;
    if (rel <= opts.tolerance) {
      rep.converged = true;
      break;
    }
    if (k >= opts.max_iterations) break;
    if (Z > zprev) {
      if (++grow >= 3) break;  // residual grew three times in a row: diverging
    } else {
      grow = 0;
    }
    zprev = Z;

    // particular sweeps, then the terminal equation (I - W.*Khat) q = rhs
    sys.backward(std::vector<double>(sys.nd, 0.0), &sys.ra, psi);
    sys.forward(psi, true, y);
    std::vector<double> rhs(sys.nd);
    for (int d = 0; d < sys.nd; ++d) rhs[d] = sys.rterm[d] + sys.W[d] * y[sys.nt][d];

    CgOptions qopts{1e-12, 10 * sys.nd};
    auto qres = cg_generic(apply_mtm, apply_mt(rhs), std::vector<double>(sys.nd, 0.0), dotw, qopts);
    if (!qres.converged)
      throw SolverFailure("newton_semilinear: terminal-space solve did not converge");

    sys.backward(qres.x, &sys.ra, psi);
    sys.forward(psi, true, y);

    double step = 1.0;
    auto apply_step = [&](double s) {
      for (int n = 0; n <= sys.nt; ++n) axpy(-s, y[n], U[n]);
      for (int m = 0; m <= sys.nt; ++m) axpy(-s, psi[m], P[m]);
    };
    apply_step(step);
    if (opts.newton_damping) {
      double Znew = sys.znorm(U, P);
      int tries = 0;
      while (Znew > Z && tries < 5) {
        apply_step(-step / 2);  // roll half of the step back
        step /= 2;
        Znew = sys.znorm(U, P);
        ++tries;
      }
    }
  }

  Control v = zero_control(g, tg);
  for (int m = 1; m <= sys.nt; ++m)
    for (int d = 0; d < sys.nd; ++d) {
      const int node = g.node_of_dof[d];
      if (g.omega_mask[node]) v.steps[m - 1][node] = -P[m - 1][d] / spec.mu;
    }
  rep.control = std::move(v);
  finish(rep, spec, t0);
  return rep;
}

namespace {

// One state + blended-misfit adjoint round for the bilinear model.
struct BilinearPair {
  Trajectory u, phi;
};

BilinearPair bilinear_pair(const ProblemSpec& spec, const TerminalWeight& tw, const Control& v) {
  BilinearPair p;
  p.u = forward_bilinear(*spec.grid, spec.time, spec.u0, v, spec.stepper);
  p.phi = adjoint_bilinear(*spec.grid, spec.time, v,
                           terminal_misfit(*spec.grid, tw, p.u.final_state()), spec.stepper);
  return p;
}

const Box& require_box(const AdmissibleSet& set, const char* who) {
  const auto* box = std::get_if<Box>(&set);
  if (!box)
    throw std::invalid_argument(std::string(who) +
                                ": needs box-constrained controls (pointwise bound)");
  return *box;
}

}  // namespace

SolveReport gradient_descent_bilinear(const ProblemSpec& spec, const SolverOptions& opts) {
  const auto t0 = Clock::now();
  spec.validate();
  if (!std::holds_alternative<BilinearModel>(spec.model))
    throw std::invalid_argument("gradient_descent_bilinear: needs the bilinear model");
  require_box(spec.admissible, "gradient_descent_bilinear");
  const Grid& g = *spec.grid;
  const TimeGrid& tg = spec.time;

  auto [u1T, u2T] = uncontrolled_targets(spec);
  const TerminalWeight tw = make_terminal_weight(g, spec.alpha, u1T, u2T);

  Control v = initial_control_for(spec, opts);

  double tau;
  if (opts.tau) {
    tau = *opts.tau;
    if (!(tau > 0)) throw std::invalid_argument("gradient_descent_bilinear: tau must be positive");
  } else {
    // Lipschitz estimate of the gradient map by 10 steps of power iteration on
    // its difference quotient around v0.
    auto grad_at = [&](const Control& vv) {
      BilinearPair p = bilinear_pair(spec, tw, vv);
      Control out = zero_control(g, tg);
      for (int m = 1; m <= tg.nt; ++m)
        for (int i = 0; i < g.num_nodes(); ++i)
          if (g.omega_mask[i])
            out.steps[m - 1][i] =
                -p.phi.levels[m - 1][i] * p.u.levels[m][i] + spec.mu * vv.steps[m - 1][i];
      return out;
    };
    const Control gv = grad_at(v);
    Rng rng(0x5eedULL);
    Control z = zero_control(g, tg);
    for (auto& step : z.steps)
      for (int i = 0; i < g.num_nodes(); ++i)
        if (g.omega_mask[i]) step[i] = rng.symmetric();
    double zn = control_norm(g, tg, z);
    double lips = 0.0;
    const double eps = 1e-4;
    for (int it = 0; it < 10 && zn > 0; ++it) {
      scale(z, 1.0 / zn);
      Control vp = v;
      axpy(eps, z, vp);
      Control hz = grad_at(vp);
      axpy(-1.0, gv, hz);
      scale(hz, 1.0 / eps);
      lips = control_norm(g, tg, hz);
      if (lips < 1e-12) break;
      z = std::move(hz);
      zn = lips;
    }
    tau = 1.0 / (spec.mu + lips);
  }

  SolveReport rep;
  rep.algorithm_id = 5;
  for (int k = 0; k < opts.max_iterations; ++k) {
    BilinearPair p = bilinear_pair(spec, tw, v);
    Control cand = zero_control(g, tg);
    for (int m = 1; m <= tg.nt; ++m)
      for (int i = 0; i < g.num_nodes(); ++i)
        if (g.omega_mask[i])
          cand.steps[m - 1][i] = (1.0 - tau * spec.mu) * v.steps[m - 1][i] +
                                 tau * p.phi.levels[m - 1][i] * p.u.levels[m][i];
    Control vnew = project(spec.admissible, g, tg, std::move(cand));
    const double change = relative_change(g, tg, vnew, v);
    rep.residual_history.push_back(change);
    rep.iterations = k + 1;
    v = std::move(vnew);
    if (change <= opts.tolerance) {
      rep.converged = true;
      break;
    }
  }
  rep.control = std::move(v);
  finish(rep, spec, t0);
  return rep;
}

SolveReport fixed_point_bilinear(const ProblemSpec& spec, const SolverOptions& opts) {
  const auto t0 = Clock::now();
  spec.validate();
  if (!std::holds_alternative<BilinearModel>(spec.model))
    throw std::invalid_argument("fixed_point_bilinear: needs the bilinear model");
  require_box(spec.admissible, "fixed_point_bilinear");
  const Grid& g = *spec.grid;
  const TimeGrid& tg = spec.time;

  auto [u1T, u2T] = uncontrolled_targets(spec);
  const TerminalWeight tw = make_terminal_weight(g, spec.alpha, u1T, u2T);

  Control v = initial_control_for(spec, opts);
  SolveReport rep;
  rep.algorithm_id = 6;
  for (int k = 0; k < opts.max_iterations; ++k) {
    BilinearPair p = bilinear_pair(spec, tw, v);
    Control cand = zero_control(g, tg);
    for (int m = 1; m <= tg.nt; ++m)
      for (int i = 0; i < g.num_nodes(); ++i)
        if (g.omega_mask[i])
          cand.steps[m - 1][i] = p.u.levels[m][i] * p.phi.levels[m - 1][i] / spec.mu;
    Control vnew = project(spec.admissible, g, tg, std::move(cand));
    const double change = relative_change(g, tg, vnew, v);
    rep.residual_history.push_back(change);
    rep.iterations = k + 1;
    v = std::move(vnew);
    if (change <= opts.tolerance) {
      rep.converged = true;
      break;
    }
  }
  rep.control = std::move(v);
  finish(rep, spec, t0);
  return rep;
}

SolveReport solve_with_algorithm(int algorithm_id, const ProblemSpec& spec,
                                 const SolverOptions& opts) {
  if (!algorithm_matches_model(algorithm_id, spec.model))
    throw std::invalid_argument("solve_with_algorithm: algorithm " +
                                std::to_string(algorithm_id) + " does not apply to this model");
  switch (algorithm_id) {
    case 1:
    case 2: return pareto_cg_linear(spec, opts);
    case 3: return fixed_point_semilinear(spec, opts);
    case 4: return newton_semilinear(spec, opts);
    case 5: return gradient_descent_bilinear(spec, opts);
    default: return fixed_point_bilinear(spec, opts);
  }
}

}  // namespace pareto
