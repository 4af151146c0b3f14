#include "pareto/adjoint.hpp"

#include <stdexcept>
#include <string>

namespace pareto {
namespace {

std::vector<double> pack(const Grid& g, const Field& f) {
  std::vector<double> x(g.num_dofs());
  for (int d = 0; d < g.num_dofs(); ++d) x[d] = f[g.node_of_dof[d]];
  return x;
}

Field unpack(const Grid& g, const std::vector<double>& x) {
  Field f(g.num_nodes(), 0.0);
  for (int d = 0; d < g.num_dofs(); ++d) f[g.node_of_dof[d]] = x[d];
  return f;
}

void check_terminal(const Grid& g, const TimeGrid& tg, const Field& terminal) {
  if (tg.nt < 1 || !(tg.horizon > 0)) throw std::invalid_argument("adjoint: bad time grid");
  if (static_cast<int>(terminal.size()) != g.num_nodes())
    throw std::invalid_argument("adjoint: terminal field does not match grid");
}

}  // namespace

TerminalWeight make_terminal_weight(const Grid& grid, double alpha, const Field& u1T,
                                    const Field& u2T) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("make_terminal_weight: alpha outside [0,1]");
  if (static_cast<int>(u1T.size()) != grid.num_nodes() ||
      static_cast<int>(u2T.size()) != grid.num_nodes())
    throw std::invalid_argument("make_terminal_weight: target does not match grid");
  TerminalWeight tw;
  tw.alpha = alpha;
  tw.w.assign(grid.num_nodes(), 0.0);
  tw.g.assign(grid.num_nodes(), 0.0);
  for (int i = 0; i < grid.num_nodes(); ++i) {
    if (grid.o1_mask[i]) {
      tw.w[i] += alpha;
      tw.g[i] += alpha * u1T[i];
    }
    if (grid.o2_mask[i]) {
      tw.w[i] += 1.0 - alpha;
      tw.g[i] += (1.0 - alpha) * u2T[i];
    }
  }
  return tw;
}

Field terminal_misfit(const Grid& grid, const TerminalWeight& tw, const Field& uT) {
  if (static_cast<int>(uT.size()) != grid.num_nodes())
    throw std::invalid_argument("terminal_misfit: field does not match grid");
  Field m(grid.num_nodes(), 0.0);
  for (int i = 0; i < grid.num_nodes(); ++i)
    if (grid.domain_mask[i]) m[i] = tw.w[i] * uT[i] - tw.g[i];
  return m;
}

Trajectory adjoint_linear(const Grid& g, const TimeGrid& tg, const Field& terminal,
                          const StepperOptions& opts) {
  check_terminal(g, tg, terminal);
  const double dt = tg.dt();
  const SparseOperator A = identity_plus_scaled(g.laplacian, dt);
  const int cap = opts.cap_factor * g.num_dofs();

  Trajectory traj;
  traj.levels.assign(tg.nt + 1, Field());
  traj.levels[tg.nt] = unpack(g, pack(g, terminal));

  std::vector<double> x = pack(g, traj.levels[tg.nt]);
  for (int n = tg.nt - 1; n >= 0; --n) {
    x = solve_spd(A, x, opts.linear_tol, cap, &x);
    traj.levels[n] = unpack(g, x);
  }
  return traj;
}

Trajectory adjoint_semilinear(const Grid& g, const TimeGrid& tg, const Trajectory& state,
                              const Field& terminal, const Reaction& f,
                              const StepperOptions& opts) {
  check_terminal(g, tg, terminal);
  if (state.nt() != tg.nt) throw std::invalid_argument("adjoint_semilinear: state does not match time grid");
  const double dt = tg.dt();
  const SparseOperator A = identity_plus_scaled(g.laplacian, dt);
  const int cap = opts.cap_factor * g.num_dofs();

  Trajectory traj;
  traj.levels.assign(tg.nt + 1, Field());
  traj.levels[tg.nt] = unpack(g, pack(g, terminal));

  // p carries the full transposed sensitivity; the stored level n is the
  // half-step field S p^{n+1} (see header).  For F' = 0 the reaction factor
  // is exactly 1 and the stored levels coincide with adjoint_linear's.
  std::vector<double> p = pack(g, traj.levels[tg.nt]);
  std::vector<double> half(g.num_dofs());
  for (int n = tg.nt - 1; n >= 0; --n) {
    half = solve_spd(A, p, opts.linear_tol, cap, &p);
    traj.levels[n] = unpack(g, half);
    const std::vector<double> ustate = pack(g, state.levels[n]);
    for (int d = 0; d < g.num_dofs(); ++d)
      p[d] = (1.0 - dt * f.clamped_deriv(ustate[d])) * half[d];
  }
  return traj;
}

Trajectory adjoint_bilinear(const Grid& g, const TimeGrid& tg, const Control& v,
                            const Field& terminal, const StepperOptions& opts) {
  check_terminal(g, tg, terminal);
  if (v.nt() != tg.nt) throw std::invalid_argument("adjoint_bilinear: control does not match time grid");
  const double dt = tg.dt();
  const int cap = opts.cap_factor * g.num_dofs();

  Trajectory traj;
  traj.levels.assign(tg.nt + 1, Field());
  traj.levels[tg.nt] = unpack(g, pack(g, terminal));

  std::vector<double> x = pack(g, traj.levels[tg.nt]);
  std::vector<double> vd(g.num_dofs());
  for (int n = tg.nt - 1; n >= 0; --n) {
    const Field& vm = v.steps[n];  // the step from level n to n+1 used v^{n+1}
    double vmin = 0.0;
    for (int d = 0; d < g.num_dofs(); ++d) {
      const int node = g.node_of_dof[d];
      vd[d] = g.omega_mask[node] ? vm[node] : 0.0;
      vmin = std::min(vmin, vd[d]);
    }
    if (1.0 + dt * vmin <= 1e-12)
      throw SolverFailure("adjoint_bilinear: step operator indefinite at time level " +
                          std::to_string(n + 1) + " (dt*min(v) <= -1)");
    SparseOperator A = identity_plus_scaled(g.laplacian, dt);
    add_to_diagonal(A, vd, dt);
    x = solve_spd(A, x, opts.linear_tol, cap, &x);
    traj.levels[n] = unpack(g, x);
  }
  return traj;
}

}  // namespace pareto
