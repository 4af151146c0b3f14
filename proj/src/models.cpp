#include "pareto/models.hpp"

#include <stdexcept>
#include <string>

namespace pareto {

Reaction sin_reaction() {
  Reaction f;
  f.value = [](double s) { return s * (1.0 + std::sin(s)); };
  f.deriv = [](double s) { return 1.0 + std::sin(s) + s * std::cos(s); };
  f.second_deriv = [](double s) { return 2.0 * std::cos(s) - s * std::sin(s); };
  return f;
}

Reaction zero_reaction() {
  Reaction f;
  f.value = [](double) { return 0.0; };
  f.deriv = [](double) { return 0.0; };
  f.second_deriv = [](double) { return 0.0; };
  return f;
}

void check_reaction_consistency(const Reaction& f, double tol) {
  const double samples[] = {-2.3, -0.7, 0.0, 0.41, 1.9, 3.2};
  const double eps = 1e-6;
  for (double s : samples) {
    const double fd1 = (f.value(s + eps) - f.value(s - eps)) / (2 * eps);
    const double fd2 = (f.deriv(s + eps) - f.deriv(s - eps)) / (2 * eps);
    const double scale1 = std::max(1.0, std::abs(f.deriv(s)));
    const double scale2 = std::max(1.0, std::abs(f.second_deriv(s)));
    if (std::abs(fd1 - f.deriv(s)) > tol * scale1)
      throw std::invalid_argument("reaction: F' disagrees with difference quotient of F");
    if (std::abs(fd2 - f.second_deriv(s)) > tol * scale2)
      throw std::invalid_argument("reaction: F'' disagrees with difference quotient of F'");
  }
}

namespace {

void check_inputs(const Grid& g, const TimeGrid& tg, const Field& u0, const Control& v) {
  if (tg.nt < 1 || !(tg.horizon > 0)) throw std::invalid_argument("forward: bad time grid");
  if (static_cast<int>(u0.size()) != g.num_nodes())
    throw std::invalid_argument("forward: initial data does not match grid");
  if (v.nt() != tg.nt) throw std::invalid_argument("forward: control does not match time grid");
}

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

}  // namespace

Trajectory forward_linear(const Grid& g, const TimeGrid& tg, const Field& u0,
                          const Control& v, const StepperOptions& opts) {
  check_inputs(g, tg, u0, v);
  const double dt = tg.dt();
  const SparseOperator A = identity_plus_scaled(g.laplacian, dt);
  const int cap = opts.cap_factor * g.num_dofs();

  Trajectory traj;
  traj.levels.reserve(tg.nt + 1);
  traj.levels.push_back(unpack(g, pack(g, u0)));  // drops values outside the mask

  std::vector<double> x = pack(g, traj.levels[0]), rhs(g.num_dofs());
  for (int n = 0; n < tg.nt; ++n) {
    rhs = x;
    const Field& vm = v.steps[n];
    for (int d = 0; d < g.num_dofs(); ++d) {
      const int node = g.node_of_dof[d];
      if (g.omega_mask[node]) rhs[d] += dt * vm[node];
    }
    x = solve_spd(A, rhs, opts.linear_tol, cap, &x);
    traj.levels.push_back(unpack(g, x));
  }
  return traj;
}

Trajectory forward_semilinear(const Grid& g, const TimeGrid& tg, const Field& u0,
                              const Control& v, const Reaction& f,
                              const StepperOptions& opts) {
  check_inputs(g, tg, u0, v);
  const double dt = tg.dt();
  const SparseOperator A = identity_plus_scaled(g.laplacian, dt);
  const int cap = opts.cap_factor * g.num_dofs();

  Trajectory traj;
  traj.levels.reserve(tg.nt + 1);
  traj.levels.push_back(unpack(g, pack(g, u0)));

  std::vector<double> x = pack(g, traj.levels[0]), rhs(g.num_dofs());
  for (int n = 0; n < tg.nt; ++n) {
    const Field& vm = v.steps[n];
    for (int d = 0; d < g.num_dofs(); ++d) {
      const int node = g.node_of_dof[d];
      rhs[d] = x[d] - dt * f.value(x[d]);
      if (g.omega_mask[node]) rhs[d] += dt * vm[node];
    }
    x = solve_spd(A, rhs, opts.linear_tol, cap, &x);
    traj.levels.push_back(unpack(g, x));
  }
  return traj;
}

Trajectory forward_bilinear(const Grid& g, const TimeGrid& tg, const Field& u0,
                            const Control& v, const StepperOptions& opts) {
  check_inputs(g, tg, u0, v);
  const double dt = tg.dt();
  const int cap = opts.cap_factor * g.num_dofs();

  Trajectory traj;
  traj.levels.reserve(tg.nt + 1);
  traj.levels.push_back(unpack(g, pack(g, u0)));

  std::vector<double> x = pack(g, traj.levels[0]);
  std::vector<double> vd(g.num_dofs());
  for (int n = 0; n < tg.nt; ++n) {
    const Field& vm = v.steps[n];
    double vmin = 0.0;
    for (int d = 0; d < g.num_dofs(); ++d) {
      const int node = g.node_of_dof[d];
      vd[d] = g.omega_mask[node] ? vm[node] : 0.0;
      vmin = std::min(vmin, vd[d]);
    }
    if (1.0 + dt * vmin <= 1e-12)
      throw SolverFailure("forward_bilinear: step operator indefinite at time level " +
                          std::to_string(n + 1) + " (dt*min(v) <= -1)");
    SparseOperator A = identity_plus_scaled(g.laplacian, dt);
    add_to_diagonal(A, vd, dt);
    x = solve_spd(A, x, opts.linear_tol, cap, &x);
    traj.levels.push_back(unpack(g, x));
  }
  return traj;
}

Trajectory forward_model(const Grid& g, const TimeGrid& tg, const ModelKind& model,
                         const Field& u0, const Control& v, const StepperOptions& opts) {
  if (std::holds_alternative<LinearModel>(model)) return forward_linear(g, tg, u0, v, opts);
  if (const auto* sl = std::get_if<SemilinearModel>(&model))
    return forward_semilinear(g, tg, u0, v, sl->f, opts);
  return forward_bilinear(g, tg, u0, v, opts);
}

}  // namespace pareto
