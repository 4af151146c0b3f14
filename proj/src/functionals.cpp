#include "pareto/functionals.hpp"

#include <cmath>
#include <stdexcept>

namespace pareto {

void ProblemSpec::validate() const {
  if (!grid) throw std::invalid_argument("problem: no grid");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("problem: alpha outside [0,1]");
  if (!(mu > 0.0))
    throw std::invalid_argument("problem: mu must be positive (the mu = 0 regime is unsupported)");
  if (time.nt < 1 || !(time.horizon > 0)) throw std::invalid_argument("problem: bad time grid");
  const int nn = grid->num_nodes();
  if (static_cast<int>(u0.size()) != nn || static_cast<int>(u01.size()) != nn ||
      static_cast<int>(u02.size()) != nn)
    throw std::invalid_argument("problem: initial data does not match grid");
  double diff = 0;
  for (int i = 0; i < nn; ++i)
    if (grid->domain_mask[i]) diff = std::max(diff, std::abs(u01[i] - u02[i]));
  if (diff == 0.0) throw std::invalid_argument("problem: u01 and u02 coincide, objectives are identical");
  if (std::holds_alternative<SemilinearModel>(model))
    check_reaction_consistency(std::get<SemilinearModel>(model).f);
}

double weighted_objective(const CostPair& c, double alpha) {
  return alpha * c.j1 + (1.0 - alpha) * c.j2;
}

std::pair<Field, Field> uncontrolled_targets(const ProblemSpec& spec, const StepperOptions* opts) {
  const StepperOptions& so = opts ? *opts : spec.stepper;
  const Control zero = zero_control(*spec.grid, spec.time);
  Trajectory t1 = forward_model(*spec.grid, spec.time, spec.model, spec.u01, zero, so);
  Trajectory t2 = forward_model(*spec.grid, spec.time, spec.model, spec.u02, zero, so);
  return {t1.final_state(), t2.final_state()};
}

CostPair evaluate_costs(const ProblemSpec& spec, const Control& v) {
  spec.validate();
  if (!contains(spec.admissible, *spec.grid, spec.time, v))
    throw std::invalid_argument("evaluate_costs: control is not admissible");
  const Grid& g = *spec.grid;
  auto [u1T, u2T] = uncontrolled_targets(spec);
  Trajectory u = forward_model(g, spec.time, spec.model, spec.u0, v, spec.stepper);

  Field d1(g.num_nodes(), 0.0), d2(g.num_nodes(), 0.0);
  const Field& uT = u.final_state();
  for (int i = 0; i < g.num_nodes(); ++i) {
    d1[i] = uT[i] - u1T[i];
    d2[i] = uT[i] - u2T[i];
  }
  CostPair c;
  c.track1 = norm(g, d1, Region::o1);
  c.track2 = norm(g, d2, Region::o2);
  c.control_norm = control_norm(g, spec.time, v);
  const double pen = 0.5 * spec.mu * c.control_norm * c.control_norm;
  c.j1 = 0.5 * c.track1 * c.track1 + pen;
  c.j2 = 0.5 * c.track2 * c.track2 + pen;
  return c;
}

Control gradient(const ProblemSpec& spec, const Control& v) {
  spec.validate();
  const Grid& g = *spec.grid;
  auto [u1T, u2T] = uncontrolled_targets(spec);
  Trajectory u = forward_model(g, spec.time, spec.model, spec.u0, v, spec.stepper);
  const TerminalWeight tw = make_terminal_weight(g, spec.alpha, u1T, u2T);
  const Field terminal = terminal_misfit(g, tw, u.final_state());

  Trajectory phi;
  if (std::holds_alternative<LinearModel>(spec.model)) {
    phi = adjoint_linear(g, spec.time, terminal, spec.stepper);
  } else if (const auto* sl = std::get_if<SemilinearModel>(&spec.model)) {
    phi = adjoint_semilinear(g, spec.time, u, terminal, sl->f, spec.stepper);
  } else {
    phi = adjoint_bilinear(g, spec.time, v, terminal, spec.stepper);
  }

  const bool bilinear = std::holds_alternative<BilinearModel>(spec.model);
  Control grad = zero_control(g, spec.time);
  for (int m = 1; m <= spec.time.nt; ++m) {
    Field& gm = grad.steps[m - 1];
    const Field& ph = phi.levels[m - 1];
    for (int i = 0; i < g.num_nodes(); ++i) {
      if (!g.omega_mask[i]) continue;
      const double track = bilinear ? -ph[i] * u.levels[m][i] : ph[i];
      gm[i] = track + spec.mu * v.steps[m - 1][i];
    }
  }
  return grad;
}

double optimality_residual(const ProblemSpec& spec, const Control& v) {
  const Grid& g = *spec.grid;
  Control grad = gradient(spec, v);
  Control trial = v;
  for (int m = 0; m < spec.time.nt; ++m)
    for (int i = 0; i < g.num_nodes(); ++i)
      if (g.omega_mask[i]) trial.steps[m][i] -= grad.steps[m][i];
  trial = project(spec.admissible, g, spec.time, std::move(trial));
  for (int m = 0; m < spec.time.nt; ++m)
    for (int i = 0; i < g.num_nodes(); ++i)
      if (g.omega_mask[i]) trial.steps[m][i] = v.steps[m][i] - trial.steps[m][i];
  return control_norm(g, spec.time, trial);
}

}  // namespace pareto
