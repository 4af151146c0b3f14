// The bi-objective cost structure
//   J_i(v) = 1/2 ||u_v(T) - u_i(T)||^2_{O_i} + mu/2 ||v||^2_{omega x (0,T)}
// where u_v solves the chosen model from u0 under v, and u_i is the
// uncontrolled trajectory started from u0i.  The blend used by the solvers is
// J_alpha = alpha J_1 + (1-alpha) J_2.
#pragma once

#include <memory>
#include <utility>

#include "pareto/adjoint.hpp"
#include "pareto/admissible.hpp"
#include "pareto/models.hpp"

namespace pareto {

struct ProblemSpec {
  std::shared_ptr<const Grid> grid;
  TimeGrid time;
  ModelKind model = LinearModel{};
  double mu = 1.0;
  double alpha = 0.5;
  Field u0, u01, u02;
  AdmissibleSet admissible = FullSpace{};
  StepperOptions stepper;

  // Throws std::invalid_argument on: missing grid, alpha outside [0,1],
  // mu <= 0, identical target initial data, or fields that do not match the
  // grid.  (The mu = 0 limit needs constrained-controllability machinery this
  // code does not implement, so it is rejected everywhere.)
  void validate() const;
};

struct CostPair {
  double j1 = 0, j2 = 0;
  double track1 = 0, track2 = 0;  // ||u(T) - u_i(T)||_{O_i}
  double control_norm = 0;
};

double weighted_objective(const CostPair& c, double alpha);

// Terminal states u_1(T), u_2(T) of the uncontrolled flows from u01, u02.
std::pair<Field, Field> uncontrolled_targets(const ProblemSpec& spec,
                                             const StepperOptions* opts = nullptr);

// Requires v admissible (checked, not projected).  Pure: re-runs the forward
// and target solves on every call.
CostPair evaluate_costs(const ProblemSpec& spec, const Control& v);

// Riesz representative of dJ_alpha/dv in the weighted space-time inner
// product:  phi^{m-1}|w + mu v^m         (linear, semilinear)
//           -(phi^{m-1} u^m)|w + mu v^m  (bilinear)
// with phi the blended-misfit adjoint of the state of v (conventions in
// adjoint.hpp).  The linearization point is recomputed from v on every call.
Control gradient(const ProblemSpec& spec, const Control& v);

// ||v - P_U(v - gradient(v))||: the projected-gradient residual, zero exactly
// at the constrained stationary points of J_alpha.
double optimality_residual(const ProblemSpec& spec, const Control& v);

}  // namespace pareto
