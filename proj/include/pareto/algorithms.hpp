// The equilibrium solvers.  All of them minimize the blended objective
// J_alpha = alpha J_1 + (1-alpha) J_2 for one (alpha, mu) cell and report the
// control together with its costs and a per-iteration residual history.
//
// Stopping metrics (residual_history entries):
//   2 (cg-linear)              relative conjugate-gradient residual
//   3, 5, 6 (fixed point / descent)  relative control change
//                              ||v_{k+1} - v_k|| / max(||v_k||, 1e-30)
//   4 (newton)                 space-time norm of the optimality-system
//                              residual, relative to max(1, initial)
#pragma once

#include <optional>

#include "pareto/cg.hpp"
#include "pareto/functionals.hpp"

namespace pareto {

// Terminal identity imposed by the semilinear Newton solver.  The default ties
// the adjoint terminal to the observation regions, phi(T) = w_alpha u(T) -
// g_alpha, matching the stationarity system of J_alpha.  "unweighted"
// reproduces the variant phi(T) = u(T) - (alpha u1(T) + (1-alpha) u2(T)) with
// no indicator weighting; it solves a different (generally inconsistent)
// system and is kept for comparison runs only.
enum class NewtonTerminalForm { weighted, unweighted };

struct SolverOptions {
  double tolerance = 1e-8;  // epsilon_0
  int max_iterations = 500;
  std::optional<double> tau;  // descent step for the bilinear gradient method
  bool newton_damping = false;
  NewtonTerminalForm newton_terminal = NewtonTerminalForm::weighted;
  std::optional<Control> initial_control;  // v0 = 0 when absent
};

struct SolveReport {
  Control control;
  CostPair costs;
  std::vector<double> residual_history;
  int iterations = 0;
  bool converged = false;
  double wall_seconds = 0;
  int algorithm_id = 0;

  double final_residual() const {
    return residual_history.empty() ? 0.0 : residual_history.back();
  }
};

// Conjugate gradients on the control-space operator equation
// (mu I + Lambda_alpha) v = -f_alpha, where Lambda_alpha z is the blended
// adjoint of the zero-initial response to z, and f_alpha the blended adjoint
// of the uncontrolled misfit.  Linear model, unconstrained controls only.
SolveReport pareto_cg_linear(const ProblemSpec& spec, const SolverOptions& opts = {});

// v_{k+1} = P_U(-(1/mu) blended adjoint of the state of v_k); contraction for
// mu large enough.  Semilinear model.
SolveReport fixed_point_semilinear(const ProblemSpec& spec, const SolverOptions& opts = {});

// Simplified Newton on the coupled state/adjoint optimality system, Jacobian
// frozen at the uncontrolled trajectory of alpha u01 + (1-alpha) u02 with zero
// adjoint.  Each step solves the linear forward/backward system by shooting on
// the adjoint terminal field (normal equations + cg_generic).  Semilinear,
// unconstrained controls.
SolveReport newton_semilinear(const ProblemSpec& spec, const SolverOptions& opts = {});

// Projected gradient descent v_{k+1} = P_U((1 - tau mu) v_k + tau phi u |w);
// default tau = 1/(mu + L) with L a 10-step power-iteration estimate of the
// gradient's Lipschitz constant.  Bilinear model, box constraints.
SolveReport gradient_descent_bilinear(const ProblemSpec& spec, const SolverOptions& opts = {});

// v_{k+1} = P_U(u phi / mu |w).  Bilinear model, box constraints.
SolveReport fixed_point_bilinear(const ProblemSpec& spec, const SolverOptions& opts = {});

// Dispatch by the CSV/config algorithm id; 1 is accepted as an alias of 2.
SolveReport solve_with_algorithm(int algorithm_id, const ProblemSpec& spec,
                                 const SolverOptions& opts = {});

// True when the algorithm id applies to the model kind (1,2 -> linear;
// 3,4 -> semilinear; 5,6 -> bilinear).
bool algorithm_matches_model(int algorithm_id, const ModelKind& model);

}  // namespace pareto
