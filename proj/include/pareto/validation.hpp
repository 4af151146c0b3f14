// Brute-force verifiers: dense assembly of the linear control-to-state map,
// dense normal-equations minimization, finite-difference gradients, and a
// suite of named self-checks.  Everything here trades speed for independence
// from the iterative code paths it verifies, so keep instances tiny.
#pragma once

#include <string>
#include <vector>

#include "pareto/algorithms.hpp"

namespace pareto::validation {

// u(T) (packed on interior dofs) as an affine function of the flattened
// control: uT = M x + b.  Flattening order: time level m = 1..nt outer,
// omega nodes in ascending node index inner.
struct DenseAffineMap {
  int rows = 0;  // interior dofs
  int cols = 0;  // omega nodes * nt
  std::vector<double> m;            // row-major rows x cols
  std::vector<double> b;            // uncontrolled terminal state, packed
  std::vector<int> omega_nodes;     // node index per inner flattening slot
};

std::vector<double> flatten_control(const Grid& g, const TimeGrid& tg, const Control& v);
Control unflatten_control(const Grid& g, const TimeGrid& tg, const std::vector<double>& x);

// Columns by unit-impulse forward solves, offset by the v = 0 solve.  Linear
// model only; throws when the control dimension exceeds 2000.
DenseAffineMap assemble_dense(const ProblemSpec& spec);

// M x + b.
std::vector<double> dense_apply(const DenseAffineMap& map, const std::vector<double>& x);

// Global minimizer of J_alpha over unconstrained controls: solves the dense
// normal equations (M^T D M + mu W_c) x = M^T D-weighted target residual by
// Cholesky factorization.  Strictly convex for mu > 0.
Control dense_minimize(const ProblemSpec& spec, const DenseAffineMap& map);

// Central differences of J_alpha.  Results are divided by the space-time
// quadrature weight of each coordinate, so they approximate the same inner
// product representative gradient() returns.  Per-coordinate mode guards the
// control dimension at 5000; the directional mode has no size limit and
// approximates the pairing control_inner(gradient, dir).
Control fd_gradient(const ProblemSpec& spec, const Control& v, double eps = 1e-5);
double fd_directional(const ProblemSpec& spec, const Control& v, const Control& dir,
                      double eps = 1e-5);

// --- canned small problems (shared by the self-checks and the test suite) ---

// Interval (-1,1) with the control region on the left and two overlapping
// observation windows on the right; initial data is a smooth bump, targets
// are bumps of opposite sign.  Bilinear specs get scaled-down initial data
// and a Box(20) admissible set unless one is supplied.
ProblemSpec interval_problem(const ModelKind& model, int nodes, int nt, double mu,
                             double alpha);
ProblemSpec interval_problem(const ModelKind& model, int nodes, int nt, double mu,
                             double alpha, AdmissibleSet admissible);

// Square (-3,3)^2, control box on the left half, overlapping observation
// boxes on the right; peak initial data 3 - |x|, targets of opposite sign.
ProblemSpec rectangle_problem(const ModelKind& model, int nx, int ny, int nt, double mu,
                              double alpha);
ProblemSpec rectangle_problem(const ModelKind& model, int nx, int ny, int nt, double mu,
                              double alpha, AdmissibleSet admissible);

// --- named self-checks ------------------------------------------------------

struct CheckResult {
  std::string name;
  bool passed = false;
  double error = 0;      // worst observed error for the check's metric
  double threshold = 0;  // pass when error <= threshold
  std::string detail;
};

struct SuiteReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

// Adjoint gradient vs central differences along 20 random directions,
// interval grid with 32 nodes and 16 time steps.  corrupt_sign flips the
// computed gradient before comparing, to prove the harness can fail.
CheckResult check_gradient_linear(bool corrupt_sign = false);
CheckResult check_gradient_semilinear(bool corrupt_sign = false);
CheckResult check_gradient_bilinear(bool corrupt_sign = false);

// Conjugate-gradient solver vs the dense minimizer, interval grid with
// 8 nodes and 8 steps, mu in {1,5,10} x alpha in {0.1,0.5,0.9}.
CheckResult check_dense_oracle();

// Zero-reaction degeneration: the linear CG, the semilinear fixed point and
// the semilinear Newton solver agree pairwise in control norm.
CheckResult check_cross_agreement_linear();

// Bilinear gradient descent vs bilinear fixed point on one spec.
CheckResult check_cross_agreement_bilinear();

// Idempotence, nonexpansiveness, the variational inequality and the
// contains/fixed-point equivalence on 100 random control pairs.
CheckResult check_projection_properties();

// All of the above, in order.  corrupt_gradient_sign is forwarded to the
// three gradient checks.
SuiteReport run_suite(bool corrupt_gradient_sign = false);

}  // namespace pareto::validation
