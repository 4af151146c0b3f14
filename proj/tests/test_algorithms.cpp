#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pareto/algorithms.hpp"
#include "pareto/rng.hpp"
#include "pareto/validation.hpp"

using namespace pareto;

namespace {

// Holds for every converged report, whatever the algorithm.
void check_report_contract(const ProblemSpec& spec, const SolveReport& r, double eps0) {
  CHECK(static_cast<int>(r.residual_history.size()) == r.iterations);
  if (r.converged && !r.residual_history.empty()) CHECK(r.final_residual() <= eps0);
  if (r.converged) CHECK(optimality_residual(spec, r.control) <= 10 * eps0);
  CHECK(r.wall_seconds >= 0.0);
  CHECK(contains(spec.admissible, *spec.grid, spec.time, r.control));
}

ProblemSpec tight(ProblemSpec spec) {
  spec.stepper.linear_tol = 1e-13;
  return spec;
}

double control_distance(const ProblemSpec& spec, const Control& a, const Control& b) {
  Control d = a;
  axpy(-1.0, b, d);
  return control_norm(*spec.grid, spec.time, d);
}

}  // namespace

TEST_CASE("cg_generic: identity converges in one step, exact seed in zero") {
  using Vec = std::vector<double>;
  auto ident = [](const Vec& x) { return x; };
  auto dot = [](const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  Vec b = {1.0, -2.0, 3.0, 0.5};

  auto r = cg_generic(ident, b, Vec(4, 0.0), dot, CgOptions{1e-12, 50});
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  for (int i = 0; i < 4; ++i) CHECK(r.x[i] == doctest::Approx(b[i]).epsilon(1e-14));

  auto seeded = cg_generic(ident, b, b, dot, CgOptions{1e-12, 50});
  CHECK(seeded.converged);
  CHECK(seeded.iterations == 0);
}

TEST_CASE("cg_generic: error stays inside the condition-number envelope") {
  // Diagonal spectrum 1..100 (condition number 100).  The A-norm error obeys
  // ||e_k||_A <= 2 theta^k ||e_0||_A with theta = (sqrt(100)-1)/(sqrt(100)+1);
  // we allow one extra order of magnitude and track every iterate.
  const int n = 100;
  using Vec = std::vector<double>;
  Vec lambda(n);
  for (int i = 0; i < n; ++i) lambda[i] = 1.0 + i * 99.0 / (n - 1);
  auto apply = [&](const Vec& x) {
    Vec y(n);
    for (int i = 0; i < n; ++i) y[i] = lambda[i] * x[i];
    return y;
  };
  auto dot = [](const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };

  Rng rng(2024);
  Vec x_true(n);
  for (double& v : x_true) v = rng.symmetric() + 2.0;  // all modes populated
  const Vec b = apply(x_true);

  auto a_err = [&](const Vec& x) {
    double s = 0;
    for (int i = 0; i < n; ++i) s += lambda[i] * (x[i] - x_true[i]) * (x[i] - x_true[i]);
    return std::sqrt(s);
  };
  const double e0 = a_err(Vec(n, 0.0));
  const double theta = (std::sqrt(100.0) - 1.0) / (std::sqrt(100.0) + 1.0);

  bool envelope_ok = true;
  std::function<void(int, const Vec&)> observer = [&](int k, const Vec& x) {
    const double ek = a_err(x);
    if (ek > 1e-12 * e0 && ek > 10.0 * std::pow(theta, k) * e0) envelope_ok = false;
  };
  auto r = cg_generic(apply, b, Vec(n, 0.0), dot, CgOptions{1e-13, 400}, observer);
  CHECK(r.converged);
  CHECK(envelope_ok);

  // Residual history is one entry per iteration and hits the tolerance.
  CHECK(static_cast<int>(r.residual_history.size()) == r.iterations);
  CHECK(r.residual_history.back() <= 1e-13);
}

TEST_CASE("cg_generic: indefinite operators and iteration caps are reported") {
  using Vec = std::vector<double>;
  auto flip = [](const Vec& x) {
    Vec y = x;
    y[0] = -y[0];
    return y;
  };
  auto dot = [](const Vec& a, const Vec& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  CHECK_THROWS_AS(cg_generic(flip, Vec{1.0, 1.0}, Vec(2, 0.0), dot, CgOptions{1e-12, 10}),
                  SolverFailure);

  // Cap of 1 on a 4-dimensional spread spectrum: not converged, history kept.
  Vec lam = {1.0, 10.0, 100.0, 1000.0};
  auto apply = [&](const Vec& x) {
    Vec y(4);
    for (int i = 0; i < 4; ++i) y[i] = lam[i] * x[i];
    return y;
  };
  auto r = cg_generic(apply, Vec{1, 1, 1, 1}, Vec(4, 0.0), dot, CgOptions{1e-14, 1});
  CHECK(!r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.residual_history.size() == 1);
}

TEST_CASE("linear cg solver: dense agreement and report contract") {
  const double eps0 = 1e-10;
  SolverOptions opts;
  opts.tolerance = eps0;
  ProblemSpec spec = tight(validation::interval_problem(LinearModel{}, 13, 6, 5.0, 0.35));

  const SolveReport r = pareto_cg_linear(spec, opts);
  CHECK(r.converged);
  CHECK(r.algorithm_id == 2);
  check_report_contract(spec, r, eps0);

  const auto map = validation::assemble_dense(spec);
  const Control vstar = validation::dense_minimize(spec, map);
  CHECK(control_distance(spec, r.control, vstar) /
            std::max(control_norm(*spec.grid, spec.time, vstar), 1e-30) <
        1e-8);

  // Costs reported are the costs of the returned control.
  const CostPair again = evaluate_costs(spec, r.control);
  CHECK(r.costs.j1 == doctest::Approx(again.j1).epsilon(1e-12));
  CHECK(r.costs.j2 == doctest::Approx(again.j2).epsilon(1e-12));

  // CG residual history is monotone (well-conditioned operator).
  for (std::size_t k = 1; k < r.residual_history.size(); ++k)
    CHECK(r.residual_history[k] <= r.residual_history[k - 1] + 1e-12);
}

TEST_CASE("linear cg solver: no conflict means zero control at iteration zero") {
  // At the alpha = 1 endpoint only the first objective counts; starting from
  // the first target's own initial data leaves nothing to steer.
  ProblemSpec spec = tight(validation::interval_problem(LinearModel{}, 13, 6, 5.0, 1.0));
  spec.u01 = spec.u0;
  const SolveReport r = pareto_cg_linear(spec, SolverOptions{});
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(control_norm(*spec.grid, spec.time, r.control) == 0.0);
}

TEST_CASE("linear cg solver rejects wrong models and constrained sets") {
  ProblemSpec spec = validation::interval_problem(SemilinearModel{sin_reaction()}, 13, 6, 5.0, 0.5);
  CHECK_THROWS_AS(pareto_cg_linear(spec, SolverOptions{}), std::invalid_argument);
  ProblemSpec ball = validation::interval_problem(LinearModel{}, 13, 6, 5.0, 0.5, L2Ball{1.0});
  CHECK_THROWS_AS(pareto_cg_linear(ball, SolverOptions{}), std::invalid_argument);
}

TEST_CASE("semilinear fixed point: geometric decay and agreement with newton") {
  const double eps0 = 1e-10;
  SolverOptions opts;
  opts.tolerance = eps0;
  ProblemSpec spec =
      tight(validation::interval_problem(SemilinearModel{sin_reaction()}, 25, 10, 10.0, 0.4));

  const SolveReport fp = fixed_point_semilinear(spec, opts);
  CHECK(fp.converged);
  CHECK(fp.algorithm_id == 3);
  check_report_contract(spec, fp, eps0);

  // Contraction: successive residual ratios below one from iteration 3 on.
  for (std::size_t k = 3; k < fp.residual_history.size(); ++k)
    CHECK(fp.residual_history[k] < fp.residual_history[k - 1]);

  const SolveReport nw = newton_semilinear(spec, opts);
  CHECK(nw.converged);
  CHECK(nw.algorithm_id == 4);
  check_report_contract(spec, nw, eps0);
  CHECK(control_distance(spec, fp.control, nw.control) /
            std::max(control_norm(*spec.grid, spec.time, fp.control), 1e-30) <
        1e-6);
}

TEST_CASE("semilinear fixed point: ball constraint is honored at every exit") {
  SolverOptions opts;
  opts.tolerance = 1e-9;
  ProblemSpec spec = tight(validation::interval_problem(SemilinearModel{sin_reaction()}, 25, 10,
                                                        0.05, 0.4, L2Ball{0.01}));
  const SolveReport r = fixed_point_semilinear(spec, opts);
  CHECK(contains(spec.admissible, *spec.grid, spec.time, r.control));
  if (r.converged) {
    CHECK(control_norm(*spec.grid, spec.time, r.control) <= 0.01 * (1 + 1e-12));
    CHECK(optimality_residual(spec, r.control) <= 10 * opts.tolerance);
  }
}

TEST_CASE("semilinear fixed point: zero misfit converges to zero in one pass") {
  ProblemSpec spec = tight(validation::interval_problem(SemilinearModel{sin_reaction()}, 17, 6,
                                                        5.0, 1.0));
  spec.u01 = spec.u0;  // alpha = 1: only the first objective counts
  const SolveReport r = fixed_point_semilinear(spec, SolverOptions{});
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(control_norm(*spec.grid, spec.time, r.control) == 0.0);
}

TEST_CASE("semilinear newton: affine problem closes in one outer iteration") {
  const double eps0 = 1e-9;
  SolverOptions opts;
  opts.tolerance = eps0;
  ProblemSpec spec =
      tight(validation::interval_problem(SemilinearModel{zero_reaction()}, 25, 10, 5.0, 0.55));

  const SolveReport nw = newton_semilinear(spec, opts);
  CHECK(nw.converged);
  CHECK(nw.iterations <= 2);  // one corrective step plus the residual re-check

  ProblemSpec lin = spec;
  lin.model = LinearModel{};
  const SolveReport cg = pareto_cg_linear(lin, opts);
  CHECK(control_distance(spec, nw.control, cg.control) /
            std::max(control_norm(*spec.grid, spec.time, cg.control), 1e-30) <
        1e-7);
}

TEST_CASE("semilinear newton: the unweighted terminal variant solves a different system") {
  SolverOptions opts;
  opts.tolerance = 1e-10;
  ProblemSpec spec =
      tight(validation::interval_problem(SemilinearModel{sin_reaction()}, 25, 10, 5.0, 0.3));

  const SolveReport weighted = newton_semilinear(spec, opts);
  SolverOptions alt = opts;
  alt.newton_terminal = NewtonTerminalForm::unweighted;
  const SolveReport plain = newton_semilinear(spec, alt);

  CHECK(weighted.converged);
  CHECK(plain.converged);
  // Same tolerance, genuinely different stationary systems.
  CHECK(control_distance(spec, weighted.control, plain.control) /
            std::max(control_norm(*spec.grid, spec.time, weighted.control), 1e-30) >
        1e-4);
  // Only the weighted form satisfies the blended-objective optimality system.
  CHECK(optimality_residual(spec, weighted.control) <= 10 * opts.tolerance);
  CHECK(optimality_residual(spec, plain.control) > 1e-6);
}

TEST_CASE("semilinear newton: breakdown far from the contraction regime is reported") {
  SolverOptions opts;
  opts.tolerance = 1e-12;
  opts.max_iterations = 25;
  ProblemSpec spec =
      tight(validation::interval_problem(SemilinearModel{sin_reaction()}, 25, 10, 1e-4, 0.5));
  for (int i = 0; i < spec.grid->num_nodes(); ++i) spec.u0[i] *= 20.0;  // far from both targets

  bool flagged = false;
  bool stopped_early = false;
  try {
    const SolveReport r = newton_semilinear(spec, opts);
    flagged = !r.converged;
    stopped_early = r.iterations < opts.max_iterations;
  } catch (const SolverFailure&) {
    flagged = true;  // inner terminal-space solve may give out first
    stopped_early = true;
  }
  CHECK(flagged);
  CHECK(stopped_early);  // the growth detector cuts the run short, not the cap
}

TEST_CASE("bilinear descent: zero state, explicit step, and step validation") {
  ProblemSpec spec = tight(validation::interval_problem(BilinearModel{}, 25, 16, 10.0, 0.5));
  spec.u0 = zero_field(*spec.grid);  // nothing to steer: optimum is v = 0
  const SolveReport r = gradient_descent_bilinear(spec, SolverOptions{});
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(control_norm(*spec.grid, spec.time, r.control) == 0.0);

  SolverOptions bad;
  bad.tau = -0.5;
  CHECK_THROWS_AS(gradient_descent_bilinear(tight(validation::interval_problem(
                                                BilinearModel{}, 25, 16, 10.0, 0.5)),
                                            bad),
                  std::invalid_argument);

  ProblemSpec unbounded =
      tight(validation::interval_problem(BilinearModel{}, 25, 16, 10.0, 0.5, FullSpace{}));
  CHECK_THROWS_AS(gradient_descent_bilinear(unbounded, SolverOptions{}), std::invalid_argument);
}

TEST_CASE("bilinear: descent and fixed point agree and satisfy the contract") {
  const double eps0 = 1e-10;
  SolverOptions opts;
  opts.tolerance = eps0;
  ProblemSpec spec = tight(validation::interval_problem(BilinearModel{}, 25, 16, 5.0, 0.35));

  const SolveReport gd = gradient_descent_bilinear(spec, opts);
  CHECK(gd.converged);
  CHECK(gd.algorithm_id == 5);
  check_report_contract(spec, gd, eps0);

  const SolveReport fp = fixed_point_bilinear(spec, opts);
  CHECK(fp.converged);
  CHECK(fp.algorithm_id == 6);
  check_report_contract(spec, fp, eps0);

  CHECK(control_distance(spec, gd.control, fp.control) /
            std::max(control_norm(*spec.grid, spec.time, gd.control), 1e-30) <
        1e-6);

  // Explicit tau close to the automatic one also converges to the same point.
  SolverOptions fixed_tau = opts;
  fixed_tau.tau = 0.1 / spec.mu;
  const SolveReport gd2 = gradient_descent_bilinear(spec, fixed_tau);
  CHECK(gd2.converged);
  CHECK(control_distance(spec, gd2.control, gd.control) /
            std::max(control_norm(*spec.grid, spec.time, gd.control), 1e-30) <
        1e-6);
}

TEST_CASE("mu sweep: control norm shrinks as the penalty grows") {
  SolverOptions opts;
  opts.tolerance = 1e-10;
  double previous = -1.0;
  for (double mu : {1.0, 5.0, 10.0}) {
    ProblemSpec spec = tight(validation::interval_problem(BilinearModel{}, 25, 16, mu, 0.5));
    const SolveReport r = fixed_point_bilinear(spec, opts);
    CHECK(r.converged);
    const double n = control_norm(*spec.grid, spec.time, r.control);
    if (previous >= 0) CHECK(n <= previous * (1 + 1e-10));
    previous = n;
  }
}

TEST_CASE("warm starts are validated and respected") {
  SolverOptions opts;
  opts.tolerance = 1e-9;
  ProblemSpec spec =
      tight(validation::interval_problem(SemilinearModel{sin_reaction()}, 25, 10, 5.0, 0.4));
  const SolveReport cold = fixed_point_semilinear(spec, opts);
  REQUIRE(cold.converged);

  SolverOptions warm = opts;
  warm.initial_control = cold.control;
  const SolveReport hot = fixed_point_semilinear(spec, warm);
  CHECK(hot.converged);
  CHECK(hot.iterations <= 2);

  SolverOptions wrong = opts;
  wrong.initial_control = zero_control(*spec.grid, TimeGrid{spec.time.horizon, spec.time.nt + 1});
  CHECK_THROWS_AS(fixed_point_semilinear(spec, wrong), std::invalid_argument);
}

TEST_CASE("dispatch: ids, alias, and model pairing") {
  CHECK(algorithm_matches_model(1, LinearModel{}));
  CHECK(algorithm_matches_model(2, LinearModel{}));
  CHECK(!algorithm_matches_model(3, LinearModel{}));
  CHECK(algorithm_matches_model(3, SemilinearModel{sin_reaction()}));
  CHECK(algorithm_matches_model(4, SemilinearModel{sin_reaction()}));
  CHECK(!algorithm_matches_model(4, BilinearModel{}));
  CHECK(algorithm_matches_model(5, BilinearModel{}));
  CHECK(algorithm_matches_model(6, BilinearModel{}));
  CHECK(!algorithm_matches_model(6, LinearModel{}));

  SolverOptions opts;
  opts.tolerance = 1e-10;
  ProblemSpec spec = tight(validation::interval_problem(LinearModel{}, 13, 6, 5.0, 0.5));
  const SolveReport one = solve_with_algorithm(1, spec, opts);
  const SolveReport two = solve_with_algorithm(2, spec, opts);
  CHECK(one.algorithm_id == 2);  // alias resolves to the same implementation
  CHECK(control_distance(spec, one.control, two.control) == 0.0);

  CHECK_THROWS_AS(solve_with_algorithm(7, spec, opts), std::invalid_argument);
  CHECK_THROWS_AS(solve_with_algorithm(5, spec, opts), std::invalid_argument);
}
