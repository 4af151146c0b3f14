#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pareto/adjoint.hpp"
#include "pareto/rng.hpp"

using namespace pareto;

namespace {

Grid interval_grid(int nodes) {
  GeometrySpec geom;
  geom.dim = 1;
  geom.nodes = {nodes, 1, 1};
  geom.lo = {-1, 0, 0};
  geom.hi = {1, 0, 0};
  geom.domain = BoxShape{{-1, 0, 0}, {1, 0, 0}};
  geom.omega = BoxShape{{-1, 0, 0}, {-0.2, 0, 0}};
  geom.o1 = BoxShape{{0, 0, 0}, {0.8, 0, 0}};
  geom.o2 = BoxShape{{0.3, 0, 0}, {1, 0, 0}};
  return build_grid(geom);
}

StepperOptions tight() {
  StepperOptions o;
  o.linear_tol = 1e-13;
  return o;
}

Field random_domain_field(const Grid& g, Rng& rng, double amp = 1.0) {
  Field f(g.num_nodes(), 0.0);
  for (int i = 0; i < g.num_nodes(); ++i)
    if (g.domain_mask[i]) f[i] = amp * rng.symmetric();
  return f;
}

Control random_control(const Grid& g, const TimeGrid& tg, Rng& rng, double amp = 1.0) {
  Control v = zero_control(g, tg);
  for (auto& s : v.steps)
    for (int i = 0; i < g.num_nodes(); ++i)
      if (g.omega_mask[i]) s[i] = amp * rng.symmetric();
  return v;
}

// The control whose level-m slab holds the adjoint field phi^{m-1} on omega:
// the pairing partner of v^m under the staggered convention.
Control paired_adjoint(const Grid& g, const TimeGrid& tg, const Trajectory& phi) {
  Control out = zero_control(g, tg);
  for (int m = 1; m <= tg.nt; ++m)
    for (int i = 0; i < g.num_nodes(); ++i)
      if (g.omega_mask[i]) out.steps[m - 1][i] = phi.levels[m - 1][i];
  return out;
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
}

std::vector<double> pack(const Grid& g, const Field& f) {
  std::vector<double> out(g.num_dofs());
  for (int d = 0; d < g.num_dofs(); ++d) out[d] = f[g.node_of_dof[d]];
  return out;
}

double weighted_terminal_dot(const Grid& g, const std::vector<double>& packed, const Field& q) {
  double s = 0;
  for (int d = 0; d < g.num_dofs(); ++d) {
    const int node = g.node_of_dof[d];
    s += g.weight[node] * packed[d] * q[node];
  }
  return s;
}

}  // namespace

TEST_CASE("terminal weight blend and misfit") {
  const Grid g = interval_grid(21);
  Rng rng(5);
  const Field u1T = random_domain_field(g, rng);
  const Field u2T = random_domain_field(g, rng);
  const double alpha = 0.3;
  const TerminalWeight tw = make_terminal_weight(g, alpha, u1T, u2T);

  for (int i = 0; i < g.num_nodes(); ++i) {
    double w = 0, target = 0;
    if (g.o1_mask[i]) w += alpha, target += alpha * u1T[i];
    if (g.o2_mask[i]) w += 1 - alpha, target += (1 - alpha) * u2T[i];
    CHECK(tw.w[i] == doctest::Approx(w).epsilon(1e-15));
    CHECK(tw.g[i] == doctest::Approx(target).epsilon(1e-15));
  }
  // Overlap nodes carry the full unit weight.
  bool saw_overlap = false;
  for (int i = 0; i < g.num_nodes(); ++i)
    if (g.o1_mask[i] && g.o2_mask[i]) {
      saw_overlap = true;
      CHECK(tw.w[i] == doctest::Approx(1.0));
    }
  CHECK(saw_overlap);

  const Field uT = random_domain_field(g, rng);
  const Field mis = terminal_misfit(g, tw, uT);
  for (int i = 0; i < g.num_nodes(); ++i)
    if (g.domain_mask[i])
      CHECK(mis[i] == doctest::Approx(tw.w[i] * uT[i] - tw.g[i]).epsilon(1e-15));

  CHECK_THROWS_AS(make_terminal_weight(g, 1.5, u1T, u2T), std::invalid_argument);
}

TEST_CASE("linear duality: <u_v(T), q> equals the staggered control pairing") {
  const Grid g = interval_grid(33);
  const TimeGrid tg{0.5, 16};
  Rng rng(11);

  for (int trial = 0; trial < 3; ++trial) {
    const Control v = random_control(g, tg, rng);
    const Field q = random_domain_field(g, rng);

    const Trajectory u = forward_linear(g, tg, zero_field(g), v, tight());
    const Trajectory phi = adjoint_linear(g, tg, q, tight());
    REQUIRE(static_cast<int>(phi.levels.size()) == tg.nt + 1);
    for (int i = 0; i < g.num_nodes(); ++i)
      if (g.domain_mask[i]) CHECK(phi.levels[tg.nt][i] == doctest::Approx(q[i]).epsilon(1e-15));

    const double lhs = inner_product(g, u.final_state(), q, Region::domain);
    const double rhs = control_inner(g, tg, v, paired_adjoint(g, tg, phi));
    CHECK(rel_diff(lhs, rhs) < 1e-12);
  }
}

TEST_CASE("semilinear duality against a hand-rolled linearized sweep") {
  const Grid g = interval_grid(33);
  const TimeGrid tg{0.5, 16};
  const Reaction f = sin_reaction();
  Rng rng(23);

  const Field u0 = random_domain_field(g, rng, 1.5);
  const Control vbar = random_control(g, tg, rng, 0.5);
  const Trajectory ubar = forward_semilinear(g, tg, u0, vbar, f, tight());

  const Control dv = random_control(g, tg, rng);
  const Field q = random_domain_field(g, rng);

  // delta u^{n+1} = S ((1 - dt F'(ubar^n)) delta u^n + dt dv^{n+1} 1w),
  // assembled here from scratch so the adjoint code is checked against an
  // independent realization of the linearized flow.
  const double dt = tg.dt();
  const SparseOperator A = identity_plus_scaled(g.laplacian, dt);
  const int nd = g.num_dofs();
  std::vector<double> du(nd, 0.0), rhs(nd);
  for (int n = 0; n < tg.nt; ++n) {
    for (int d = 0; d < nd; ++d) {
      const int node = g.node_of_dof[d];
      rhs[d] = (1.0 - dt * f.deriv(ubar.levels[n][node])) * du[d];
      if (g.omega_mask[node]) rhs[d] += dt * dv.steps[n][node];
    }
    du = solve_spd(A, rhs, 1e-13, 0, &du);
  }

  const Trajectory phi = adjoint_semilinear(g, tg, ubar, q, f, tight());
  const double lhs = weighted_terminal_dot(g, du, q);
  const double rhs_pairing = control_inner(g, tg, dv, paired_adjoint(g, tg, phi));
  CHECK(rel_diff(lhs, rhs_pairing) < 1e-12);
}

TEST_CASE("semilinear adjoint with zero reaction equals the linear adjoint") {
  const Grid g = interval_grid(25);
  const TimeGrid tg{0.25, 8};
  Rng rng(31);
  const Field q = random_domain_field(g, rng);
  const Trajectory state = forward_linear(g, tg, random_domain_field(g, rng),
                                          random_control(g, tg, rng), tight());

  const Trajectory a = adjoint_linear(g, tg, q, tight());
  const Trajectory b = adjoint_semilinear(g, tg, state, q, zero_reaction(), tight());
  double worst = 0;
  for (int n = 0; n <= tg.nt; ++n)
    for (int i = 0; i < g.num_nodes(); ++i)
      worst = std::max(worst, std::abs(a.levels[n][i] - b.levels[n][i]));
  CHECK(worst < 1e-13);
}

TEST_CASE("bilinear duality: potential perturbations pair with -phi u") {
  const Grid g = interval_grid(33);
  const TimeGrid tg{0.5, 16};
  Rng rng(47);

  const Field u0 = random_domain_field(g, rng, 1.5);
  const Control v = random_control(g, tg, rng, 0.8);
  const Control dv = random_control(g, tg, rng);
  const Field q = random_domain_field(g, rng);

  const Trajectory u = forward_bilinear(g, tg, u0, v, tight());
  const Trajectory phi = adjoint_bilinear(g, tg, v, q, tight());

  // delta u^{n+1} = S_n (delta u^n - dt dv^{n+1} u^{n+1} 1w), S_n the step
  // operator of the base control; again assembled independently.
  const double dt = tg.dt();
  const int nd = g.num_dofs();
  std::vector<double> du(nd, 0.0), rhs(nd);
  for (int n = 0; n < tg.nt; ++n) {
    SparseOperator A = identity_plus_scaled(g.laplacian, dt);
    std::vector<double> pot(nd, 0.0);
    for (int d = 0; d < nd; ++d) {
      const int node = g.node_of_dof[d];
      if (g.omega_mask[node]) pot[d] = v.steps[n][node];
    }
    add_to_diagonal(A, pot, dt);
    for (int d = 0; d < nd; ++d) {
      const int node = g.node_of_dof[d];
      rhs[d] = du[d];
      if (g.omega_mask[node]) rhs[d] -= dt * dv.steps[n][node] * u.levels[n + 1][node];
    }
    du = solve_spd(A, rhs, 1e-13, 0, &du);
  }

  // <delta u(T), q> = -sum_m dt (dv^m, phi^{m-1} u^m)_omega.
  Control track = zero_control(g, tg);
  for (int m = 1; m <= tg.nt; ++m)
    for (int i = 0; i < g.num_nodes(); ++i)
      if (g.omega_mask[i]) track.steps[m - 1][i] = -phi.levels[m - 1][i] * u.levels[m][i];

  const double lhs = weighted_terminal_dot(g, du, q);
  const double rhs_pairing = control_inner(g, tg, dv, track);
  CHECK(rel_diff(lhs, rhs_pairing) < 1e-12);
}

TEST_CASE("bilinear adjoint guards indefinite steps like the forward map") {
  const Grid g = interval_grid(17);
  const TimeGrid tg{0.5, 4};  // dt = 0.125
  Control v = zero_control(g, tg);
  for (int i = 0; i < g.num_nodes(); ++i)
    if (g.omega_mask[i]) v.steps[2][i] = -20.0;  // 1 + dt min v < 0 at level 3
  Rng rng(3);
  CHECK_THROWS_AS(adjoint_bilinear(g, tg, v, random_domain_field(g, rng), tight()),
                  SolverFailure);
}
