#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "pareto/grid.hpp"
#include "pareto/rng.hpp"

using namespace pareto;

namespace {

GeometrySpec unit_interval(int nodes) {
  GeometrySpec geom;
  geom.dim = 1;
  geom.nodes = {nodes, 1, 1};
  geom.lo = {0, 0, 0};
  geom.hi = {1, 0, 0};
  geom.domain = BoxShape{{0, 0, 0}, {1, 0, 0}};
  geom.omega = BoxShape{{0, 0, 0}, {0.5, 0, 0}};
  geom.o1 = BoxShape{{0.4, 0, 0}, {0.9, 0, 0}};
  geom.o2 = BoxShape{{0.6, 0, 0}, {1.0, 0, 0}};
  return geom;
}

}  // namespace

TEST_CASE("interval lattice: spacing, masks, weights") {
  const Grid g = build_grid(unit_interval(5));  // x = 0, .25, .5, .75, 1

  CHECK(g.num_nodes() == 5);
  CHECK(g.spacing[0] == doctest::Approx(0.25));
  // Bounding-box nodes are Dirichlet: only the three interior nodes remain.
  CHECK(g.num_dofs() == 3);
  CHECK(!g.domain_mask[0]);
  CHECK(!g.domain_mask[4]);
  for (int i = 1; i <= 3; ++i) CHECK(g.domain_mask[i]);

  // Closed subregion membership, intersected with the domain mask.
  CHECK(g.omega_mask[1]);   // x = 0.25
  CHECK(g.omega_mask[2]);   // x = 0.5 sits on the omega boundary
  CHECK(!g.omega_mask[3]);
  CHECK(g.o1_mask[2]);
  CHECK(g.o1_mask[3]);
  CHECK(g.o2_mask[3]);
  CHECK(!g.o2_mask[2]);

  // Mass-lumped quadrature: h on every interior node, zero on Dirichlet nodes.
  CHECK(g.weight[0] == 0.0);
  CHECK(g.weight[2] == doctest::Approx(0.25));
  CHECK(g.cell_volume() == doctest::Approx(0.25));

  // Subregion masks never leave the domain.
  for (int i = 0; i < g.num_nodes(); ++i) {
    if (g.omega_mask[i]) CHECK(g.domain_mask[i]);
    if (g.o1_mask[i]) CHECK(g.domain_mask[i]);
    if (g.o2_mask[i]) CHECK(g.domain_mask[i]);
  }

  // coords round trip.
  auto c = g.coords(g.node_index(3, 0, 0));
  CHECK(c[0] == doctest::Approx(0.75));
}

TEST_CASE("ball domain in 2d: strict membership") {
  GeometrySpec geom;
  geom.dim = 2;
  geom.nodes = {5, 5, 1};
  geom.lo = {-1, -1, 0};
  geom.hi = {1, 1, 0};
  geom.domain = BallShape{{0, 0, 0}, 1.0};
  geom.omega = BoxShape{{-1, -1, 0}, {0, 0, 0}};
  geom.o1 = BoxShape{{-0.5, -0.5, 0}, {0.5, 0.5, 0}};
  geom.o2 = BoxShape{{0, 0, 0}, {0.6, 0.6, 0}};
  const Grid g = build_grid(geom);

  // Strictly inside the unit ball on a half-spaced lattice: the 3x3 block
  // around the origin ((+-1, 0) sits exactly on the circle and is excluded).
  CHECK(g.num_dofs() == 9);
  CHECK(g.weight[g.node_index(2, 2, 0)] == doctest::Approx(0.25));
  CHECK(g.cell_volume() == doctest::Approx(0.25));
}

TEST_CASE("cylinder domain in 3d") {
  GeometrySpec geom;
  geom.dim = 3;
  geom.nodes = {5, 5, 5};
  geom.lo = {-1, -1, 0};
  geom.hi = {1, 1, 2};
  geom.domain = CylinderShape{1.0, 0.0, 2.0};
  geom.omega = BoxShape{{-1, -1, 0}, {0, 0, 2}};
  geom.o1 = BoxShape{{-0.5, -0.5, 0}, {0.5, 0.5, 2}};
  geom.o2 = BoxShape{{0, 0, 0}, {0.6, 0.6, 2}};
  const Grid g = build_grid(geom);

  // 9 nodes per cross-section strictly inside the circle, times the three
  // interior z levels (z = 0 and z = 2 are strict cylinder caps).
  CHECK(g.num_dofs() == 27);
  CHECK(g.cell_volume() == doctest::Approx(0.5 * 0.5 * 0.5));
}

TEST_CASE("laplacian: exact on quadratics, self-adjoint") {
  const Grid g = build_grid(unit_interval(9));
  const int nd = g.num_dofs();

  // u = x (1 - x) vanishes at both ends, so -u'' = 2 holds in every row.
  std::vector<double> u(nd), y(nd);
  for (int d = 0; d < nd; ++d) {
    const double x = g.coords(g.node_of_dof[d])[0];
    u[d] = x * (1.0 - x);
  }
  g.laplacian.apply(u, y);
  for (int d = 0; d < nd; ++d) CHECK(y[d] == doctest::Approx(2.0).epsilon(1e-12));

  // (A x, y) == (x, A y) for random vectors.
  Rng rng(42);
  std::vector<double> a(nd), b(nd), Aa(nd), Ab(nd);
  for (int d = 0; d < nd; ++d) {
    a[d] = rng.symmetric();
    b[d] = rng.symmetric();
  }
  g.laplacian.apply(a, Aa);
  g.laplacian.apply(b, Ab);
  double lhs = 0, rhs = 0;
  for (int d = 0; d < nd; ++d) {
    lhs += Aa[d] * b[d];
    rhs += a[d] * Ab[d];
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("region inner products and norms") {
  const Grid g = build_grid(unit_interval(9));
  Field one(g.num_nodes(), 1.0);

  // sum of weights over the domain: 7 interior nodes x h = 7/8.
  CHECK(inner_product(g, one, one, Region::domain) == doctest::Approx(7.0 / 8.0));
  CHECK(norm(g, one, Region::domain) == doctest::Approx(std::sqrt(7.0 / 8.0)));

  // omega = [0, 0.5]: interior nodes x = 1/8 .. 4/8.
  CHECK(inner_product(g, one, one, Region::omega) == doctest::Approx(4.0 / 8.0));

  Field f = field_from_function(g, [](double x, double, double) { return 2.0 * x; });
  CHECK(f[0] == 0.0);  // Dirichlet node: mask wins over the function value
  CHECK(f[g.node_index(4, 0, 0)] == doctest::Approx(1.0));
}

TEST_CASE("space-time controls: pairing, axpy, omega support") {
  const Grid g = build_grid(unit_interval(9));
  const TimeGrid tg{0.5, 4};
  CHECK(tg.dt() == doctest::Approx(0.125));

  Control ones = zero_control(g, tg);
  for (auto& s : ones.steps)
    for (int i = 0; i < g.num_nodes(); ++i)
      if (g.omega_mask[i]) s[i] = 1.0;

  // ||1||^2 over omega x (0,T): nt * dt * (4 nodes * h).
  CHECK(control_inner(g, tg, ones, ones) == doctest::Approx(4 * 0.125 * 0.5));
  CHECK(control_norm(g, tg, ones) == doctest::Approx(std::sqrt(0.25)));

  Control w = ones;
  axpy(-2.0, ones, w);  // w = -1 on omega
  CHECK(control_norm(g, tg, w) == doctest::Approx(0.5));
  scale(w, -3.0);
  CHECK(control_norm(g, tg, w) == doctest::Approx(1.5));

  // zero_outside_omega wipes values parked outside the control region.
  Control messy = ones;
  for (auto& s : messy.steps) s[g.node_index(6, 0, 0)] = 7.0;
  zero_outside_omega(g, messy);
  CHECK(control_norm(g, tg, messy) == doctest::Approx(0.5));
}

TEST_CASE("degenerate inputs are rejected") {
  auto geom = unit_interval(5);
  geom.domain = BallShape{{5, 0, 0}, 0.01};
  CHECK_THROWS_WITH_AS(build_grid(geom), "build_grid: domain has no interior nodes",
                       std::invalid_argument);

  geom = unit_interval(5);
  geom.omega = BoxShape{{2, 0, 0}, {3, 0, 0}};
  CHECK_THROWS_WITH_AS(build_grid(geom), "build_grid: omega does not meet the domain",
                       std::invalid_argument);

  geom = unit_interval(5);
  geom.o1 = BoxShape{{0.2, 0, 0}, {0.3, 0, 0}};
  geom.o2 = BoxShape{{0.6, 0, 0}, {0.8, 0, 0}};
  CHECK_THROWS_WITH_AS(build_grid(geom), "build_grid: O1 and O2 do not overlap",
                       std::invalid_argument);

  geom = unit_interval(5);
  geom.nodes[0] = 1;
  CHECK_THROWS_AS(build_grid(geom), std::invalid_argument);

  geom = unit_interval(5);
  geom.dim = 4;
  CHECK_THROWS_AS(build_grid(geom), std::invalid_argument);
}

TEST_CASE("identical observation regions are allowed") {
  auto geom = unit_interval(9);
  geom.o1 = BoxShape{{0.5, 0, 0}, {0.9, 0, 0}};
  geom.o2 = geom.o1;
  const Grid g = build_grid(geom);
  for (int i = 0; i < g.num_nodes(); ++i) CHECK(g.o1_mask[i] == g.o2_mask[i]);
}
