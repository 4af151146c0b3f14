#include "pareto/validation.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

#include "pareto/rng.hpp"

namespace pareto::validation {
namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<int> omega_nodes_of(const Grid& g) {
  std::vector<int> nodes;
  for (int i = 0; i < g.num_nodes(); ++i)
    if (g.omega_mask[i]) nodes.push_back(i);
  return nodes;
}

double objective(const ProblemSpec& spec, const Control& v) {
  return weighted_objective(evaluate_costs(spec, v), spec.alpha);
}

// Random control supported on omega; amplitude per entry in (-a, a).
Control random_control(const Grid& g, const TimeGrid& tg, Rng& rng, double a) {
  Control v = zero_control(g, tg);
  for (auto& step : v.steps)
    for (int i = 0; i < g.num_nodes(); ++i)
      if (g.omega_mask[i]) step[i] = a * rng.symmetric();
  return v;
}

// In-place lower Cholesky solve of the symmetric positive definite K x = rhs.
std::vector<double> cholesky_solve(int n, std::vector<double> K, std::vector<double> rhs) {
  for (int j = 0; j < n; ++j) {
    double d = K[j * n + j];
    for (int k = 0; k < j; ++k) d -= K[j * n + k] * K[j * n + k];
    if (!(d > 0.0))
      throw std::runtime_error("dense_minimize: normal equations lost positive definiteness");
    const double ljj = std::sqrt(d);
    K[j * n + j] = ljj;
    for (int i = j + 1; i < n; ++i) {
      double s = K[i * n + j];
      for (int k = 0; k < j; ++k) s -= K[i * n + k] * K[j * n + k];
      K[i * n + j] = s / ljj;
    }
  }
  for (int i = 0; i < n; ++i) {  // L y = rhs
    double s = rhs[i];
    for (int k = 0; k < i; ++k) s -= K[i * n + k] * rhs[k];
    rhs[i] = s / K[i * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {  // L^T x = y
    double s = rhs[i];
    for (int k = i + 1; k < n; ++k) s -= K[k * n + i] * rhs[k];
    rhs[i] = s / K[i * n + i];
  }
  return rhs;
}

}  // namespace

std::vector<double> flatten_control(const Grid& g, const TimeGrid& tg, const Control& v) {
  if (v.nt() != tg.nt) throw std::invalid_argument("flatten_control: step count mismatch");
  const std::vector<int> nodes = omega_nodes_of(g);
  std::vector<double> x;
  x.reserve(nodes.size() * tg.nt);
  for (int m = 0; m < tg.nt; ++m)
    for (int node : nodes) x.push_back(v.steps[m][node]);
  return x;
}

Control unflatten_control(const Grid& g, const TimeGrid& tg, const std::vector<double>& x) {
  const std::vector<int> nodes = omega_nodes_of(g);
  if (x.size() != nodes.size() * static_cast<std::size_t>(tg.nt))
    throw std::invalid_argument("unflatten_control: length mismatch");
  Control v = zero_control(g, tg);
  std::size_t c = 0;
  for (int m = 0; m < tg.nt; ++m)
    for (int node : nodes) v.steps[m][node] = x[c++];
  return v;
}

DenseAffineMap assemble_dense(const ProblemSpec& spec) {
  spec.validate();
  if (!std::holds_alternative<LinearModel>(spec.model))
    throw std::invalid_argument("assemble_dense: linear model only");
  const Grid& g = *spec.grid;
  const TimeGrid& tg = spec.time;

  DenseAffineMap map;
  map.omega_nodes = omega_nodes_of(g);
  map.rows = g.num_dofs();
  map.cols = static_cast<int>(map.omega_nodes.size()) * tg.nt;
  if (map.cols > 2000)
    throw std::invalid_argument("assemble_dense: control dimension " + std::to_string(map.cols) +
                                " exceeds the dense-assembly guard (2000)");

  auto pack_final = [&](const Trajectory& t) {
    std::vector<double> x(g.num_dofs());
    for (int d = 0; d < g.num_dofs(); ++d) x[d] = t.final_state()[g.node_of_dof[d]];
    return x;
  };

  map.b = pack_final(forward_linear(g, tg, spec.u0, zero_control(g, tg), spec.stepper));
  map.m.assign(static_cast<std::size_t>(map.rows) * map.cols, 0.0);
  const Field zero = zero_field(g);
  int c = 0;
  for (int m = 0; m < tg.nt; ++m)
    for (int node : map.omega_nodes) {
      Control unit = zero_control(g, tg);
      unit.steps[m][node] = 1.0;
      const std::vector<double> col = pack_final(forward_linear(g, tg, zero, unit, spec.stepper));
      for (int d = 0; d < map.rows; ++d) map.m[static_cast<std::size_t>(d) * map.cols + c] = col[d];
      ++c;
    }
  return map;
}

std::vector<double> dense_apply(const DenseAffineMap& map, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != map.cols)
    throw std::invalid_argument("dense_apply: length mismatch");
  std::vector<double> y = map.b;
  for (int d = 0; d < map.rows; ++d) {
    double s = 0.0;
    const double* row = &map.m[static_cast<std::size_t>(d) * map.cols];
    for (int c = 0; c < map.cols; ++c) s += row[c] * x[c];
    y[d] += s;
  }
  return y;
}

Control dense_minimize(const ProblemSpec& spec, const DenseAffineMap& map) {
  spec.validate();
  const Grid& g = *spec.grid;
  const TimeGrid& tg = spec.time;
  const int nc = map.cols, nd = map.rows;

  auto [u1T, u2T] = uncontrolled_targets(spec);
  const TerminalWeight tw = make_terminal_weight(g, spec.alpha, u1T, u2T);

  // per-dof misfit weight and target: d J_track/d uT = wd * (w uT - g)
  std::vector<double> dw(nd), target(nd);
  for (int d = 0; d < nd; ++d) {
    const int node = g.node_of_dof[d];
    dw[d] = g.weight[node] * tw.w[node];
    target[d] = g.weight[node] * (tw.g[node] - tw.w[node] * map.b[d]);
  }

  std::vector<double> K(static_cast<std::size_t>(nc) * nc, 0.0), rhs(nc, 0.0);
  for (int d = 0; d < nd; ++d) {
    const double* row = &map.m[static_cast<std::size_t>(d) * nc];
    for (int c = 0; c < nc; ++c) rhs[c] += row[c] * target[d];
    if (dw[d] == 0.0) continue;
    for (int c1 = 0; c1 < nc; ++c1) {
      if (row[c1] == 0.0) continue;
      const double f = dw[d] * row[c1];
      for (int c2 = 0; c2 <= c1; ++c2) K[static_cast<std::size_t>(c1) * nc + c2] += f * row[c2];
    }
  }
  for (int c1 = 0; c1 < nc; ++c1)  // symmetrize the upper triangle
    for (int c2 = c1 + 1; c2 < nc; ++c2)
      K[static_cast<std::size_t>(c1) * nc + c2] = K[static_cast<std::size_t>(c2) * nc + c1];
  const double dt = tg.dt();
  for (int c = 0; c < nc; ++c) {
    const int node = map.omega_nodes[c % map.omega_nodes.size()];
    K[static_cast<std::size_t>(c) * nc + c] += spec.mu * dt * g.weight[node];
  }

  return unflatten_control(g, tg, cholesky_solve(nc, std::move(K), std::move(rhs)));
}

Control fd_gradient(const ProblemSpec& spec, const Control& v, double eps) {
  spec.validate();
  if (!(eps > 0)) throw std::invalid_argument("fd_gradient: eps must be positive");
  const Grid& g = *spec.grid;
  const TimeGrid& tg = spec.time;
  const std::vector<int> nodes = omega_nodes_of(g);
  const long dim = static_cast<long>(nodes.size()) * tg.nt;
  if (dim > 5000)
    throw std::invalid_argument("fd_gradient: control dimension " + std::to_string(dim) +
                                " exceeds the per-coordinate guard (5000); use fd_directional");

  Control out = zero_control(g, tg);
  Control work = v;
  const double dt = tg.dt();
  for (int m = 0; m < tg.nt; ++m)
    for (int node : nodes) {
      const double saved = work.steps[m][node];
      work.steps[m][node] = saved + eps;
      const double jp = objective(spec, work);
      work.steps[m][node] = saved - eps;
      const double jm = objective(spec, work);
      work.steps[m][node] = saved;
      out.steps[m][node] = (jp - jm) / (2.0 * eps) / (dt * g.weight[node]);
    }
  return out;
}

double fd_directional(const ProblemSpec& spec, const Control& v, const Control& dir, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("fd_directional: eps must be positive");
  Control work = v;
  axpy(eps, dir, work);
  const double jp = objective(spec, work);
  axpy(-2.0 * eps, dir, work);
  const double jm = objective(spec, work);
  return (jp - jm) / (2.0 * eps);
}

ProblemSpec interval_problem(const ModelKind& model, int nodes, int nt, double mu, double alpha,
                             AdmissibleSet admissible) {
  GeometrySpec geom;
  geom.dim = 1;
  geom.nodes = {nodes, 1, 1};
  geom.lo = {-1, 0, 0};
  geom.hi = {1, 0, 0};
  geom.domain = BoxShape{{-1, 0, 0}, {1, 0, 0}};
  geom.omega = BoxShape{{-1, 0, 0}, {-0.2, 0, 0}};
  geom.o1 = BoxShape{{0.0, 0, 0}, {0.8, 0, 0}};
  geom.o2 = BoxShape{{0.3, 0, 0}, {1.0, 0, 0}};

  ProblemSpec spec;
  spec.grid = std::make_shared<Grid>(build_grid(geom));
  spec.time = TimeGrid{0.5, nt};
  spec.model = model;
  spec.mu = mu;
  spec.alpha = alpha;
  spec.admissible = std::move(admissible);
  const double s0 = std::holds_alternative<BilinearModel>(model) ? 0.25 : 1.0;
  spec.u0 = field_from_function(*spec.grid, [s0](double x, double, double) {
    return s0 * 1.5 * (1.0 + std::cos(kPi * x));
  });
  spec.u01 =
      field_from_function(*spec.grid, [](double x, double, double) { return 2.0 * (1.0 - x * x); });
  spec.u02 =
      field_from_function(*spec.grid, [](double x, double, double) { return -(1.0 - x * x); });
  return spec;
}

ProblemSpec interval_problem(const ModelKind& model, int nodes, int nt, double mu, double alpha) {
  AdmissibleSet adm = FullSpace{};
  if (std::holds_alternative<BilinearModel>(model)) adm = Box{20.0};
  return interval_problem(model, nodes, nt, mu, alpha, std::move(adm));
}

ProblemSpec rectangle_problem(const ModelKind& model, int nx, int ny, int nt, double mu,
                              double alpha, AdmissibleSet admissible) {
  GeometrySpec geom;
  geom.dim = 2;
  geom.nodes = {nx, ny, 1};
  geom.lo = {-3, -3, 0};
  geom.hi = {3, 3, 0};
  geom.domain = BoxShape{{-3, -3, 0}, {3, 3, 0}};
  geom.omega = BoxShape{{-2, -1, 0}, {0, 1, 0}};
  geom.o1 = BoxShape{{0.2, -1.8, 0}, {2.2, 0.6, 0}};
  geom.o2 = BoxShape{{0.2, -0.6, 0}, {2.2, 1.8, 0}};

  ProblemSpec spec;
  spec.grid = std::make_shared<Grid>(build_grid(geom));
  spec.time = TimeGrid{0.5, nt};
  spec.model = model;
  spec.mu = mu;
  spec.alpha = alpha;
  spec.admissible = std::move(admissible);
  auto peak = [](double x, double y) { return 3.0 - std::sqrt(x * x + y * y); };
  const double s0 = std::holds_alternative<BilinearModel>(model) ? 0.25 : 1.0;
  spec.u0 =
      field_from_function(*spec.grid, [&](double x, double y, double) { return s0 * peak(x, y); });
  spec.u01 =
      field_from_function(*spec.grid, [&](double x, double y, double) { return 2.0 * peak(x, y); });
  spec.u02 =
      field_from_function(*spec.grid, [&](double x, double y, double) { return -peak(x, y); });
  return spec;
}

ProblemSpec rectangle_problem(const ModelKind& model, int nx, int ny, int nt, double mu,
                              double alpha) {
  AdmissibleSet adm = FullSpace{};
  if (std::holds_alternative<BilinearModel>(model)) adm = Box{20.0};
  return rectangle_problem(model, nx, ny, nt, mu, alpha, std::move(adm));
}

bool SuiteReport::all_passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

namespace {

CheckResult gradient_check(const std::string& name, const ModelKind& model, std::uint64_t seed,
                           bool corrupt_sign) {
  ProblemSpec spec = interval_problem(model, 32, 16, 5.0, 0.4);
  spec.stepper.linear_tol = 1e-13;
  const Grid& g = *spec.grid;
  const TimeGrid& tg = spec.time;

  Rng rng(seed);
  const Control v = random_control(g, tg, rng, 0.3);
  Control grad = gradient(spec, v);
  if (corrupt_sign) scale(grad, -1.0);

  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    Control dir = random_control(g, tg, rng, 1.0);
    const double dn = control_norm(g, tg, dir);
    scale(dir, 1.0 / dn);
    const double exact = control_inner(g, tg, grad, dir);
    const double fd = fd_directional(spec, v, dir, 1e-5);
    worst = std::max(worst, std::abs(fd - exact) / std::max(std::abs(exact), 1e-12));
  }

  CheckResult r;
  r.name = name;
  r.error = worst;
  r.threshold = 1e-6;
  r.passed = worst <= r.threshold;
  r.detail = "20 random directions, eps=1e-5, interval grid 32 nodes / 16 steps";
  if (corrupt_sign) r.detail += " [gradient sign deliberately flipped]";
  return r;
}

}  // namespace

CheckResult check_gradient_linear(bool corrupt_sign) {
  return gradient_check("gradient-linear", LinearModel{}, 101, corrupt_sign);
}

CheckResult check_gradient_semilinear(bool corrupt_sign) {
  return gradient_check("gradient-semilinear", SemilinearModel{sin_reaction()}, 102, corrupt_sign);
}

CheckResult check_gradient_bilinear(bool corrupt_sign) {
  return gradient_check("gradient-bilinear", BilinearModel{}, 103, corrupt_sign);
}

CheckResult check_dense_oracle() {
  CheckResult r;
  r.name = "dense-oracle-linear";
  r.threshold = 1e-8;
  r.detail = "interval grid 8 nodes / 8 steps, mu in {1,5,10} x alpha in {0.1,0.5,0.9}";

  DenseAffineMap map;
  bool assembled = false;
  double worst = 0.0;
  for (double mu : {1.0, 5.0, 10.0})
    for (double alpha : {0.1, 0.5, 0.9}) {
      ProblemSpec spec = interval_problem(LinearModel{}, 8, 8, mu, alpha);
      spec.stepper.linear_tol = 1e-13;
      if (!assembled) {
        map = assemble_dense(spec);
        assembled = true;
      }
      const Control exact = dense_minimize(spec, map);
      SolverOptions opts;
      opts.tolerance = 1e-12;
      const SolveReport rep = pareto_cg_linear(spec, opts);
      Control diff = rep.control;
      axpy(-1.0, exact, diff);
      const double rel = control_norm(*spec.grid, spec.time, diff) /
                         std::max(control_norm(*spec.grid, spec.time, exact), 1e-30);
      worst = std::max(worst, rel);
    }
  r.error = worst;
  r.passed = worst <= r.threshold;
  return r;
}

CheckResult check_cross_agreement_linear() {
  CheckResult r;
  r.name = "cross-agreement-linear";
  r.threshold = 1e-6;
  r.detail = "zero reaction: cg vs fixed point vs newton, interval grid 32 nodes / 16 steps";

  SolverOptions opts;
  opts.tolerance = 1e-10;

  ProblemSpec lin = interval_problem(LinearModel{}, 32, 16, 5.0, 0.5);
  lin.stepper.linear_tol = 1e-12;
  ProblemSpec semi = interval_problem(SemilinearModel{zero_reaction()}, 32, 16, 5.0, 0.5);
  semi.stepper.linear_tol = 1e-12;

  const Control v2 = pareto_cg_linear(lin, opts).control;
  const Control v3 = fixed_point_semilinear(semi, opts).control;
  const Control v4 = newton_semilinear(semi, opts).control;

  const Grid& g = *lin.grid;
  auto rel = [&](const Control& a, const Control& b) {
    Control d = a;
    axpy(-1.0, b, d);
    return control_norm(g, lin.time, d) / std::max(control_norm(g, lin.time, b), 1e-30);
  };
  r.error = std::max({rel(v2, v3), rel(v2, v4), rel(v3, v4)});
  r.passed = r.error <= r.threshold;
  return r;
}

CheckResult check_cross_agreement_bilinear() {
  CheckResult r;
  r.name = "cross-agreement-bilinear";
  r.threshold = 1e-6;
  r.detail = "gradient descent vs fixed point, interval grid 32 nodes / 16 steps";

  SolverOptions opts;
  opts.tolerance = 1e-10;

  ProblemSpec spec = interval_problem(BilinearModel{}, 32, 16, 5.0, 0.5);
  spec.stepper.linear_tol = 1e-12;

  const Control v5 = gradient_descent_bilinear(spec, opts).control;
  const Control v6 = fixed_point_bilinear(spec, opts).control;
  Control d = v5;
  axpy(-1.0, v6, d);
  r.error = control_norm(*spec.grid, spec.time, d) /
            std::max(control_norm(*spec.grid, spec.time, v6), 1e-30);
  r.passed = r.error <= r.threshold;
  return r;
}

CheckResult check_projection_properties() {
  CheckResult r;
  r.name = "projection-properties";
  r.threshold = 1e-12;
  r.detail = "100 random pairs x {full space, ball, box}: idempotence, nonexpansiveness, "
             "variational inequality, membership";

  ProblemSpec spec = interval_problem(LinearModel{}, 16, 8, 1.0, 0.5);
  const Grid& g = *spec.grid;
  const TimeGrid& tg = spec.time;
  const AdmissibleSet sets[] = {AdmissibleSet{FullSpace{}}, AdmissibleSet{L2Ball{0.8}},
                                AdmissibleSet{Box{1.2}}};

  Rng rng(77);
  double worst = 0.0;
  for (int pair = 0; pair < 100; ++pair) {
    const Control v = random_control(g, tg, rng, 2.0);
    const Control w = random_control(g, tg, rng, 2.0);
    for (const auto& set : sets) {
      const Control pv = project(set, g, tg, v);
      const Control pw = project(set, g, tg, w);

      Control d = project(set, g, tg, pv);  // idempotence
      axpy(-1.0, pv, d);
      worst = std::max(worst, control_norm(g, tg, d));

      Control dp = pv;  // nonexpansiveness
      axpy(-1.0, pw, dp);
      Control dv = v;
      axpy(-1.0, w, dv);
      worst = std::max(worst, control_norm(g, tg, dp) - control_norm(g, tg, dv));

      Control res = v;  // variational inequality at the feasible point pw
      axpy(-1.0, pv, res);
      Control dir = pw;
      axpy(-1.0, pv, dir);
      worst = std::max(worst, control_inner(g, tg, res, dir));

      if (!contains(set, g, tg, pv)) worst = std::max(worst, 1.0);
      if (contains(set, g, tg, v))  // members must be fixed points
        worst = std::max(worst, control_norm(g, tg, res) -
                                    1e-12 * std::max(1.0, control_norm(g, tg, v)));
    }
  }
  r.error = std::max(worst, 0.0);
  r.passed = r.error <= r.threshold;
  return r;
}

SuiteReport run_suite(bool corrupt_gradient_sign) {
  SuiteReport rep;
  rep.checks.push_back(check_gradient_linear(corrupt_gradient_sign));
  rep.checks.push_back(check_gradient_semilinear(corrupt_gradient_sign));
  rep.checks.push_back(check_gradient_bilinear(corrupt_gradient_sign));
  rep.checks.push_back(check_dense_oracle());
  rep.checks.push_back(check_cross_agreement_linear());
  rep.checks.push_back(check_cross_agreement_bilinear());
  rep.checks.push_back(check_projection_properties());
  return rep;
}

}  // namespace pareto::validation
