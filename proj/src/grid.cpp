#include "pareto/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace pareto {
namespace {

// Closed membership for subregions; the domain itself uses strict inequalities
// so lattice nodes on the bounding box (Dirichlet data) never become unknowns.
bool inside(const Shape& s, const std::array<double, 3>& x, bool strict) {
  if (const auto* b = std::get_if<BoxShape>(&s)) {
    for (int a = 0; a < 3; ++a) {
      if (strict ? (x[a] <= b->lo[a] || x[a] >= b->hi[a]) && b->hi[a] > b->lo[a]
                 : (x[a] < b->lo[a] || x[a] > b->hi[a]))
        return false;
    }
    return true;
  }
  if (const auto* ball = std::get_if<BallShape>(&s)) {
    double r2 = 0;
    for (int a = 0; a < 3; ++a) {
      const double d = x[a] - ball->center[a];
      r2 += d * d;
    }
    return strict ? r2 < ball->radius * ball->radius : r2 <= ball->radius * ball->radius;
  }
  const auto& c = std::get<CylinderShape>(s);
  const double r2 = x[0] * x[0] + x[1] * x[1];
  if (strict ? r2 >= c.radius * c.radius : r2 > c.radius * c.radius) return false;
  return strict ? (x[2] > c.z_lo && x[2] < c.z_hi) : (x[2] >= c.z_lo && x[2] <= c.z_hi);
}

}  // namespace

std::array<double, 3> Grid::coords(int node) const {
  const int i = node % n[0];
  const int j = (node / n[0]) % n[1];
  const int k = node / (n[0] * n[1]);
  return {lo[0] + i * spacing[0], lo[1] + j * spacing[1], lo[2] + k * spacing[2]};
}

Grid build_grid(const GeometrySpec& geom) {
  if (geom.dim < 1 || geom.dim > 3) throw std::invalid_argument("build_grid: dim must be 1, 2 or 3");
  Grid g;
  g.dim = geom.dim;
  for (int a = 0; a < 3; ++a) {
    if (a < geom.dim) {
      if (geom.nodes[a] < 2) throw std::invalid_argument("build_grid: need at least 2 nodes per axis");
      if (!(geom.hi[a] > geom.lo[a])) throw std::invalid_argument("build_grid: empty bounding box axis");
      g.n[a] = geom.nodes[a];
      g.lo[a] = geom.lo[a];
      g.spacing[a] = (geom.hi[a] - geom.lo[a]) / (geom.nodes[a] - 1);
    } else {
      g.n[a] = 1;
      g.lo[a] = 0;
      g.spacing[a] = 0;
    }
  }
  g.weight_unit_ = 1.0;
  for (int a = 0; a < geom.dim; ++a) g.weight_unit_ *= g.spacing[a];

  const int total = g.num_nodes();
  g.domain_mask.assign(total, 0);
  g.omega_mask.assign(total, 0);
  g.o1_mask.assign(total, 0);
  g.o2_mask.assign(total, 0);
  g.weight.assign(total, 0.0);
  g.dof_of_node.assign(total, -1);

  int overlap = 0, omega_count = 0;
  for (int node = 0; node < total; ++node) {
    const auto x = g.coords(node);
    if (!inside(geom.domain, x, /*strict=*/true)) continue;
    // nodes on the bounding box are Dirichlet even if the shape test passes
    bool on_bbox = false;
    const int i = node % g.n[0];
    const int j = (node / g.n[0]) % g.n[1];
    const int k = node / (g.n[0] * g.n[1]);
    const int idx[3] = {i, j, k};
    for (int a = 0; a < geom.dim; ++a)
      if (idx[a] == 0 || idx[a] == g.n[a] - 1) on_bbox = true;
    if (on_bbox) continue;

    g.domain_mask[node] = 1;
    g.weight[node] = g.weight_unit_;
    g.dof_of_node[node] = static_cast<int>(g.node_of_dof.size());
    g.node_of_dof.push_back(node);
    if (inside(geom.omega, x, false)) {
      g.omega_mask[node] = 1;
      ++omega_count;
    }
    if (inside(geom.o1, x, false)) g.o1_mask[node] = 1;
    if (inside(geom.o2, x, false)) g.o2_mask[node] = 1;
    if (g.o1_mask[node] && g.o2_mask[node]) ++overlap;
  }

  if (g.node_of_dof.empty()) throw std::invalid_argument("build_grid: domain has no interior nodes");
  if (omega_count == 0) throw std::invalid_argument("build_grid: omega does not meet the domain");
  if (overlap == 0) throw std::invalid_argument("build_grid: O1 and O2 do not overlap");

  // 3/5/7-point -Laplacian over interior dofs, Dirichlet outside the mask.
  SparseOperator& L = g.laplacian;
  L.n = g.num_dofs();
  L.row_ptr.assign(L.n + 1, 0);
  const int stride[3] = {1, g.n[0], g.n[0] * g.n[1]};
  for (int d = 0; d < L.n; ++d) {
    const int node = g.node_of_dof[d];
    double diag_val = 0.0;
    // neighbours in ascending node order keep columns sorted
    std::array<std::pair<int, double>, 6> nb;
    int nnb = 0;
    for (int a = geom.dim - 1; a >= 0; --a) {
      const double ih2 = 1.0 / (g.spacing[a] * g.spacing[a]);
      diag_val += 2.0 * ih2;
      const int prev = node - stride[a];
      if (g.dof_of_node[prev] >= 0) nb[nnb++] = {g.dof_of_node[prev], -ih2};
    }
    for (int a = 0; a < geom.dim; ++a) {
      const double ih2 = 1.0 / (g.spacing[a] * g.spacing[a]);
      const int next = node + stride[a];
      if (g.dof_of_node[next] >= 0) nb[nnb++] = {g.dof_of_node[next], -ih2};
    }
    // lower neighbours (collected in reverse axis order) are already ascending;
    // insert the diagonal between the lower and upper halves
    int lower = 0;
    for (int q = 0; q < nnb; ++q)
      if (nb[q].first < d) ++lower;
    for (int q = 0; q < lower; ++q) {
      L.cols.push_back(nb[q].first);
      L.vals.push_back(nb[q].second);
    }
    L.diag.push_back(static_cast<int>(L.vals.size()));
    L.cols.push_back(d);
    L.vals.push_back(diag_val);
    for (int q = lower; q < nnb; ++q) {
      L.cols.push_back(nb[q].first);
      L.vals.push_back(nb[q].second);
    }
    L.row_ptr[d + 1] = static_cast<int>(L.vals.size());
  }
  return g;
}

const std::vector<std::uint8_t>& region_mask(const Grid& g, Region r) {
  switch (r) {
    case Region::domain: return g.domain_mask;
    case Region::omega: return g.omega_mask;
    case Region::o1: return g.o1_mask;
    default: return g.o2_mask;
  }
}

double inner_product(const Grid& g, const Field& a, const Field& b, Region r) {
  if (a.size() != b.size() || static_cast<int>(a.size()) != g.num_nodes())
    throw std::invalid_argument("inner_product: field does not match grid");
  const auto& mask = region_mask(g, r);
  double s = 0.0;
  for (int i = 0; i < g.num_nodes(); ++i)
    if (mask[i]) s += g.weight[i] * a[i] * b[i];
  return s;
}

double norm(const Grid& g, const Field& a, Region r) { return std::sqrt(inner_product(g, a, a, r)); }

Field zero_field(const Grid& g) { return Field(g.num_nodes(), 0.0); }

Control zero_control(const Grid& g, const TimeGrid& tg) {
  Control v;
  v.steps.assign(tg.nt, zero_field(g));
  return v;
}

double control_inner(const Grid& g, const TimeGrid& tg, const Control& a, const Control& b) {
  if (a.nt() != tg.nt || b.nt() != tg.nt)
    throw std::invalid_argument("control_inner: control does not match time grid");
  double s = 0.0;
  for (int m = 0; m < tg.nt; ++m) s += inner_product(g, a.steps[m], b.steps[m], Region::omega);
  return s * tg.dt();
}

double control_norm(const Grid& g, const TimeGrid& tg, const Control& a) {
  return std::sqrt(control_inner(g, tg, a, a));
}

void axpy(double a, const Control& x, Control& y) {
  if (x.nt() != y.nt()) throw std::invalid_argument("control axpy: length mismatch");
  for (int m = 0; m < x.nt(); ++m) {
    const Field& xs = x.steps[m];
    Field& ys = y.steps[m];
    for (std::size_t i = 0; i < ys.size(); ++i) ys[i] += a * xs[i];
  }
}

void scale(Control& x, double a) {
  for (auto& step : x.steps)
    for (double& v : step) v *= a;
}

void zero_outside_omega(const Grid& g, Field& f) {
  for (int i = 0; i < g.num_nodes(); ++i)
    if (!g.omega_mask[i]) f[i] = 0.0;
}

void zero_outside_omega(const Grid& g, Control& v) {
  for (auto& s : v.steps) zero_outside_omega(g, s);
}

}  // namespace pareto
