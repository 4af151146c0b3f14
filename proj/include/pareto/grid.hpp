// Masked structured grids: a uniform node lattice over a bounding box, with
// boolean masks selecting the computational domain, the control region omega
// and the two observation regions O1/O2.  Nodes outside the domain mask carry
// homogeneous Dirichlet data and never enter the discrete operators.
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "pareto/sparse.hpp"

namespace pareto {

using Field = std::vector<double>;  // one value per lattice node, row-major

// Axis-aligned box; membership is closed (boundary points belong to the box).
struct BoxShape {
  std::array<double, 3> lo{0, 0, 0};
  std::array<double, 3> hi{0, 0, 0};
};

// Ball around a center; open membership when used as the domain, closed when
// used as a subregion (the distinction only matters on the bounding box).
struct BallShape {
  std::array<double, 3> center{0, 0, 0};
  double radius = 0;
};

// Cylinder with axis along z: {x^2 + y^2 < r^2} x [z_lo, z_hi].  3-d only.
struct CylinderShape {
  double radius = 0;
  double z_lo = 0;
  double z_hi = 0;
};

using Shape = std::variant<BoxShape, BallShape, CylinderShape>;

struct GeometrySpec {
  int dim = 1;                          // 1, 2 or 3
  std::array<int, 3> nodes{2, 1, 1};    // lattice nodes per axis (>= 2 used axes)
  std::array<double, 3> lo{0, 0, 0};    // bounding box, per axis
  std::array<double, 3> hi{1, 0, 0};
  Shape domain = BoxShape{};
  Shape omega = BoxShape{};
  Shape o1 = BoxShape{};
  Shape o2 = BoxShape{};
};

struct TimeGrid {
  double horizon = 0;  // T
  int nt = 0;          // number of implicit-Euler steps
  double dt() const { return horizon / nt; }
};

// Immutable after build_grid().  Quadrature weight per node: the product of
// the grid spacings on interior (domain-mask) nodes, zero elsewhere; this
// mass-lumped rule keeps the discrete Laplacian self-adjoint in the weighted
// inner product, which the adjoint solvers rely on.
struct Grid {
  int dim = 0;
  std::array<int, 3> n{1, 1, 1};
  std::array<double, 3> lo{0, 0, 0};
  std::array<double, 3> spacing{0, 0, 0};

  std::vector<std::uint8_t> domain_mask;  // true = unknown (interior) node
  std::vector<std::uint8_t> omega_mask;   // control region, subset of domain
  std::vector<std::uint8_t> o1_mask;      // observation regions, subsets of domain
  std::vector<std::uint8_t> o2_mask;
  std::vector<double> weight;             // quadrature weight per node

  std::vector<int> dof_of_node;  // -1 outside the domain mask
  std::vector<int> node_of_dof;
  SparseOperator laplacian;      // 2d/3d: 5/7-point -Laplacian over dofs

  int num_nodes() const { return n[0] * n[1] * n[2]; }
  int num_dofs() const { return static_cast<int>(node_of_dof.size()); }
  int node_index(int i, int j, int k) const { return (k * n[1] + j) * n[0] + i; }
  std::array<double, 3> coords(int node) const;
  double cell_volume() const { return weight_unit_; }

  double weight_unit_ = 0;  // product of spacings over used axes
};

enum class Region { domain, omega, o1, o2 };

// Builds masks, weights and the interior Laplacian.  Throws std::invalid_argument
// when the interior, omega-cap-domain or o1-cap-o2 node sets come out empty.
Grid build_grid(const GeometrySpec& geom);

const std::vector<std::uint8_t>& region_mask(const Grid& g, Region r);

// Weighted inner product sum_i w_i a_i b_i over nodes of the given region.
double inner_product(const Grid& g, const Field& a, const Field& b, Region r);
double norm(const Grid& g, const Field& a, Region r);

Field zero_field(const Grid& g);

// Evaluates f(x,y,z) at every domain node (zero outside the mask).
template <class F>
Field field_from_function(const Grid& g, F&& f) {
  Field out(g.num_nodes(), 0.0);
  for (int node = 0; node < g.num_nodes(); ++node) {
    if (!g.domain_mask[node]) continue;
    auto c = g.coords(node);
    out[node] = f(c[0], c[1], c[2]);
  }
  return out;
}

// --- space-time controls ---------------------------------------------------
//
// A control holds one spatial field per implicit-Euler step; steps[m-1] is the
// value used by step m (the control is indexed at the right endpoint of each
// time slab).  Values are supported on the omega mask.
struct Control {
  std::vector<Field> steps;
  int nt() const { return static_cast<int>(steps.size()); }
};

Control zero_control(const Grid& g, const TimeGrid& tg);

// sum_m dt (a_m, b_m) over omega, the discrete L2(omega x (0,T)) pairing.
double control_inner(const Grid& g, const TimeGrid& tg, const Control& a, const Control& b);
double control_norm(const Grid& g, const TimeGrid& tg, const Control& a);

void axpy(double a, const Control& x, Control& y);  // y += a x
void scale(Control& x, double a);

void zero_outside_omega(const Grid& g, Field& f);
void zero_outside_omega(const Grid& g, Control& v);

}  // namespace pareto
