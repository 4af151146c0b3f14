// Admissible control sets and their metric projections in the weighted
// space-time norm.
#pragma once

#include <variant>

#include "pareto/grid.hpp"

namespace pareto {

struct FullSpace {};

// Centered L2(omega x (0,T)) ball of the given radius; projection is radial
// scaling in the quadrature-weighted norm.
struct L2Ball {
  double radius = 1.0;
};

// Pointwise bound |v| <= bound a.e.; projection clamps each nodal value and is
// bitwise idempotent.
struct Box {
  double bound = 1.0;
};

using AdmissibleSet = std::variant<FullSpace, L2Ball, Box>;

Control project(const AdmissibleSet& set, const Grid& g, const TimeGrid& tg, Control v);
bool contains(const AdmissibleSet& set, const Grid& g, const TimeGrid& tg, const Control& v,
              double tol = 1e-12);

}  // namespace pareto
