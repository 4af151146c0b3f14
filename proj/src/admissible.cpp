#include "pareto/admissible.hpp"

#include <cmath>
#include <stdexcept>

namespace pareto {

Control project(const AdmissibleSet& set, const Grid& g, const TimeGrid& tg, Control v) {
  zero_outside_omega(g, v);
  if (std::holds_alternative<FullSpace>(set)) return v;
  if (const auto* ball = std::get_if<L2Ball>(&set)) {
    if (!(ball->radius > 0)) throw std::invalid_argument("project: ball radius must be positive");
    const double nv = control_norm(g, tg, v);
    if (nv > ball->radius) {
      const double s = ball->radius / nv;
      for (auto& step : v.steps)
        for (double& x : step) x *= s;
    }
    return v;
  }
  const auto& box = std::get<Box>(set);
  if (!(box.bound > 0)) throw std::invalid_argument("project: box bound must be positive");
  for (auto& step : v.steps)
    for (double& x : step) {
      if (x > box.bound) x = box.bound;
      else if (x < -box.bound) x = -box.bound;
    }
  return v;
}

bool contains(const AdmissibleSet& set, const Grid& g, const TimeGrid& tg, const Control& v,
              double tol) {
  if (std::holds_alternative<FullSpace>(set)) return true;
  if (const auto* ball = std::get_if<L2Ball>(&set)) {
    const double slack = tol * std::max(1.0, ball->radius);
    return control_norm(g, tg, v) <= ball->radius + slack;
  }
  const auto& box = std::get<Box>(set);
  const double slack = tol * std::max(1.0, box.bound);
  for (int m = 0; m < v.nt(); ++m) {
    const Field& step = v.steps[m];
    for (int i = 0; i < g.num_nodes(); ++i)
      if (g.omega_mask[i] && std::abs(step[i]) > box.bound + slack) return false;
  }
  return true;
}

}  // namespace pareto
